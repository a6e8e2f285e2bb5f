#include "homfinsler/coset.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numeric>
#include <random>

namespace homfinsler {

namespace {

// Gram-Schmidt of the candidate columns w.r.t. the metric, after removing the
// span of `against` (assumed metric-orthonormal). Candidates whose remainder
// falls below tol are dropped.
Eigen::MatrixXd orthonormalize(const Eigen::MatrixXd& candidates, const Eigen::MatrixXd& metric,
                               const Eigen::MatrixXd& against, double tol) {
  std::vector<Eigen::VectorXd> out;
  for (Eigen::Index c = 0; c < candidates.cols(); ++c) {
    Eigen::VectorXd v = candidates.col(c);
    for (int pass = 0; pass < 2; ++pass) {
      for (Eigen::Index k = 0; k < against.cols(); ++k) v -= against.col(k).dot(metric * v) * against.col(k);
      for (const auto& q : out) v -= q.dot(metric * v) * q;
    }
    const double n = std::sqrt(v.dot(metric * v));
    if (n > tol) out.push_back(v / n);
  }
  Eigen::MatrixXd m(candidates.rows(), static_cast<Eigen::Index>(out.size()));
  for (std::size_t k = 0; k < out.size(); ++k) m.col(static_cast<Eigen::Index>(k)) = out[k];
  return m;
}

// Orthonormal basis (Frobenius) of {X : X A_k = A_k X for all k}.
std::vector<Eigen::MatrixXd> commutant(const std::vector<Eigen::MatrixXd>& actions, int n) {
  const int n2 = n * n;
  Eigen::MatrixXd normal = Eigen::MatrixXd::Zero(n2, n2);
  const Eigen::MatrixXd I = Eigen::MatrixXd::Identity(n, n);
  for (const auto& A : actions) {
    // vec(X A - A X) = (A^T ⊗ I - I ⊗ A) vec(X), column-major vec
    Eigen::MatrixXd K = Eigen::MatrixXd::Zero(n2, n2);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) {
        K.block(i * n, j * n, n, n) += A(j, i) * I;
        if (i == j) K.block(i * n, j * n, n, n) -= A;
      }
    normal.noalias() += K.transpose() * K;
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(normal);
  const double scale = std::max(1.0, es.eigenvalues().cwiseAbs().maxCoeff());
  std::vector<Eigen::MatrixXd> basis;
  for (int k = 0; k < n2; ++k) {
    if (es.eigenvalues()(k) > 1e-12 * scale) break;
    basis.push_back(Eigen::Map<const Eigen::MatrixXd>(es.eigenvectors().col(k).data(), n, n));
  }
  return basis;
}

std::vector<Eigen::MatrixXd> restricted_actions(const CompactLieAlgebra& g, const Eigen::MatrixXd& H,
                                                const Eigen::MatrixXd& M) {
  std::vector<Eigen::MatrixXd> out;
  for (Eigen::Index k = 0; k < H.cols(); ++k) out.push_back(M.transpose() * g.gram() * g.ad(H.col(k)) * M);
  return out;
}

struct UnionFind {
  std::vector<std::size_t> parent;
  explicit UnionFind(std::size_t n) : parent(n) { std::iota(parent.begin(), parent.end(), 0); }
  std::size_t find(std::size_t x) { return parent[x] == x ? x : parent[x] = find(parent[x]); }
  void join(std::size_t a, std::size_t b) { parent[find(a)] = find(b); }
};

std::string format_number(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6g", x);
  return buf;
}

}  // namespace

// ---------------------------------------------------------------------------

std::string SpanItem::str() const {
  switch (kind) {
    case Kind::Torus: return "torus " + join(coords);
    case Kind::Plane: {
      std::string s = "plane " + join(coords);
      if (angle != 0.0) {
        char buf[40];
        std::snprintf(buf, sizeof buf, " @ %.17g", angle);
        s += buf;
      }
      return s;
    }
    case Kind::Vector: {
      std::string s = "vector";
      char buf[40];
      for (Eigen::Index i = 0; i < vector.size(); ++i) {
        std::snprintf(buf, sizeof buf, " %.17g", vector(i));
        s += buf;
      }
      return s;
    }
  }
  return {};
}

Eigen::MatrixXd span_vectors(const CompactLieAlgebra& g, const SpanItem& item) {
  switch (item.kind) {
    case SpanItem::Kind::Torus: return g.torus(to_eigen(item.coords));
    case SpanItem::Kind::Plane: {
      auto idx = g.roots().index_of(to_eigen(item.coords));
      if (!idx) throw InputError("'" + vector_label(item.coords) + "' is not a root");
      const auto [u, v] = g.plane(*idx);
      Eigen::MatrixXd m(g.dim(), 2);
      m.col(0) = g.basis(u);
      m.col(1) = g.basis(v);
      return m;
    }
    case SpanItem::Kind::Vector:
      if (item.vector.size() != g.dim()) throw InputError("explicit vector has the wrong length");
      return item.vector;
  }
  return {};
}

AlgebraVector item_vector(const CompactLieAlgebra& g, const SpanItem& item) {
  const Eigen::MatrixXd span = span_vectors(g, item);
  if (item.kind != SpanItem::Kind::Plane) return span.col(0);
  const AlgebraVector u = span.col(0) / g.norm(span.col(0));
  const AlgebraVector v = span.col(1) / g.norm(span.col(1));
  return std::cos(item.angle) * u + std::sin(item.angle) * v;
}

std::vector<int> ReductiveSplit::summand_dims() const {
  std::vector<int> d;
  for (const auto& s : summands) d.push_back(s.dim);
  return d;
}

Eigen::VectorXd ReductiveSplit::m_coords(const AlgebraVector& x) const {
  return m_basis.transpose() * (algebra->gram() * x);
}

AlgebraVector ReductiveSplit::h_component(const AlgebraVector& x) const {
  return h_basis * (h_basis.transpose() * (algebra->gram() * x));
}

Eigen::MatrixXd ReductiveSplit::summand_basis(std::size_t i) const {
  return m_basis.middleCols(summands[i].offset, summands[i].dim);
}

int ReductiveSplit::summand_of(const Eigen::VectorXd& coords, double tol) const {
  const double total = coords.norm();
  if (total == 0.0) return -1;
  for (std::size_t i = 0; i < summands.size(); ++i) {
    const double inside = coords.segment(summands[i].offset, summands[i].dim).norm();
    if (std::sqrt(std::max(0.0, total * total - inside * inside)) <= tol * total) return static_cast<int>(i);
  }
  return -1;
}

AlgebraVector project_m(const ReductiveSplit& split, const AlgebraVector& x) {
  return split.from_m(split.m_coords(x));
}

// ---------------------------------------------------------------------------

ReductiveSplit reductive_split(std::shared_ptr<const CompactLieAlgebra> gp, const SubalgebraSpec& spec,
                               const SplitOptions& options) {
  const CompactLieAlgebra& g = *gp;
  const Eigen::MatrixXd& G = g.gram();
  const int dim = g.dim();

  std::vector<Eigen::VectorXd> gens;
  for (const auto& t : spec.torus_part) gens.push_back(g.torus(to_eigen(t)));
  for (const auto& r : spec.root_part) {
    const Eigen::MatrixXd p = span_vectors(g, SpanItem::plane(r));
    gens.push_back(p.col(0));
    gens.push_back(p.col(1));
  }
  for (const auto& x : spec.extra_generators) {
    if (x.size() != dim) throw InputError("extra generator has the wrong length");
    gens.push_back(x);
  }
  Eigen::MatrixXd cand(dim, static_cast<Eigen::Index>(gens.size()));
  for (std::size_t i = 0; i < gens.size(); ++i) cand.col(static_cast<Eigen::Index>(i)) = gens[i];
  const Eigen::MatrixXd H = orthonormalize(cand, G, Eigen::MatrixXd(dim, 0), 1e-10);

  double closure = 0.0;
  for (Eigen::Index i = 0; i < H.cols(); ++i)
    for (Eigen::Index j = i + 1; j < H.cols(); ++j) {
      const AlgebraVector b = g.bracket(H.col(i), H.col(j));
      closure = std::max(closure, g.norm(b - H * (H.transpose() * (G * b))));
    }
  if (closure > 1e-10) throw InputError("h is not a subalgebra: bracket residual " + format_number(closure));

  const Eigen::MatrixXd& W = g.orthonormal_basis();
  const Eigen::MatrixXd M0 = orthonormalize(W, G, H, 1e-8);
  const int dm = static_cast<int>(M0.cols());
  if (dm + H.cols() != dim) throw NumericalError("complement of h has the wrong dimension", dm);

  // isotypic components of ad(h)|_m
  const auto actions = restricted_actions(g, H, M0);
  const auto comm = commutant(actions, dm);
  std::mt19937_64 rng(options.seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  Eigen::MatrixXd S = Eigen::MatrixXd::Zero(dm, dm);
  for (const auto& X : comm) S += normal(rng) * (X + X.transpose());
  if (S.norm() > 0) S /= S.norm();
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(S);

  std::vector<std::vector<int>> clusters;
  for (int k = 0; k < dm; ++k) {
    if (k > 0) {
      const double gap = es.eigenvalues()(k) - es.eigenvalues()(k - 1);
      if (gap < 1e-10) {
        clusters.back().push_back(k);
        continue;
      }
      if (gap < options.ambiguity_gap)
        throw NumericalError("isotypic splitting is numerically ambiguous: eigenvalue gap", gap);
    }
    clusters.push_back({k});
  }
  std::vector<Eigen::MatrixXd> blocks;
  for (const auto& c : clusters) {
    Eigen::MatrixXd E(dm, static_cast<Eigen::Index>(c.size()));
    for (std::size_t j = 0; j < c.size(); ++j) E.col(static_cast<Eigen::Index>(j)) = es.eigenvectors().col(c[j]);
    blocks.push_back(E);
  }
  UnionFind uf(blocks.size());
  for (std::size_t a = 0; a < blocks.size(); ++a)
    for (std::size_t b = a + 1; b < blocks.size(); ++b)
      for (const auto& X : comm)
        if ((blocks[a].transpose() * X * blocks[b]).norm() > 1e-8) {
          uf.join(a, b);
          break;
        }

  // re-base each isotypic block on projections of the structured basis of g
  const Eigen::MatrixXd structured = M0.transpose() * G * W;
  std::vector<Eigen::MatrixXd> summand_bases;
  for (std::size_t root = 0; root < blocks.size(); ++root) {
    if (uf.find(root) != root) continue;
    Eigen::MatrixXd P = Eigen::MatrixXd::Zero(dm, dm);
    int d = 0;
    for (std::size_t b = 0; b < blocks.size(); ++b)
      if (uf.find(b) == root) {
        P += blocks[b] * blocks[b].transpose();
        d += static_cast<int>(blocks[b].cols());
      }
    Eigen::MatrixXd B = orthonormalize(P * structured, Eigen::MatrixXd::Identity(dm, dm), Eigen::MatrixXd(dm, 0), 1e-8);
    if (B.cols() != d) B = orthonormalize(P, Eigen::MatrixXd::Identity(dm, dm), Eigen::MatrixXd(dm, 0), 1e-8);
    if (B.cols() != d) throw NumericalError("could not re-base isotypic summand", std::abs(B.cols() - d));
    summand_bases.push_back(M0 * B);
  }

  ReductiveSplit split;
  split.algebra = gp;
  split.h_basis = H;
  split.m_basis = M0;  // provisional, replaced below
  {
    Eigen::MatrixXd all(dim, dm);
    int off = 0;
    for (const auto& B : summand_bases) {
      all.middleCols(off, B.cols()) = B;
      split.summands.push_back({off, static_cast<int>(B.cols())});
      off += static_cast<int>(B.cols());
    }
    split.m_basis = all;
  }

  // canonical order
  std::vector<SummandContent> content;
  for (std::size_t i = 0; i < split.summands.size(); ++i) content.push_back(summand_content(split, i));
  std::vector<std::size_t> order(split.summands.size());
  std::iota(order.begin(), order.end(), 0);
  std::vector<std::vector<int>> keys(order.size());
  for (std::size_t i = 0; i < order.size(); ++i)
    for (std::size_t p : content[i].planes) keys[i].push_back(g.roots().order(p));
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    if (split.summands[a].dim != split.summands[b].dim) return split.summands[a].dim < split.summands[b].dim;
    return keys[a] < keys[b];
  });
  std::vector<std::size_t> central;
  for (std::size_t i : order) {
    if (split.summands[i].dim != 1) continue;
    const AlgebraVector x = split.summand_basis(i).col(0);
    double r = 0.0;
    for (Eigen::Index k = 0; k < H.cols(); ++k) r = std::max(r, g.norm(g.bracket(x, H.col(k))));
    if (r < 1e-10) central.push_back(i);
  }
  if (central.size() == 1) {
    order.erase(std::find(order.begin(), order.end(), central[0]));
    order.push_back(central[0]);
  }
  ReductiveSplit sorted = split;
  sorted.summands.clear();
  int off = 0;
  for (std::size_t i : order) {
    sorted.m_basis.middleCols(off, split.summands[i].dim) = split.summand_basis(i);
    sorted.summands.push_back({off, split.summands[i].dim});
    off += split.summands[i].dim;
  }

  const double inv = invariance_residual(sorted);
  if (inv > 1e-10) throw NumericalError("summands are not ad(h)-invariant", inv);
  return sorted;
}

ReductiveSplit align_split(const ReductiveSplit& split, const std::vector<std::vector<SpanItem>>& declared) {
  const CompactLieAlgebra& g = *split.algebra;
  const int dm = split.dim_m();
  ReductiveSplit out = split;
  out.summands.clear();
  std::vector<bool> used(split.summands.size(), false);
  int off = 0;
  for (std::size_t d = 0; d < declared.size(); ++d) {
    std::vector<Eigen::VectorXd> cols;
    for (const auto& item : declared[d]) {
      const Eigen::MatrixXd v = span_vectors(g, item);
      for (Eigen::Index c = 0; c < v.cols(); ++c) {
        const double hpart = g.norm(split.h_component(v.col(c)));
        if (hpart > 1e-9 * g.norm(v.col(c)))
          throw FixtureIntegrityError("declared summand " + std::to_string(d + 1) + " item '" + item.str() +
                                      "' is not contained in m");
        cols.push_back(split.m_coords(v.col(c)));
      }
    }
    Eigen::MatrixXd C(dm, static_cast<Eigen::Index>(cols.size()));
    for (std::size_t c = 0; c < cols.size(); ++c) C.col(static_cast<Eigen::Index>(c)) = cols[c];
    const Eigen::MatrixXd B = orthonormalize(C, Eigen::MatrixXd::Identity(dm, dm), Eigen::MatrixXd(dm, 0), 1e-9);
    const Eigen::MatrixXd P = B * B.transpose();
    bool matched = false;
    for (std::size_t s = 0; s < split.summands.size() && !matched; ++s) {
      if (used[s] || split.summands[s].dim != B.cols()) continue;
      Eigen::MatrixXd Q = Eigen::MatrixXd::Zero(dm, dm);
      const auto& sm = split.summands[s];
      Q.block(sm.offset, sm.offset, sm.dim, sm.dim).setIdentity();
      if ((P - Q).norm() < 1e-8) {
        used[s] = true;
        matched = true;
      }
    }
    if (!matched)
      throw FixtureIntegrityError("declared summand " + std::to_string(d + 1) + " (dim " + std::to_string(B.cols()) +
                                  ") does not match any computed isotypic summand");
    out.m_basis.middleCols(off, B.cols()) = split.m_basis * B;
    out.summands.push_back({off, static_cast<int>(B.cols())});
    off += static_cast<int>(B.cols());
  }
  if (off != dm)
    throw FixtureIntegrityError("declared summands cover dim " + std::to_string(off) + " of m (dim " +
                                std::to_string(dm) + ")");
  return out;
}

double invariance_residual(const ReductiveSplit& split) {
  const CompactLieAlgebra& g = *split.algebra;
  double worst = 0.0;
  for (std::size_t i = 0; i < split.summands.size(); ++i) {
    const Eigen::MatrixXd B = split.summand_basis(i);
    for (Eigen::Index k = 0; k < split.h_basis.cols(); ++k)
      for (Eigen::Index c = 0; c < B.cols(); ++c) {
        const AlgebraVector b = g.bracket(split.h_basis.col(k), B.col(c));
        const AlgebraVector inside = B * (B.transpose() * (g.gram() * b));
        worst = std::max(worst, g.norm(b - inside));
      }
  }
  return worst;
}

double commutant_offdiagonal(const ReductiveSplit& split) {
  const auto actions = restricted_actions(*split.algebra, split.h_basis, split.m_basis);
  const auto comm = commutant(actions, split.dim_m());
  double worst = 0.0;
  for (const auto& X : comm)
    for (const auto& a : split.summands)
      for (const auto& b : split.summands) {
        if (a.offset == b.offset) continue;
        worst = std::max(worst, X.block(a.offset, b.offset, a.dim, b.dim).norm());
      }
  return worst;
}

// ---------------------------------------------------------------------------

namespace {

// Number of singular values of A^T G B close to one: dim of the intersection
// of two orthonormal subspaces; also returns a basis (in A's coordinates).
std::pair<int, Eigen::MatrixXd> intersection(const Eigen::MatrixXd& A, const Eigen::MatrixXd& B,
                                             const Eigen::MatrixXd& G) {
  if (A.cols() == 0 || B.cols() == 0) return {0, Eigen::MatrixXd(A.cols(), 0)};
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(A.transpose() * G * B, Eigen::ComputeFullU);
  int k = 0;
  while (k < svd.singularValues().size() && svd.singularValues()(k) > 1 - 1e-9) ++k;
  return {k, svd.matrixU().leftCols(k)};
}

}  // namespace

int rank_gap(const ReductiveSplit& split) {
  const CompactLieAlgebra& g = *split.algebra;
  const Eigen::MatrixXd T = g.orthonormal_basis().leftCols(g.rank());
  const auto [dth, coeffs] = intersection(T, split.h_basis, g.gram());
  const Eigen::MatrixXd TH = T * coeffs;
  // centralizer of t ∩ h inside h must be t ∩ h itself
  const int dh = split.dim_h();
  if (dh > 0) {
    Eigen::MatrixXd eqs(g.dim() * std::max<Eigen::Index>(TH.cols(), 1), dh);
    eqs.setZero();
    for (Eigen::Index j = 0; j < TH.cols(); ++j) eqs.middleRows(j * g.dim(), g.dim()) = g.ad(TH.col(j)) * split.h_basis;
    Eigen::FullPivLU<Eigen::MatrixXd> lu(eqs);
    lu.setThreshold(1e-10);
    const int centralizer = dh - static_cast<int>(lu.rank());
    if (centralizer != dth)
      throw InputError("t ∩ h (dim " + std::to_string(dth) + ") is not a Cartan subalgebra of h (centralizer dim " +
                       std::to_string(centralizer) + ")");
  }
  return intersection(T, split.m_basis, g.gram()).first;
}

double CentralLineReport::max_residual() const {
  double m = 0.0;
  for (double r : residuals) m = std::max(m, r);
  return m;
}

namespace {

CentralLineReport central_line_residuals(const ReductiveSplit& split, const AlgebraVector& x, std::size_t skip) {
  const CompactLieAlgebra& g = *split.algebra;
  CentralLineReport report;
  for (Eigen::Index k = 0; k < split.h_basis.cols(); ++k)
    report.centralizer_residual = std::max(report.centralizer_residual, g.norm(g.bracket(x, split.h_basis.col(k))));
  for (std::size_t i = 0; i < split.summands.size(); ++i) {
    if (i == skip) continue;
    Eigen::MatrixXd B = split.summand_basis(i);
    // drop the direction itself from its own summand
    const Eigen::VectorXd xc = B.transpose() * (g.gram() * x);
    if (xc.norm() > 1e-12) {
      Eigen::MatrixXd cand(B.rows(), B.cols() + 1);
      cand.col(0) = x;
      cand.rightCols(B.cols()) = B;
      Eigen::MatrixXd full = orthonormalize(cand, g.gram(), Eigen::MatrixXd(B.rows(), 0), 1e-9);
      B = full.rightCols(full.cols() - 1);
    }
    const Eigen::MatrixXd Bi = split.summand_basis(i);
    double worst = 0.0;
    for (Eigen::Index c = 0; c < B.cols(); ++c) {
      const AlgebraVector b = g.bracket(x, B.col(c));
      worst = std::max(worst, g.norm(b - Bi * (Bi.transpose() * (g.gram() * b))));
    }
    report.residuals.push_back(worst);
  }
  return report;
}

}  // namespace

CentralLineReport check_central_line(const ReductiveSplit& split) {
  if (split.summands.empty() || split.summands.back().dim != 1)
    throw InputError("check_central_line: the last summand must be one-dimensional");
  const std::size_t s = split.summands.size() - 1;
  const AlgebraVector x = split.summand_basis(s).col(0);
  CentralLineReport report = central_line_residuals(split, x, s);
  if (report.centralizer_residual > 1e-10)
    throw InputError("check_central_line: last summand does not centralize h (residual " +
                     format_number(report.centralizer_residual) + ")");
  return report;
}

CentralLineReport check_central_line(const ReductiveSplit& split, const AlgebraVector& direction) {
  const CompactLieAlgebra& g = *split.algebra;
  if (g.norm(split.h_component(direction)) > 1e-9 * g.norm(direction))
    throw InputError("check_central_line: direction is not in m");
  const AlgebraVector x = direction / g.norm(direction);
  CentralLineReport report = central_line_residuals(split, x, split.summands.size());
  if (report.centralizer_residual > 1e-10)
    throw InputError("check_central_line: direction does not centralize h (residual " +
                     format_number(report.centralizer_residual) + ")");
  return report;
}

// ---------------------------------------------------------------------------

SummandContent summand_content(const ReductiveSplit& split, std::size_t i) {
  const CompactLieAlgebra& g = *split.algebra;
  const RootSystem& rs = g.roots();
  const Eigen::MatrixXd B = split.summand_basis(i);
  auto inside = [&](const AlgebraVector& x) {
    const AlgebraVector p = B * (B.transpose() * (g.gram() * x));
    return g.norm(x - p) < 1e-8 * g.norm(x);
  };
  SummandContent c;
  for (std::size_t p : rs.positive()) {
    const auto [u, v] = g.plane(p);
    if (inside(g.basis(u)) && inside(g.basis(v))) c.planes.push_back(p);
  }
  const Eigen::MatrixXd T = g.orthonormal_basis().leftCols(g.rank());
  const auto [k, coeffs] = intersection(T, B, g.gram());
  c.torus.resize(rs.ambient_dim(), k);
  for (int j = 0; j < k; ++j) {
    Eigen::VectorXd amb = rs.cartan_frame() * coeffs.col(j);
    double smallest = 0.0;
    for (Eigen::Index q = 0; q < amb.size(); ++q)
      if (std::abs(amb(q)) > 1e-9 && (smallest == 0.0 || std::abs(amb(q)) < smallest)) smallest = std::abs(amb(q));
    amb /= smallest;
    for (Eigen::Index q = 0; q < amb.size(); ++q)
      if (std::abs(amb(q)) > 1e-9) {
        if (amb(q) < 0) amb = -amb;
        break;
      }
    c.torus.col(j) = amb;
  }
  return c;
}

std::string SummandContent::str(const RootSystem& rs) const {
  std::string s;
  for (Eigen::Index j = 0; j < torus.cols(); ++j) {
    if (!s.empty()) s += " + ";
    std::string t;
    for (Eigen::Index q = 0; q < torus.rows(); ++q) {
      const double x = torus(q, j);
      if (std::abs(x) < 1e-9) continue;
      std::string num = format_number(std::abs(x));
      if (num == "1") num.clear();
      t += (x < 0 ? "-" : (t.empty() ? "" : "+")) + num + "e" + std::to_string(q + 1);
    }
    s += "R(" + t + ")";
  }
  for (std::size_t p : planes) {
    if (!s.empty()) s += " + ";
    s += "g(" + rs.label(p) + ")";
  }
  return s.empty() ? "(mixed)" : s;
}

}  // namespace homfinsler
