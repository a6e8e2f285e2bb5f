#include "homfinsler/liealg.hpp"

#include <cmath>

#include "homfinsler/errors.hpp"

namespace homfinsler {

// ---------------------------------------------------------------------------
// Chevalley constants
// ---------------------------------------------------------------------------

ChevalleyConstants::ChevalleyConstants(const RootSystem& rs) : rs_(&rs) {
  for (std::size_t xi : rs.positive()) {
    if (rs.height(xi) == 1) continue;
    for (std::size_t a : rs.positive()) {
      auto b = rs.index_of(rs.root(xi) - rs.root(a));
      if (b && rs.is_positive(*b)) {
        extraspecial_[xi] = {a, *b};
        break;
      }
    }
  }
  n_ = rs.size();
  table_.assign(n_ * n_, 0.0);
  for (std::size_t a = 0; a < n_; ++a)
    for (std::size_t b = 0; b < n_; ++b)
      if (sum(a, b)) table_[a * n_ + b] = value(a, b);
  memo_.clear();
  rs_ = nullptr;
}

std::optional<std::size_t> ChevalleyConstants::sum(std::size_t a, std::size_t b) const {
  return rs_->index_of(rs_->root(a) + rs_->root(b));
}

std::pair<std::size_t, std::size_t> ChevalleyConstants::extraspecial(std::size_t xi) const {
  auto it = extraspecial_.find(xi);
  if (it == extraspecial_.end()) throw InputError("root " + rs_->label(xi) + " has no extraspecial pair");
  return it->second;
}

double ChevalleyConstants::operator()(std::size_t a, std::size_t b) const { return table_[a * n_ + b]; }

double ChevalleyConstants::value(std::size_t a, std::size_t b) {
  if (!sum(a, b)) return 0.0;
  auto key = std::make_pair(a, b);
  if (auto it = memo_.find(key); it != memo_.end()) return it->second;
  const double n = compute(a, b);
  memo_[key] = n;
  return n;
}

// Reduction rules (a + b + c = 0):
//   N_{b,a} = -N_{a,b},  N_{-a,-b} = -N_{a,b},
//   N_{a,b}/|c|^2 = N_{b,c}/|a|^2 = N_{c,a}/|b|^2.
double ChevalleyConstants::compute(std::size_t a, std::size_t b) {
  const auto& rs = *rs_;
  const std::size_t c = rs.negative_of(*sum(a, b));
  const int npos = int(rs.is_positive(a)) + int(rs.is_positive(b)) + int(rs.is_positive(c));
  if (npos <= 1) return -value(rs.negative_of(a), rs.negative_of(b));
  if (rs.is_positive(a) && rs.is_positive(b)) {
    if (rs.order(a) > rs.order(b)) return -value(b, a);
    return special(a, b);
  }
  if (!rs.is_positive(a)) return rs.norm2(c) / rs.norm2(a) * value(b, c);
  return rs.norm2(c) / rs.norm2(b) * value(c, a);
}

// Special pair a < b. Uses the four-root identity with (a, b, -a0, -b0).
double ChevalleyConstants::special(std::size_t a, std::size_t b) {
  const auto& rs = *rs_;
  const std::size_t xi = *sum(a, b);
  const auto [a0, b0] = extraspecial(xi);
  if (a == a0 && b == b0) return rs.string_down(a0, b0) + 1;
  const std::size_t na0 = rs.negative_of(a0);
  const std::size_t nb0 = rs.negative_of(b0);
  double acc = 0.0;
  if (auto s = sum(b, na0)) acc += value(b, na0) * value(a, nb0) / rs.norm2(*s);
  if (auto s = sum(na0, a)) acc += value(na0, a) * value(b, nb0) / rs.norm2(*s);
  return rs.norm2(xi) / value(a0, b0) * acc;
}

// ---------------------------------------------------------------------------
// Compact form
// ---------------------------------------------------------------------------

namespace {

using cd = std::complex<double>;
constexpr cd I{0.0, 1.0};

struct ComplexBasis {
  int rank = 0;
  std::vector<int> index;  // root index -> complex basis index

  ComplexBasis(const RootSystem& rs) : rank(rs.rank()), index(rs.size(), -1) {
    const auto& pos = rs.positive();
    const int np = static_cast<int>(pos.size());
    for (int j = 0; j < np; ++j) {
      index[pos[static_cast<std::size_t>(j)]] = rank + j;
      index[rs.negative_of(pos[static_cast<std::size_t>(j)])] = rank + np + j;
    }
  }
};

// Complex ad matrices in the basis (H_k, e_a (a>0), e_{-a} (a>0)).
std::vector<Eigen::MatrixXcd> complex_ad(const RootSystem& rs, const ChevalleyConstants& N, const ComplexBasis& cb) {
  const int r = rs.rank();
  const int dim = r + static_cast<int>(rs.size());
  const Eigen::MatrixXd& frame = rs.cartan_frame();
  std::vector<Eigen::MatrixXcd> ad(static_cast<std::size_t>(dim), Eigen::MatrixXcd::Zero(dim, dim));
  for (std::size_t b = 0; b < rs.size(); ++b) {
    const int jb = cb.index[b];
    for (int k = 0; k < r; ++k) {
      const double w = rs.root(b).dot(frame.col(k));
      ad[static_cast<std::size_t>(k)](jb, jb) = w;   // [H_k, e_b] = b(T_k) e_b
      ad[static_cast<std::size_t>(jb)](jb, k) = -w;  // [e_b, H_k]
    }
    for (std::size_t a = 0; a < rs.size(); ++a) {
      const int ja = cb.index[a];
      if (a == rs.negative_of(b)) {
        // [e_a, e_{-a}] = h_a = 2a/|a|^2
        const Eigen::VectorXd h = 2.0 * rs.root(a) / rs.norm2(a);
        for (int k = 0; k < r; ++k) ad[static_cast<std::size_t>(ja)](k, jb) = h.dot(frame.col(k));
      } else if (auto c = rs.index_of(rs.root(a) + rs.root(b))) {
        ad[static_cast<std::size_t>(ja)](cb.index[*c], jb) = N(a, b);
      }
    }
  }
  return ad;
}

}  // namespace

CompactLieAlgebra::CompactLieAlgebra(RootSystem rs)
    : rs_(std::move(rs)), chevalley_(rs_), dim_(rs_.rank() + static_cast<int>(rs_.size())) {
  const int r = rs_.rank();
  const auto& pos = rs_.positive();
  const int np = static_cast<int>(pos.size());
  ComplexBasis cb(rs_);

  to_chevalley_ = Eigen::MatrixXcd::Zero(dim_, dim_);
  labels_.clear();
  for (int k = 0; k < r; ++k) {
    to_chevalley_(k, k) = I;
    labels_.push_back("t" + std::to_string(k + 1));
  }
  plane_of_positive_.assign(rs_.size(), -1);
  for (int j = 0; j < np; ++j) {
    const std::size_t a = pos[static_cast<std::size_t>(j)];
    const int col = r + 2 * j;
    const int ep = cb.index[a];
    const int em = cb.index[rs_.negative_of(a)];
    to_chevalley_(ep, col) = 1.0;
    to_chevalley_(em, col) = -1.0;
    to_chevalley_(ep, col + 1) = I;
    to_chevalley_(em, col + 1) = I;
    plane_of_positive_[a] = col;
    labels_.push_back("u[" + rs_.label(a) + "]");
    labels_.push_back("v[" + rs_.label(a) + "]");
  }

  const auto adc = complex_ad(rs_, chevalley_, cb);
  const Eigen::MatrixXcd P = to_chevalley_;
  const Eigen::MatrixXcd Pinv = P.inverse();
  ad_.assign(static_cast<std::size_t>(dim_), Eigen::MatrixXd::Zero(dim_, dim_));
  for (int a = 0; a < dim_; ++a) {
    Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(dim_, dim_);
    for (int i = 0; i < dim_; ++i)
      if (P(i, a) != cd(0.0)) m += P(i, a) * adc[static_cast<std::size_t>(i)];
    const Eigen::MatrixXcd real_form = Pinv * m * P;
    const double imag = real_form.imag().cwiseAbs().maxCoeff();
    if (imag > 1e-10) throw NumericalError("compact form is not closed under brackets", imag);
    ad_[static_cast<std::size_t>(a)] = real_form.real();
  }

  Eigen::MatrixXd killing(dim_, dim_);
  for (int a = 0; a < dim_; ++a)
    for (int b = 0; b < dim_; ++b)
      killing(a, b) = (ad_[static_cast<std::size_t>(a)] * ad_[static_cast<std::size_t>(b)]).trace();
  killing_scale_ = -killing(0, 0);
  gram_ = -killing / killing_scale_;
  for (int k = 0; k < r; ++k)
    for (int l = 0; l < r; ++l)
      if (std::abs(gram_(k, l) - (k == l ? 1.0 : 0.0)) > 1e-10)
        throw NumericalError("Killing form is not proportional to the Euclidean form on t", gram_(k, l));

  Eigen::LLT<Eigen::MatrixXd> llt(gram_);
  if (llt.info() != Eigen::Success) throw NumericalError("inner product is not positive definite", 0.0);
  orthonormal_ = llt.matrixU().solve(Eigen::MatrixXd::Identity(dim_, dim_));

  const double jac = jacobi_residual();
  if (jac > kJacobiTolerance) throw NumericalError("inconsistent root data: Jacobi identity fails", jac);
}

CompactLieAlgebra build_compact_algebra(const RootSystem& rs) { return CompactLieAlgebra(rs); }

void CompactLieAlgebra::check_dim(const AlgebraVector& x) const {
  if (x.size() != dim_)
    throw InputError("algebra vector has length " + std::to_string(x.size()) + ", expected " + std::to_string(dim_));
}

Eigen::MatrixXd CompactLieAlgebra::ad(const AlgebraVector& x) const {
  check_dim(x);
  Eigen::MatrixXd out = Eigen::MatrixXd::Zero(dim_, dim_);
  for (int i = 0; i < dim_; ++i)
    if (x(i) != 0.0) out += x(i) * ad_[static_cast<std::size_t>(i)];
  return out;
}

AlgebraVector CompactLieAlgebra::bracket(const AlgebraVector& x, const AlgebraVector& y) const {
  check_dim(y);
  return ad(x) * y;
}

double CompactLieAlgebra::inner(const AlgebraVector& x, const AlgebraVector& y) const {
  check_dim(x);
  check_dim(y);
  return x.dot(gram_ * y);
}

double CompactLieAlgebra::norm(const AlgebraVector& x) const { return std::sqrt(inner(x, x)); }

AlgebraVector CompactLieAlgebra::basis(int i) const { return AlgebraVector::Unit(dim_, i); }

AlgebraVector CompactLieAlgebra::torus(const Eigen::VectorXd& ambient) const {
  if (ambient.size() != rs_.ambient_dim()) throw InputError("torus vector has wrong ambient dimension");
  const Eigen::MatrixXd& frame = rs_.cartan_frame();
  const Eigen::VectorXd c = frame.transpose() * ambient;
  const double off = (frame * c - ambient).norm();
  if (off > 1e-12) throw InputError("torus vector does not lie in the Cartan subalgebra (e.g. nonzero trace)");
  AlgebraVector x = zero();
  x.head(rs_.rank()) = c;
  return x;
}

std::pair<int, int> CompactLieAlgebra::plane(std::size_t root) const {
  const std::size_t p = rs_.is_positive(root) ? root : rs_.negative_of(root);
  const int col = plane_of_positive_[p];
  return {col, col + 1};
}

double CompactLieAlgebra::jacobi_residual() const {
  double worst = 0.0;
  const Eigen::MatrixXd& W = orthonormal_;
  for (int i = 0; i < dim_; ++i)
    for (int j = i + 1; j < dim_; ++j)
      for (int k = j + 1; k < dim_; ++k) {
        const AlgebraVector x = W.col(i), y = W.col(j), z = W.col(k);
        const AlgebraVector s = bracket(x, bracket(y, z)) + bracket(y, bracket(z, x)) + bracket(z, bracket(x, y));
        worst = std::max(worst, norm(s));
      }
  return worst;
}

double CompactLieAlgebra::ad_invariance_residual() const {
  double worst = 0.0;
  const Eigen::MatrixXd& W = orthonormal_;
  for (int i = 0; i < dim_; ++i) {
    // ad(x) must be skew-adjoint: G ad + ad^T G = 0
    const Eigen::MatrixXd A = ad(W.col(i));
    worst = std::max(worst, (gram_ * A + A.transpose() * gram_).cwiseAbs().maxCoeff());
  }
  return worst;
}

// ---------------------------------------------------------------------------
// Classical matrix realization
// ---------------------------------------------------------------------------

namespace {

// Matrix of the Chevalley generator e_a for A (E_ij) and C (sp(2n,C)) roots.
Eigen::MatrixXcd root_matrix(const RootSystem& rs, std::size_t a) {
  const Eigen::VectorXd& v = rs.root(a);
  if (rs.family() == Family::A) {
    const int n = rs.ambient_dim();
    Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(n, n);
    int i = -1, j = -1;
    for (int k = 0; k < n; ++k) {
      if (std::abs(v(k) - 1) < 1e-12) i = k;
      if (std::abs(v(k) + 1) < 1e-12) j = k;
    }
    m(i, j) = 1.0;
    return m;
  }
  const int n = rs.rank();
  Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(2 * n, 2 * n);
  std::vector<int> plus, minus, twice, mtwice;
  for (int k = 0; k < n; ++k) {
    if (std::abs(v(k) - 1) < 1e-12) plus.push_back(k);
    if (std::abs(v(k) + 1) < 1e-12) minus.push_back(k);
    if (std::abs(v(k) - 2) < 1e-12) twice.push_back(k);
    if (std::abs(v(k) + 2) < 1e-12) mtwice.push_back(k);
  }
  if (plus.size() == 1 && minus.size() == 1) {  // e_i - e_j
    const int i = plus[0], j = minus[0];
    m(i, j) = 1.0;
    m(n + j, n + i) = -1.0;
  } else if (plus.size() == 2) {  // e_i + e_j
    m(plus[0], n + plus[1]) = 1.0;
    m(plus[1], n + plus[0]) = 1.0;
  } else if (minus.size() == 2) {
    m(n + minus[1], minus[0]) = 1.0;
    m(n + minus[0], minus[1]) = 1.0;
  } else if (twice.size() == 1) {
    m(twice[0], n + twice[0]) = 1.0;
  } else {
    m(n + mtwice[0], mtwice[0]) = 1.0;
  }
  return m;
}

}  // namespace

MatrixCheckReport classical_matrix_check(const CompactLieAlgebra& g) {
  const RootSystem& rs = g.roots();
  if (rs.family() == Family::G2) throw InputError("classical_matrix_check: family G2 is unsupported");
  MatrixCheckReport report;
  const int r = rs.rank();
  const bool type_a = rs.family() == Family::A;
  const int n = type_a ? rs.ambient_dim() : 2 * r;
  report.matrix_algebra = type_a ? "su(" + std::to_string(n) + ")" : "sp(" + std::to_string(r) + ")";
  report.matrix_size = n;

  ComplexBasis cb(rs);
  const int dim = g.dim();
  std::vector<Eigen::MatrixXcd> phi(static_cast<std::size_t>(dim));
  const Eigen::MatrixXd& frame = rs.cartan_frame();
  for (int k = 0; k < r; ++k) {
    Eigen::VectorXcd d(n);
    if (type_a) {
      d = frame.col(k).cast<cd>();
    } else {
      d.head(r) = frame.col(k).cast<cd>();
      d.tail(r) = -frame.col(k).cast<cd>();
    }
    phi[static_cast<std::size_t>(k)] = d.asDiagonal();
  }
  const auto& N = g.chevalley();
  for (std::size_t a : rs.positive()) {
    const std::size_t na = rs.negative_of(a);
    if (rs.height(a) == 1) {
      phi[static_cast<std::size_t>(cb.index[a])] = root_matrix(rs, a);
      phi[static_cast<std::size_t>(cb.index[na])] = root_matrix(rs, a).transpose();
      continue;
    }
    const auto [a0, b0] = N.extraspecial(a);
    const auto& X0 = phi[static_cast<std::size_t>(cb.index[a0])];
    const auto& Y0 = phi[static_cast<std::size_t>(cb.index[b0])];
    phi[static_cast<std::size_t>(cb.index[a])] = (X0 * Y0 - Y0 * X0) / N(a0, b0);
    const std::size_t na0 = rs.negative_of(a0), nb0 = rs.negative_of(b0);
    const auto& X1 = phi[static_cast<std::size_t>(cb.index[na0])];
    const auto& Y1 = phi[static_cast<std::size_t>(cb.index[nb0])];
    phi[static_cast<std::size_t>(cb.index[na])] = (X1 * Y1 - Y1 * X1) / N(na0, nb0);
  }

  const Eigen::MatrixXcd& P = g.compact_from_chevalley();
  std::vector<Eigen::MatrixXcd> img(static_cast<std::size_t>(dim), Eigen::MatrixXcd::Zero(n, n));
  for (int b = 0; b < dim; ++b)
    for (int i = 0; i < dim; ++i)
      if (P(i, b) != cd(0.0)) img[static_cast<std::size_t>(b)] += P(i, b) * phi[static_cast<std::size_t>(i)];

  auto map = [&](const AlgebraVector& x) {
    Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(n, n);
    for (int b = 0; b < dim; ++b)
      if (x(b) != 0.0) m += x(b) * img[static_cast<std::size_t>(b)];
    return m;
  };

  Eigen::MatrixXcd J = Eigen::MatrixXcd::Zero(n, n);
  if (!type_a) {
    J.topRightCorner(r, r) = Eigen::MatrixXcd::Identity(r, r);
    J.bottomLeftCorner(r, r) = -Eigen::MatrixXcd::Identity(r, r);
  }
  Eigen::MatrixXcd flat(n * n, dim);
  for (int a = 0; a < dim; ++a) {
    const auto& A = img[static_cast<std::size_t>(a)];
    flat.col(a) = Eigen::Map<const Eigen::VectorXcd>(A.data(), n * n);
    report.skew_hermitian_residual = std::max(report.skew_hermitian_residual, (A + A.adjoint()).cwiseAbs().maxCoeff());
    const double member = type_a ? std::abs(A.trace()) : (A.transpose() * J + J * A).cwiseAbs().maxCoeff();
    report.membership_residual = std::max(report.membership_residual, member);
    for (int b = 0; b < dim; ++b) {
      const auto& B = img[static_cast<std::size_t>(b)];
      const Eigen::MatrixXcd lhs = map(g.bracket(g.basis(a), g.basis(b)));
      const Eigen::MatrixXcd rhs = A * B - B * A;
      report.bracket_discrepancy = std::max(report.bracket_discrepancy, (lhs - rhs).cwiseAbs().maxCoeff());
    }
  }
  Eigen::FullPivLU<Eigen::MatrixXcd> lu(flat);
  lu.setThreshold(1e-10);
  report.image_rank = static_cast<int>(lu.rank());
  return report;
}

}  // namespace homfinsler
