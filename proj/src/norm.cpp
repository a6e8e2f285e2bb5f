#include "homfinsler/norm.hpp"

#include <cmath>
#include <cstdio>
#include <limits>
#include <sstream>

#include <boost/math/tools/minima.hpp>

#include "homfinsler/errors.hpp"

namespace homfinsler {

std::string to_string(Shape s) { return s == Shape::Reversible ? "reversible" : "nonreversible"; }

std::string to_string(LKind k) {
  switch (k) {
    case LKind::Diagonal: return "diagonal";
    case LKind::Randers: return "randers";
    case LKind::Generic: return "generic";
    case LKind::FiberMin: return "fiber_min";
  }
  return {};
}

namespace {

std::vector<std::string> variable_names(Shape shape, int s) {
  std::vector<std::string> names;
  const int nt = shape == Shape::Reversible ? s : s - 1;
  for (int i = 1; i <= nt; ++i) names.push_back("t" + std::to_string(i));
  if (shape == Shape::Nonreversible) names.push_back("ys");
  return names;
}

std::string fmt(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

}  // namespace

LFunction LFunction::diagonal(Shape shape, std::vector<double> coeffs) {
  if (coeffs.empty()) throw InputError("diagonal L needs at least one coefficient");
  for (double c : coeffs)
    if (!(c > 0) || !std::isfinite(c)) throw InputError("diagonal L coefficients must be positive");
  LFunction L;
  L.shape_ = shape;
  L.kind_ = LKind::Diagonal;
  L.summands_ = static_cast<int>(coeffs.size());
  L.coeffs_ = std::move(coeffs);
  return L;
}

LFunction LFunction::randers(std::vector<double> coeffs, double b) {
  if (coeffs.size() < 2) throw InputError("randers L needs coefficients c_1..c_s with s >= 2");
  for (double c : coeffs)
    if (!(c > 0) || !std::isfinite(c)) throw InputError("randers L coefficients must be positive");
  if (!std::isfinite(b)) throw InputError("randers b must be finite");
  LFunction L;
  L.shape_ = Shape::Nonreversible;
  L.kind_ = LKind::Randers;
  L.summands_ = static_cast<int>(coeffs.size());
  L.coeffs_ = std::move(coeffs);
  L.b_ = b;
  return L;
}

LFunction LFunction::generic(Shape shape, int summands, const std::string& expression) {
  if (summands < 1 || (shape == Shape::Nonreversible && summands < 2))
    throw InputError("generic L: bad number of summands");
  LFunction L;
  L.shape_ = shape;
  L.kind_ = LKind::Generic;
  L.summands_ = summands;
  L.expr_ = Expression::parse(expression, variable_names(shape, summands));
  return L;
}

LFunction LFunction::fiber_min(const LFunction& parent) {
  if (parent.shape() != Shape::Nonreversible) throw InputError("fiber minimization needs a non-reversible L");
  LFunction L;
  L.shape_ = Shape::Reversible;
  L.kind_ = LKind::FiberMin;
  L.summands_ = parent.summands() - 1;
  L.parent_ = std::make_shared<const LFunction>(parent);
  return L;
}

template <class T>
T LFunction::eval(const std::vector<T>& x) const {
  using std::sqrt;
  switch (kind_) {
    case LKind::Diagonal: {
      T sum(0.0);
      for (int i = 0; i < summands_; ++i) {
        // a diagonal non-reversible L reads its last argument as y_s
        const bool signed_arg = shape_ == Shape::Nonreversible && i == summands_ - 1;
        sum = sum + coeffs_[i] * (signed_arg ? x[i] * x[i] : x[i]);
      }
      return sum;
    }
    case LKind::Randers: {
      const int s = summands_;
      T q = coeffs_[s - 1] * x[s - 1] * x[s - 1];
      for (int i = 0; i + 1 < s; ++i) q = q + coeffs_[i] * x[i];
      const T r = sqrt(q) + b_ * x[s - 1];
      return r * r;
    }
    case LKind::Generic: return expr_->eval(x);
    case LKind::FiberMin: break;
  }
  throw NumericalError("fiber_min L has no direct evaluator", 0);
}

double LFunction::fiber_argmin(const Eigen::VectorXd& args) const {
  if (kind_ != LKind::FiberMin) throw InputError("fiber_argmin on a non-fiber L");
  const int n = summands_;
  Eigen::VectorXd full(n + 1);
  full.head(n) = args;
  auto g = [&](double r) {
    full(n) = r;
    return parent_->value(full);
  };
  double scale = std::sqrt(std::max(args.cwiseAbs().sum(), 0.0));
  if (scale == 0.0) return 0.0;
  const double g0 = g(0.0);
  double R = scale;
  int steps = 0;
  while (!(g(R) > g0 && g(-R) > g0)) {
    R *= 2;
    if (++steps > 60) throw ConvexityError("fiber minimization failed to bracket", R);
  }
  auto [r, val] = boost::math::tools::brent_find_minima(g, -R, R, std::numeric_limits<double>::digits);
  (void)val;
  // Newton polish on dL/dy_s = 0
  for (int it = 0; it < 8; ++it) {
    std::vector<HyperDual> x(static_cast<std::size_t>(n + 1));
    for (int i = 0; i < n; ++i) x[i] = HyperDual(args(i));
    x[n] = HyperDual(r, 1, 1, 0);
    const HyperDual v = parent_->eval(x);
    if (!(v.e12 > 0)) break;
    const double step = v.e1 / v.e12;
    r -= step;
    if (std::abs(step) <= 1e-16 * std::max(1.0, std::abs(r))) break;
  }
  return r;
}

double LFunction::value(const Eigen::VectorXd& args) const {
  if (args.size() != summands_) throw InputError("L: wrong number of arguments");
  if (kind_ == LKind::FiberMin) {
    const double r = fiber_argmin(args);
    Eigen::VectorXd full(summands_ + 1);
    full.head(summands_) = args;
    full(summands_) = r;
    return parent_->value(full);
  }
  return eval(std::vector<double>(args.data(), args.data() + args.size()));
}

LDerivatives LFunction::derivatives(const Eigen::VectorXd& args) const {
  const int n = summands_;
  if (args.size() != n) throw InputError("L: wrong number of arguments");
  LDerivatives d;
  d.grad = Eigen::VectorXd::Zero(n);
  d.hess = Eigen::MatrixXd::Zero(n, n);
  if (kind_ == LKind::FiberMin) {
    // envelope: L'_p = L_p, L'_pq = L_pq - L_pr L_qr / L_rr at the minimizer
    Eigen::VectorXd full(n + 1);
    full.head(n) = args;
    full(n) = fiber_argmin(args);
    const LDerivatives p = parent_->derivatives(full);
    d.value = p.value;
    d.grad = p.grad.head(n);
    const double lrr = p.hess(n, n);
    if (!(lrr > 0)) throw ConvexityError("fiber minimum is degenerate", lrr);
    d.hess = p.hess.topLeftCorner(n, n) - p.hess.col(n).head(n) * p.hess.row(n).head(n) / lrr;
    return d;
  }
  std::vector<HyperDual> x(static_cast<std::size_t>(n));
  for (int p = 0; p < n; ++p)
    for (int q = p; q < n; ++q) {
      for (int i = 0; i < n; ++i) x[i] = HyperDual(args(i), i == p ? 1 : 0, i == q ? 1 : 0, 0);
      const HyperDual v = eval(x);
      d.value = v.a;
      d.grad(p) = v.e1;
      d.grad(q) = v.e2;
      d.hess(p, q) = d.hess(q, p) = v.e12;
    }
  if (!std::isfinite(d.value) || !d.grad.allFinite() || !d.hess.allFinite())
    throw NumericalError("L derivatives are not finite", std::numeric_limits<double>::quiet_NaN());
  return d;
}

std::string LFunction::to_text() const {
  std::ostringstream out;
  out << "shape " << to_string(shape_) << "\n";
  out << "kind " << to_string(kind_) << "\n";
  out << "summands " << summands_ << "\n";
  if (kind_ == LKind::Diagonal || kind_ == LKind::Randers) {
    out << "coeffs";
    for (double c : coeffs_) out << " " << fmt(c);
    out << "\n";
  }
  if (kind_ == LKind::Randers) out << "b " << fmt(b_) << "\n";
  if (kind_ == LKind::Generic) out << "expr " << expr_->text() << "\n";
  if (kind_ == LKind::FiberMin) {
    std::istringstream in(parent_->to_text());
    for (std::string line; std::getline(in, line);) out << "of " << line << "\n";
  }
  return out.str();
}

LFunction LFunction::from_text(const std::string& text) {
  std::istringstream in(text);
  std::string shape_s, kind_s, expr, parent_text;
  std::optional<int> summands;
  std::vector<double> coeffs;
  double b = 0;
  int lineno = 0;
  auto fail = [&](const std::string& why) -> void {
    throw InputError("norm spec line " + std::to_string(lineno) + ": " + why);
  };
  for (std::string line; std::getline(in, line);) {
    ++lineno;
    if (auto hash = line.find('#'); hash != std::string::npos && line.rfind("of ", 0) != 0) line.erase(hash);
    std::istringstream ls(line);
    std::string key;
    if (!(ls >> key)) continue;
    if (key == "of") {
      std::string rest;
      std::getline(ls, rest);
      parent_text += rest.substr(rest.find_first_not_of(' ') == std::string::npos ? rest.size()
                                                                                   : rest.find_first_not_of(' ')) +
                     "\n";
    } else if (key == "shape") {
      ls >> shape_s;
    } else if (key == "kind") {
      ls >> kind_s;
    } else if (key == "summands") {
      int s = 0;
      if (!(ls >> s)) fail("bad summand count");
      summands = s;
    } else if (key == "coeffs") {
      std::string tok;
      while (ls >> tok) {
        try {
          std::size_t used = 0;
          coeffs.push_back(std::stod(tok, &used));
          if (used != tok.size()) fail("bad coefficient '" + tok + "'");
        } catch (const std::logic_error&) {
          fail("bad coefficient '" + tok + "'");
        }
      }
    } else if (key == "b") {
      if (!(ls >> b)) fail("bad b");
    } else if (key == "expr") {
      std::getline(ls, expr);
      expr.erase(0, expr.find_first_not_of(' '));
    } else {
      fail("unknown key '" + key + "'");
    }
  }
  lineno = 0;
  Shape shape;
  if (shape_s == "reversible") shape = Shape::Reversible;
  else if (shape_s == "nonreversible") shape = Shape::Nonreversible;
  else fail("shape must be reversible or nonreversible");
  LFunction L;
  if (kind_s == "diagonal") L = diagonal(shape, coeffs);
  else if (kind_s == "randers") {
    if (shape != Shape::Nonreversible) fail("randers L is non-reversible");
    L = randers(coeffs, b);
  } else if (kind_s == "generic") {
    if (!summands) fail("generic L needs a summands line");
    L = generic(shape, *summands, expr);
  } else if (kind_s == "fiber_min") {
    L = fiber_min(from_text(parent_text));
  } else {
    fail("unknown kind '" + kind_s + "'");
  }
  if (summands && *summands != L.summands()) fail("summands line disagrees with the coefficients");
  if (L.shape() != shape) fail("shape line disagrees with the kind");
  return L;
}

// ---------------------------------------------------------------------------

VeryStandardNorm::VeryStandardNorm(std::shared_ptr<const ReductiveSplit> split, LFunction L)
    : split_(std::move(split)), L_(std::move(L)) {
  const int s = static_cast<int>(split_->summands.size());
  if (L_.summands() != s)
    throw InputError("L has " + std::to_string(L_.summands()) + " arguments but m has " + std::to_string(s) +
                     " summands");
  if (L_.shape() == Shape::Nonreversible) {
    if (split_->summands.back().dim != 1)
      throw InputError("non-reversible shape needs a one-dimensional last summand");
    const CompactLieAlgebra& g = *split_->algebra;
    const AlgebraVector x = split_->summand_basis(s - 1).col(0);
    double r = 0;
    for (Eigen::Index k = 0; k < split_->h_basis.cols(); ++k) r = std::max(r, g.norm(g.bracket(x, split_->h_basis.col(k))));
    if (r > 1e-10) throw InputError("non-reversible shape needs the last summand to centralize h");
  }
}

Eigen::VectorXd VeryStandardNorm::arguments(const Eigen::VectorXd& y) const {
  const auto& sm = split_->summands;
  if (y.size() != split_->dim_m()) throw InputError("vector has the wrong number of m-coordinates");
  Eigen::VectorXd a(static_cast<Eigen::Index>(sm.size()));
  for (std::size_t i = 0; i < sm.size(); ++i) a(static_cast<Eigen::Index>(i)) = y.segment(sm[i].offset, sm[i].dim).squaredNorm();
  if (L_.shape() == Shape::Nonreversible) a(a.size() - 1) = y(sm.back().offset);
  return a;
}

double VeryStandardNorm::F(const Eigen::VectorXd& y) const {
  if (y.isZero(0)) return 0.0;
  const double L = L_.value(arguments(y));
  if (!(L >= 0)) throw NumericalError("L is negative", L);
  return std::sqrt(L);
}

double eval_norm(const VeryStandardNorm& n, const AlgebraVector& y) {
  const ReductiveSplit& split = n.split();
  const double hpart = split.algebra->norm(split.h_component(y));
  if (hpart > 1e-9 * std::max(1.0, split.algebra->norm(y)))
    throw InputError("vector has an h-component of size " + fmt(hpart));
  return n.F(split.m_coords(y));
}

Eigen::MatrixXd fundamental_tensor(const VeryStandardNorm& n, const Eigen::VectorXd& y) {
  const ReductiveSplit& split = n.split();
  if (y.size() != split.dim_m()) throw InputError("vector has the wrong number of m-coordinates");
  if (y.norm() == 0.0) throw InputError("fundamental tensor at y = 0");
  const LDerivatives d = n.L().derivatives(n.arguments(y));
  const int dm = split.dim_m();
  const int s = static_cast<int>(split.summands.size());
  const bool nonrev = n.L().shape() == Shape::Nonreversible;
  const int nt = nonrev ? s - 1 : s;

  std::vector<Eigen::VectorXd> a(static_cast<std::size_t>(nt), Eigen::VectorXd::Zero(dm));
  Eigen::MatrixXd G = Eigen::MatrixXd::Zero(dm, dm);
  for (int p = 0; p < nt; ++p) {
    const auto& sm = split.summands[p];
    a[p].segment(sm.offset, sm.dim) = y.segment(sm.offset, sm.dim);
    G.block(sm.offset, sm.offset, sm.dim, sm.dim).diagonal().array() += d.grad(p);
  }
  for (int p = 0; p < nt; ++p)
    for (int q = 0; q < nt; ++q) G.noalias() += 2 * d.hess(p, q) * a[p] * a[q].transpose();
  if (nonrev) {
    Eigen::VectorXd es = Eigen::VectorXd::Zero(dm);
    es(split.summands.back().offset) = 1.0;
    for (int p = 0; p < nt; ++p) G.noalias() += d.hess(p, s - 1) * (es * a[p].transpose() + a[p] * es.transpose());
    G.noalias() += 0.5 * d.hess(s - 1, s - 1) * es * es.transpose();
  }
  return 0.5 * (G + G.transpose());
}

Eigen::MatrixXd fd_hessian_oracle(const VeryStandardNorm& n, const Eigen::VectorXd& y) {
  const int dm = static_cast<int>(y.size());
  const double h = 1e-5 * y.norm();
  // F^2 = L, so skip the square root
  auto E = [&](const Eigen::VectorXd& z) { return 0.5 * n.L().value(n.arguments(z)); };
  Eigen::MatrixXd H(dm, dm);
  for (int i = 0; i < dm; ++i)
    for (int j = i; j < dm; ++j) {
      Eigen::VectorXd pp = y, pm = y, mp = y, mm = y;
      pp(i) += h, pp(j) += h;
      pm(i) += h, pm(j) -= h;
      mp(i) -= h, mp(j) += h;
      mm(i) -= h, mm(j) -= h;
      H(i, j) = H(j, i) = (E(pp) - E(pm) - E(mp) + E(mm)) / (4 * h * h);
    }
  return H;
}

EulerResidual check_euler_identity(const VeryStandardNorm& n, const Eigen::VectorXd& y) {
  if (n.L().shape() != Shape::Reversible)
    throw InputError("the Euler identity sum_p t_p L_pq = 0 holds for the reversible shape only");
  const Eigen::VectorXd t = n.arguments(y);
  const LDerivatives d = n.L().derivatives(t);
  EulerResidual r;
  r.sum_residual = (d.hess.transpose() * t).cwiseAbs().maxCoeff();
  const int i = n.split().summand_of(y);
  if (i >= 0) r.diagonal_second = std::abs(d.hess(i, i));
  return r;
}

double homogeneity_residual(const LFunction& L, std::mt19937_64& rng, int samples) {
  std::uniform_real_distribution<double> pos(0.1, 2.0), sym(-1.0, 1.0), lam(0.3, 3.0);
  const int n = L.summands();
  double worst = 0;
  for (int k = 0; k < samples; ++k) {
    Eigen::VectorXd x(n);
    for (int i = 0; i < n; ++i) x(i) = pos(rng);
    const double l = lam(rng);
    Eigen::VectorXd xs = l * x;
    double factor = l;
    if (L.shape() == Shape::Nonreversible) {
      x(n - 1) = sym(rng);
      xs = l * l * x;
      xs(n - 1) = l * x(n - 1);
      factor = l * l;
    }
    const double base = factor * L.value(x);
    worst = std::max(worst, std::abs(L.value(xs) - base) / std::max(std::abs(base), 1e-300));
  }
  return worst;
}

double min_tensor_eigenvalue(const VeryStandardNorm& n, std::mt19937_64& rng, int samples) {
  std::normal_distribution<double> normal(0.0, 1.0);
  const int dm = n.split().dim_m();
  double worst = std::numeric_limits<double>::infinity();
  const auto& sm = n.split().summands;
  std::uniform_int_distribution<std::size_t> pick(0, sm.size() - 1);
  std::bernoulli_distribution coin(0.5);
  for (int k = 0; k < samples; ++k) {
    Eigen::VectorXd y(dm);
    for (int i = 0; i < dm; ++i) y(i) = normal(rng);
    // a third of the draws live in one summand, a third in a random subset:
    // convexity tends to fail first where some t_i vanish
    if (k % 3 == 1) {
      const std::size_t keep = pick(rng);
      for (std::size_t i = 0; i < sm.size(); ++i)
        if (i != keep) y.segment(sm[i].offset, sm[i].dim).setZero();
    } else if (k % 3 == 2) {
      for (const auto& b : sm)
        if (coin(rng)) y.segment(b.offset, b.dim).setZero();
    }
    if (y.norm() == 0.0) y(0) = 1.0;
    y.normalize();
    const double L = n.L().value(n.arguments(y));
    if (!(L > 0)) return std::min(worst, L);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(fundamental_tensor(n, y), Eigen::EigenvaluesOnly);
    worst = std::min(worst, es.eigenvalues()(0));
  }
  return worst;
}

bool is_admissible(const VeryStandardNorm& n, std::mt19937_64& rng, int samples) {
  try {
    return min_tensor_eigenvalue(n, rng, samples) > kAdmissibleEigenvalue;
  } catch (const NumericalError&) {
    return false;
  }
}

ReductiveSplit quotient_split(const ReductiveSplit& split) {
  if (split.summands.empty()) throw InputError("quotient_split: no summands");
  const Summand last = split.summands.back();
  ReductiveSplit out;
  out.algebra = split.algebra;
  out.h_basis.resize(split.h_basis.rows(), split.h_basis.cols() + last.dim);
  out.h_basis << split.h_basis, split.summand_basis(split.summands.size() - 1);
  out.m_basis = split.m_basis.leftCols(last.offset);
  out.summands.assign(split.summands.begin(), split.summands.end() - 1);
  return out;
}

VeryStandardNorm induced_submersion_norm(const VeryStandardNorm& n) {
  if (n.L().shape() != Shape::Nonreversible || n.split().summands.back().dim != 1)
    throw InputError("induced submersion norm needs the non-reversible shape");
  auto q = std::make_shared<const ReductiveSplit>(quotient_split(n.split()));
  return VeryStandardNorm(q, LFunction::fiber_min(n.L()));
}

}  // namespace homfinsler
