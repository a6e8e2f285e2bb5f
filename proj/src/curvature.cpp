#include "homfinsler/curvature.hpp"

#include <cmath>

#include "homfinsler/errors.hpp"

namespace homfinsler {

AlgebraVector bracket_g(const ReductiveSplit& split, const Eigen::VectorXd& x, const Eigen::VectorXd& z) {
  return split.algebra->bracket(split.from_m(x), split.from_m(z));
}

Eigen::VectorXd bracket_m(const ReductiveSplit& split, const Eigen::VectorXd& x, const Eigen::VectorXd& z) {
  return split.m_coords(bracket_g(split, x, z));
}

namespace {

double gram_determinant(const Eigen::VectorXd& y, const Eigen::VectorXd& v) {
  return y.squaredNorm() * v.squaredNorm() - y.dot(v) * y.dot(v);
}

void require_independent(const Eigen::VectorXd& y, const Eigen::VectorXd& v) {
  const double scale = y.squaredNorm() * v.squaredNorm();
  if (scale == 0.0 || gram_determinant(y, v) <= 1e-12 * scale)
    throw InputError("degenerate flag: y and v are linearly dependent");
}

// max over the m-basis of |g(a, [b, w]_m)|
double max_pairing(const ReductiveSplit& split, const Eigen::MatrixXd& G, const Eigen::VectorXd& a,
                   const Eigen::VectorXd& b) {
  const Eigen::VectorXd Ga = G * a;
  double worst = 0;
  for (int k = 0; k < split.dim_m(); ++k)
    worst = std::max(worst, std::abs(Ga.dot(bracket_m(split, b, Eigen::VectorXd::Unit(split.dim_m(), k)))));
  return worst;
}

}  // namespace

CurvatureResult flag_curvature(const VeryStandardNorm& n, const Flag& flag, double tolerance) {
  const ReductiveSplit& split = n.split();
  const CompactLieAlgebra& g = *split.algebra;
  require_independent(flag.y, flag.v);
  const Eigen::VectorXd yu = flag.y.normalized(), vu = flag.v.normalized();

  CurvatureResult res;
  res.commute_residual = g.norm(bracket_g(split, yu, vu));
  if (res.commute_residual > tolerance)
    throw InapplicableFlag("flag is not commuting: |[y,v]| = " + std::to_string(res.commute_residual),
                           res.commute_residual);
  const Eigen::MatrixXd G = fundamental_tensor(n, flag.y);
  res.pole_residual = max_pairing(split, G, yu, yu);
  if (res.pole_residual > tolerance)
    throw InapplicableFlag("pole condition fails: max |g_y(y,[y,m]_m)| = " + std::to_string(res.pole_residual),
                           res.pole_residual);

  const int dm = split.dim_m();
  const Eigen::VectorXd Gy = G * flag.y, Gv = G * flag.v;
  Eigen::VectorXd rhs(dm);
  for (int k = 0; k < dm; ++k) {
    const Eigen::VectorXd w = Eigen::VectorXd::Unit(dm, k);
    rhs(k) = 0.5 * (Gv.dot(bracket_m(split, w, flag.y)) + Gy.dot(bracket_m(split, w, flag.v)));
  }
  Eigen::LLT<Eigen::MatrixXd> llt(G);
  if (llt.info() != Eigen::Success) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(G, Eigen::EigenvaluesOnly);
    throw ConvexityError("fundamental tensor is not positive definite", es.eigenvalues()(0));
  }
  res.U = llt.solve(rhs);
  res.denominator = flag.y.dot(Gy) * flag.v.dot(Gv) - flag.y.dot(Gv) * flag.y.dot(Gv);
  if (res.denominator < kDegenerateDenominator * flag.y.squaredNorm() * flag.v.squaredNorm())
    throw InputError("degenerate flag: curvature denominator " + std::to_string(res.denominator));
  res.K = res.U.dot(G * res.U) / res.denominator;
  return res;
}

double normal_oracle(const ReductiveSplit& split, const Flag& flag) {
  require_independent(flag.y, flag.v);
  const CompactLieAlgebra& g = *split.algebra;
  const AlgebraVector b = bracket_g(split, flag.y, flag.v);
  const AlgebraVector bh = split.h_component(b);
  const double bm = split.m_coords(b).norm();
  const double bhn = g.norm(bh);
  return (0.25 * bm * bm + bhn * bhn) / gram_determinant(flag.y, flag.v);
}

bool ZeroFlagCertificate::residuals_pass() const {
  for (double r : residuals)
    if (!(r < tolerance)) return false;
  return true;
}

bool ZeroFlagCertificate::passed() const {
  return residuals_pass() && curvature_evaluated && std::abs(K_computed) < tolerance;
}

ZeroFlagCertificate zero_flag_check(const VeryStandardNorm& n, const Eigen::VectorXd& u, const Eigen::VectorXd& v,
                                    double tolerance) {
  const ReductiveSplit& split = n.split();
  require_independent(u, v);
  ZeroFlagCertificate c;
  c.u = u;
  c.v = v;
  c.tolerance = tolerance;
  const Eigen::VectorXd uu = u.normalized(), vu = v.normalized();
  const Eigen::MatrixXd G = fundamental_tensor(n, u);
  c.residuals[0] = split.algebra->norm(bracket_g(split, uu, vu));
  c.residuals[1] = max_pairing(split, G, uu, uu);
  c.residuals[2] = max_pairing(split, G, uu, vu);
  c.residuals[3] = max_pairing(split, G, vu, uu);
  if (c.residuals_pass()) {
    c.K_computed = flag_curvature(n, {u, v}, tolerance).K;
    c.curvature_evaluated = true;
  }
  return c;
}

}  // namespace homfinsler
