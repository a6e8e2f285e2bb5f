#pragma once

#include <Eigen/Dense>

#include "homfinsler/norm.hpp"

namespace homfinsler {

/// Pole y and spanning vector v, both as m-coordinates.
struct Flag {
  Eigen::VectorXd y;
  Eigen::VectorXd v;
};

struct CurvatureResult {
  double K = 0;
  Eigen::VectorXd U;
  double commute_residual = 0;  // |[y,v]|, unit y and v
  double pole_residual = 0;     // max_w |g_y(y, [y,w]_m)|, unit y
  double denominator = 0;       // g_y(y,y) g_y(v,v) - g_y(y,v)^2
};

constexpr double kPreconditionTolerance = 1e-9;
constexpr double kDegenerateDenominator = 1e-12;

/// [x, z]_m in m-coordinates for x, z given in m-coordinates.
Eigen::VectorXd bracket_m(const ReductiveSplit& split, const Eigen::VectorXd& x, const Eigen::VectorXd& z);
/// Full bracket [x, z] in g for x, z in m-coordinates.
AlgebraVector bracket_g(const ReductiveSplit& split, const Eigen::VectorXd& x, const Eigen::VectorXd& z);

/// Homogeneous flag curvature for commuting flags whose pole satisfies
/// g_y(y, [y,m]_m) = 0. Throws InapplicableFlag when either condition fails,
/// InputError for a degenerate flag and ConvexityError if g_y is not
/// positive definite.
CurvatureResult flag_curvature(const VeryStandardNorm& n, const Flag& flag,
                               double tolerance = kPreconditionTolerance);

/// Sectional curvature of the normal metric <,> (no commuting requirement).
double normal_oracle(const ReductiveSplit& split, const Flag& flag);

struct ZeroFlagCertificate {
  Eigen::VectorXd u, v;
  // |[u,v]|, |g_u(u,[u,m]_m)|, |g_u(u,[v,m]_m)|, |g_u(v,[u,m]_m)|
  double residuals[4] = {0, 0, 0, 0};
  double K_computed = 0;
  bool curvature_evaluated = false;
  double tolerance = kPreconditionTolerance;

  bool residuals_pass() const;
  bool passed() const;
};

ZeroFlagCertificate zero_flag_check(const VeryStandardNorm& n, const Eigen::VectorXd& u, const Eigen::VectorXd& v,
                                    double tolerance = kPreconditionTolerance);

}  // namespace homfinsler
