#pragma once

#include <memory>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "homfinsler/coset.hpp"
#include "homfinsler/expr.hpp"

namespace homfinsler {

enum class Shape { Reversible, Nonreversible };
enum class LKind { Diagonal, Randers, Generic, FiberMin };

std::string to_string(Shape s);
std::string to_string(LKind k);

/// L with its gradient and Hessian at one argument point.
struct LDerivatives {
  double value = 0;
  Eigen::VectorXd grad;
  Eigen::MatrixXd hess;
};

/// Generating function of a very standard norm. Arguments are
/// (t_1, ..., t_s) for the reversible shape, and (t_1, ..., t_{s-1}, y_s)
/// for the non-reversible one, where t_i = <y_i, y_i> and y_s is the signed
/// coordinate along the one-dimensional last summand.
class LFunction {
 public:
  static LFunction diagonal(Shape shape, std::vector<double> coeffs);
  /// (sqrt(c_1 t_1 + ... + c_{s-1} t_{s-1} + c_s y_s^2) + b y_s)^2
  static LFunction randers(std::vector<double> coeffs, double b);
  /// Variables t1..t{s} (reversible) or t1..t{s-1}, ys (non-reversible).
  static LFunction generic(Shape shape, int summands, const std::string& expression);
  /// min over y_s of a non-reversible L: a reversible L on s-1 arguments.
  static LFunction fiber_min(const LFunction& parent);

  Shape shape() const { return shape_; }
  LKind kind() const { return kind_; }
  /// Number of summands, which is also the number of arguments.
  int summands() const { return summands_; }
  const std::vector<double>& coeffs() const { return coeffs_; }
  double b() const { return b_; }
  const Expression* expression() const { return expr_ ? &*expr_ : nullptr; }
  const LFunction* parent() const { return parent_.get(); }

  double value(const Eigen::VectorXd& args) const;
  LDerivatives derivatives(const Eigen::VectorXd& args) const;
  /// Fiber minimizer y_s for FiberMin kinds.
  double fiber_argmin(const Eigen::VectorXd& args) const;

  std::string to_text() const;
  static LFunction from_text(const std::string& text);

 private:
  template <class T>
  T eval(const std::vector<T>& args) const;

  Shape shape_ = Shape::Reversible;
  LKind kind_ = LKind::Diagonal;
  int summands_ = 0;
  std::vector<double> coeffs_;
  double b_ = 0;
  std::optional<Expression> expr_;
  std::shared_ptr<const LFunction> parent_;
};

/// F(y) = sqrt(L(...)) on m of a reductive split. Vectors are m-coordinates
/// unless stated otherwise.
class VeryStandardNorm {
 public:
  VeryStandardNorm(std::shared_ptr<const ReductiveSplit> split, LFunction L);

  const ReductiveSplit& split() const { return *split_; }
  std::shared_ptr<const ReductiveSplit> split_ptr() const { return split_; }
  const LFunction& L() const { return L_; }

  Eigen::VectorXd arguments(const Eigen::VectorXd& y) const;
  double F(const Eigen::VectorXd& y) const;

 private:
  std::shared_ptr<const ReductiveSplit> split_;
  LFunction L_;
};

/// F(y) for an algebra vector; throws InputError if y has an h-component.
double eval_norm(const VeryStandardNorm& n, const AlgebraVector& y);

/// Closed-form fundamental tensor in the m-basis.
Eigen::MatrixXd fundamental_tensor(const VeryStandardNorm& n, const Eigen::VectorXd& y);

/// Central-difference Hessian of F^2/2, step 1e-5 |y|.
Eigen::MatrixXd fd_hessian_oracle(const VeryStandardNorm& n, const Eigen::VectorXd& y);

struct EulerResidual {
  double sum_residual = 0;                // max_q |sum_p t_p L_pq|
  std::optional<double> diagonal_second;  // |L_ii| when y lies in m_i
};
EulerResidual check_euler_identity(const VeryStandardNorm& n, const Eigen::VectorXd& y);

/// Max relative defect of the shape's scaling law at sampled points.
double homogeneity_residual(const LFunction& L, std::mt19937_64& rng, int samples = 50);

/// Smallest eigenvalue of g_y over random unit y (and positivity of L). The
/// draws mix full vectors with vectors supported on one or several summands.
double min_tensor_eigenvalue(const VeryStandardNorm& n, std::mt19937_64& rng, int samples = 200);
constexpr double kAdmissibleEigenvalue = 1e-6;
bool is_admissible(const VeryStandardNorm& n, std::mt19937_64& rng, int samples = 200);

/// Norm on m' = m_1 + ... + m_{s-1} (isotropy h + m_s) obtained by minimizing
/// over the fiber direction m_s.
VeryStandardNorm induced_submersion_norm(const VeryStandardNorm& n);

/// Split of g with h' = h + m_s and m' = m_1 + ... + m_{s-1}.
ReductiveSplit quotient_split(const ReductiveSplit& split);

}  // namespace homfinsler
