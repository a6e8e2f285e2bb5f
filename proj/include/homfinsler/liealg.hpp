#pragma once

#include <complex>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "homfinsler/rootsys.hpp"

namespace homfinsler {

/// Coordinates of an element of g in the compact basis of CompactLieAlgebra.
using AlgebraVector = Eigen::VectorXd;

/// Chevalley structure constants N_{a,b} ([e_a, e_b] = N_{a,b} e_{a+b}) for a
/// root system. Signs are fixed by setting N = +(p+1) on extraspecial pairs;
/// every other constant follows from the standard identities.
class ChevalleyConstants {
 public:
  explicit ChevalleyConstants(const RootSystem& rs);

  /// N_{a,b} for root indices a, b; zero when a+b is not a root.
  double operator()(std::size_t a, std::size_t b) const;
  /// Extraspecial pair (a0, b0) of a non-simple positive root.
  std::pair<std::size_t, std::size_t> extraspecial(std::size_t xi) const;

 private:
  double value(std::size_t a, std::size_t b);
  double compute(std::size_t a, std::size_t b);
  double special(std::size_t a, std::size_t b);
  std::optional<std::size_t> sum(std::size_t a, std::size_t b) const;

  const RootSystem* rs_;  // only valid during construction
  std::size_t n_ = 0;
  std::vector<double> table_;
  std::map<std::size_t, std::pair<std::size_t, std::size_t>> extraspecial_;
  std::map<std::pair<std::size_t, std::size_t>, double> memo_;
};

/// Compact real form of the simple Lie algebra attached to a root system.
///
/// Basis ordering: t_1..t_r (t_k = i*T_k for an orthonormal frame T_k of the
/// real Cartan), then for every positive root a in RootSystem order the pair
///   u_a = x_a - x_{-a},  v_a = i (x_a + x_{-a}).
/// The inner product is the negative Killing form rescaled so that the t_k
/// are orthonormal; roots are then exactly the vectors of RootSystem.
class CompactLieAlgebra {
 public:
  static constexpr double kJacobiTolerance = 1e-10;

  explicit CompactLieAlgebra(RootSystem rs);

  const RootSystem& roots() const { return rs_; }
  int dim() const { return dim_; }
  int rank() const { return rs_.rank(); }
  const std::vector<std::string>& labels() const { return labels_; }

  /// c(i, j, k): [b_i, b_j] = sum_k c(i,j,k) b_k.
  double structure_constant(int i, int j, int k) const { return ad_[static_cast<std::size_t>(i)](k, j); }
  /// Matrix of ad(b_i) in the compact basis.
  const Eigen::MatrixXd& ad_basis(int i) const { return ad_[static_cast<std::size_t>(i)]; }
  Eigen::MatrixXd ad(const AlgebraVector& x) const;

  AlgebraVector bracket(const AlgebraVector& x, const AlgebraVector& y) const;
  double inner(const AlgebraVector& x, const AlgebraVector& y) const;
  double norm(const AlgebraVector& x) const;
  const Eigen::MatrixXd& gram() const { return gram_; }
  /// Scale with <x,y> = -B(x,y)/scale, B the Killing form.
  double killing_scale() const { return killing_scale_; }

  AlgebraVector zero() const { return AlgebraVector::Zero(dim_); }
  AlgebraVector basis(int i) const;
  /// Element of t corresponding to an ambient vector (e.g. e1+3e2).
  AlgebraVector torus(const Eigen::VectorXd& ambient) const;
  /// Column indices (u_a, v_a) of the root plane g_{+-a}; a may be negative.
  std::pair<int, int> plane(std::size_t root) const;
  /// Orthonormal-in-<,> basis of g (columns), ordered like the compact basis.
  const Eigen::MatrixXd& orthonormal_basis() const { return orthonormal_; }

  double jacobi_residual() const;
  double ad_invariance_residual() const;

  /// Complex Chevalley-basis data used by the classical matrix check: columns
  /// of the compact basis expressed in the complex basis (H_1..H_r, e_a for
  /// positive a, e_{-a} for positive a).
  const Eigen::MatrixXcd& compact_from_chevalley() const { return to_chevalley_; }
  const ChevalleyConstants& chevalley() const { return chevalley_; }

 private:
  void check_dim(const AlgebraVector& x) const;

  RootSystem rs_;
  ChevalleyConstants chevalley_;
  int dim_;
  std::vector<std::string> labels_;
  std::vector<Eigen::MatrixXd> ad_;
  Eigen::MatrixXd gram_;
  Eigen::MatrixXd orthonormal_;
  Eigen::MatrixXcd to_chevalley_;
  double killing_scale_ = 1.0;
  std::vector<int> plane_of_positive_;  // root index -> first column, -1 if not positive
};

CompactLieAlgebra build_compact_algebra(const RootSystem& rs);

struct MatrixCheckReport {
  std::string matrix_algebra;  // "su(n+1)" or "sp(n)"
  int matrix_size = 0;
  double bracket_discrepancy = 0;     // max |phi([x,y]) - [phi x, phi y]|
  double skew_hermitian_residual = 0; // images of the compact basis are skew-Hermitian
  double membership_residual = 0;     // |trace| for su, |X^T J + J X| for sp
  int image_rank = 0;                 // rank of phi (= dim g for an isomorphism)
};

/// Builds the explicit isomorphism onto su(n+1) (type A) or the complex
/// realization of sp(n) (type C) from the Chevalley generators and reports
/// the bracket discrepancy. Throws InputError for G2.
MatrixCheckReport classical_matrix_check(const CompactLieAlgebra& g);

}  // namespace homfinsler
