#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

#include "homfinsler/exact.hpp"

namespace homfinsler {

enum class Family { A, C, G2 };

std::string to_string(Family f);
Family parse_family(std::string_view s);

/// Root system of type A_n, C_n or G2 with roots written in Euclidean
/// coordinates w.r.t. an orthonormal {e_1, ...}:
///   A_n : e_i - e_j in R^{n+1} (roots span the hyperplane sum x_i = 0)
///   C_n : +-e_i +- e_j, +-2e_i in R^n
///   G2  : +-e1, +-sqrt3 e2, +-1/2 e1 +- sqrt3/2 e2, +-3/2 e1 +- sqrt3/2 e2
///
/// Positivity is decided by a fixed generic linear functional; positive roots
/// are kept in (height, simple-coordinate) order. Immutable after construction.
class RootSystem {
 public:
  static constexpr double kTolerance = 1e-12;

  RootSystem(Family family, int rank);

  /// Rebuilds from an explicit list; the list must equal the family's root set.
  static RootSystem from_text(std::string_view text);
  std::string to_text() const;

  Family family() const { return family_; }
  int rank() const { return rank_; }
  int cartan_dim() const { return rank_; }
  int ambient_dim() const { return ambient_dim_; }
  std::size_t size() const { return roots_.size(); }

  const std::vector<ExactVector>& exact_roots() const { return roots_; }
  const Eigen::VectorXd& root(std::size_t i) const { return numeric_[i]; }

  bool is_root(const Eigen::VectorXd& v) const { return index_of(v).has_value(); }
  std::optional<std::size_t> index_of(const Eigen::VectorXd& v) const;

  /// Root indices of the positive roots in increasing (height, ...) order.
  const std::vector<std::size_t>& positive() const { return positive_; }
  const std::vector<std::size_t>& simple() const { return simple_; }
  bool is_positive(std::size_t i) const { return height_[i] > 0; }
  /// Signed height (sum of simple-root coordinates).
  int height(std::size_t i) const { return height_[i]; }
  /// Position of a positive root in positive(); -1 for negative roots.
  int order(std::size_t i) const { return order_[i]; }
  std::size_t negative_of(std::size_t i) const { return negation_[i]; }

  /// Orthonormal basis of span(roots) inside the ambient space (columns).
  const Eigen::MatrixXd& cartan_frame() const { return frame_; }

  double inner(std::size_t a, std::size_t b) const { return numeric_[a].dot(numeric_[b]); }
  double norm2(std::size_t a) const { return inner(a, a); }

  /// Largest p >= 0 with beta - p*alpha a root.
  int string_down(std::size_t alpha, std::size_t beta) const;
  /// Length p+q+1 of the alpha-string through beta (alpha != +-beta).
  int string_length(std::size_t alpha, std::size_t beta) const;
  Eigen::VectorXd reflect(std::size_t alpha, const Eigen::VectorXd& v) const;

  std::string label(std::size_t i) const;

 private:
  RootSystem(Family family, int rank, std::vector<ExactVector> roots);
  void index_roots();

  Family family_;
  int rank_;
  int ambient_dim_;
  std::vector<ExactVector> roots_;
  std::vector<Eigen::VectorXd> numeric_;
  std::vector<std::size_t> negation_;
  std::vector<std::size_t> positive_;
  std::vector<std::size_t> simple_;
  std::vector<int> height_;
  std::vector<int> order_;
  Eigen::MatrixXd frame_;
};

RootSystem build_root_system(Family family, int rank);

/// Human-readable label such as "e1-e2", "2e1", "1/2e1-sqrt(3)/2e2".
std::string vector_label(const ExactVector& v);

}  // namespace homfinsler
