#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

namespace homfinsler {

/// A number of the form (num/den) * sqrt(radicand), radicand square-free.
/// Enough to write every root coordinate of A_n, C_n and G2 exactly.
struct ExactCoord {
  std::int64_t num = 0;
  std::int64_t den = 1;
  std::int64_t radicand = 1;

  static ExactCoord parse(std::string_view text);
  std::string str() const;
  double value() const;

  ExactCoord operator-() const { return {-num, den, radicand}; }
  friend bool operator==(const ExactCoord&, const ExactCoord&) = default;
};

ExactCoord make_coord(std::int64_t num, std::int64_t den = 1, std::int64_t radicand = 1);

using ExactVector = std::vector<ExactCoord>;

Eigen::VectorXd to_eigen(const ExactVector& v);
ExactVector negate(const ExactVector& v);
std::string join(const ExactVector& v, std::string_view sep = " ");

}  // namespace homfinsler
