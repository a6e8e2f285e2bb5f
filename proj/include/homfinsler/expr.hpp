#pragma once

#include <cmath>
#include <memory>
#include <string>
#include <vector>

namespace homfinsler {

/// Second-order dual number: value, two first-order parts and the mixed part.
/// Seeding e1 along x_p and e2 along x_q gives f, f_p, f_q and f_pq.
struct HyperDual {
  double a = 0, e1 = 0, e2 = 0, e12 = 0;

  HyperDual() = default;
  HyperDual(double v) : a(v) {}  // NOLINT(google-explicit-constructor)
  HyperDual(double v, double d1, double d2, double d12) : a(v), e1(d1), e2(d2), e12(d12) {}
};

inline HyperDual operator+(const HyperDual& x, const HyperDual& y) {
  return {x.a + y.a, x.e1 + y.e1, x.e2 + y.e2, x.e12 + y.e12};
}
inline HyperDual operator-(const HyperDual& x, const HyperDual& y) {
  return {x.a - y.a, x.e1 - y.e1, x.e2 - y.e2, x.e12 - y.e12};
}
inline HyperDual operator-(const HyperDual& x) { return {-x.a, -x.e1, -x.e2, -x.e12}; }
inline HyperDual operator*(const HyperDual& x, const HyperDual& y) {
  return {x.a * y.a, x.a * y.e1 + x.e1 * y.a, x.a * y.e2 + x.e2 * y.a,
          x.a * y.e12 + x.e1 * y.e2 + x.e2 * y.e1 + x.e12 * y.a};
}

// f(x) with f', f'' at the real part
inline HyperDual chain(const HyperDual& x, double f, double df, double ddf) {
  return {f, df * x.e1, df * x.e2, df * x.e12 + ddf * x.e1 * x.e2};
}

inline HyperDual inverse(const HyperDual& x) {
  const double r = 1.0 / x.a;
  return chain(x, r, -r * r, 2 * r * r * r);
}
inline HyperDual operator/(const HyperDual& x, const HyperDual& y) { return x * inverse(y); }
inline HyperDual sqrt(const HyperDual& x) {
  const double s = std::sqrt(x.a);
  return chain(x, s, 0.5 / s, -0.25 / (s * x.a));
}
inline HyperDual exp(const HyperDual& x) {
  const double e = std::exp(x.a);
  return chain(x, e, e, e);
}
inline HyperDual log(const HyperDual& x) { return chain(x, std::log(x.a), 1.0 / x.a, -1.0 / (x.a * x.a)); }
// real exponent
inline HyperDual pow(const HyperDual& x, double p) {
  return chain(x, std::pow(x.a, p), p * std::pow(x.a, p - 1), p * (p - 1) * std::pow(x.a, p - 2));
}
inline HyperDual pow(const HyperDual& x, const HyperDual& y) {
  if (y.e1 == 0 && y.e2 == 0 && y.e12 == 0) return pow(x, y.a);
  return exp(y * log(x));
}

/// Arithmetic expression over named variables t1..tN and ys.
/// Grammar: + - * / ^ (right assoc.), unary minus, parentheses, numbers,
/// sqrt(), exp(), log(), pow(,).
class Expression {
 public:
  struct Node;

  /// `variables` lists the accepted names; their position is the argument index.
  static Expression parse(const std::string& text, const std::vector<std::string>& variables);

  double eval(const std::vector<double>& args) const;
  HyperDual eval(const std::vector<HyperDual>& args) const;

  const std::string& text() const { return text_; }
  /// Highest argument index used, or -1.
  int max_variable() const { return max_var_; }

 private:
  std::shared_ptr<const Node> root_;
  std::string text_;
  int max_var_ = -1;
};

}  // namespace homfinsler
