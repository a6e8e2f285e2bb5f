#include "homfinsler/exact.hpp"

#include <charconv>
#include <cmath>
#include <numeric>

#include "homfinsler/errors.hpp"

namespace homfinsler {

namespace {

std::int64_t parse_int(std::string_view s, std::string_view whole) {
  std::int64_t out = 0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
  if (ec != std::errc{} || ptr != s.data() + s.size() || s.empty()) {
    throw InputError("malformed number '" + std::string(whole) + "'");
  }
  return out;
}

}  // namespace

ExactCoord make_coord(std::int64_t num, std::int64_t den, std::int64_t radicand) {
  if (den == 0 || radicand <= 0) throw InputError("invalid exact coordinate");
  if (den < 0) {
    num = -num;
    den = -den;
  }
  // pull square factors out of the radicand
  for (std::int64_t f = 2; f * f <= radicand; ++f) {
    while (radicand % (f * f) == 0) {
      radicand /= f * f;
      num *= f;
    }
  }
  const std::int64_t g = std::gcd(num, den);
  if (g > 1) {
    num /= g;
    den /= g;
  }
  if (num == 0) {
    den = 1;
    radicand = 1;
  }
  return {num, den, radicand};
}

// Grammar: [-] ( int ['/' int] | [int '*'] 'sqrt(' int ')' ['/' int] )
ExactCoord ExactCoord::parse(std::string_view text) {
  std::string_view s = text;
  bool negative = false;
  if (!s.empty() && (s.front() == '-' || s.front() == '+')) {
    negative = s.front() == '-';
    s.remove_prefix(1);
  }
  std::int64_t num = 1;
  std::int64_t den = 1;
  std::int64_t rad = 1;
  const auto sq = s.find("sqrt(");
  if (sq == std::string_view::npos) {
    const auto slash = s.find('/');
    num = parse_int(s.substr(0, slash), text);
    if (slash != std::string_view::npos) den = parse_int(s.substr(slash + 1), text);
  } else {
    if (sq > 0) {
      if (s[sq - 1] != '*') throw InputError("malformed number '" + std::string(text) + "'");
      num = parse_int(s.substr(0, sq - 1), text);
    }
    const auto close = s.find(')', sq);
    if (close == std::string_view::npos) throw InputError("malformed number '" + std::string(text) + "'");
    rad = parse_int(s.substr(sq + 5, close - sq - 5), text);
    auto rest = s.substr(close + 1);
    if (!rest.empty()) {
      if (rest.front() != '/') throw InputError("malformed number '" + std::string(text) + "'");
      den = parse_int(rest.substr(1), text);
    }
  }
  if (den == 0 || rad <= 0) throw InputError("malformed number '" + std::string(text) + "'");
  return make_coord(negative ? -num : num, den, rad);
}

std::string ExactCoord::str() const {
  std::string out;
  if (radicand == 1) {
    out = std::to_string(num);
  } else {
    if (num == -1) {
      out = "-";
    } else if (num != 1) {
      out = std::to_string(num) + "*";
    }
    out += "sqrt(" + std::to_string(radicand) + ")";
  }
  if (den != 1) out += "/" + std::to_string(den);
  return out;
}

double ExactCoord::value() const {
  return static_cast<double>(num) * std::sqrt(static_cast<double>(radicand)) / static_cast<double>(den);
}

Eigen::VectorXd to_eigen(const ExactVector& v) {
  Eigen::VectorXd out(static_cast<Eigen::Index>(v.size()));
  for (std::size_t i = 0; i < v.size(); ++i) out(static_cast<Eigen::Index>(i)) = v[i].value();
  return out;
}

ExactVector negate(const ExactVector& v) {
  ExactVector out;
  out.reserve(v.size());
  for (const auto& c : v) out.push_back(-c);
  return out;
}

std::string join(const ExactVector& v, std::string_view sep) {
  std::string out;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i) out += sep;
    out += v[i].str();
  }
  return out;
}

}  // namespace homfinsler
