#include <random>

#include "doctest.h"
#include "homfinsler/curvature.hpp"
#include "homfinsler/errors.hpp"
#include "homfinsler/fixtures.hpp"
#include "homfinsler/obstruct.hpp"

using namespace homfinsler;

namespace {

std::shared_ptr<const ReductiveSplit> fixture_split(const std::string& id) {
  const CaseFixture f = builtin_fixture(id);
  auto g = std::make_shared<const CompactLieAlgebra>(RootSystem(f.family, f.rank));
  return std::make_shared<const ReductiveSplit>(align_split(reductive_split(g, f.subalgebra()), f.summands));
}

Eigen::VectorXd m_vector(const ReductiveSplit& split, const std::string& item) {
  return split.m_coords(item_vector(*split.algebra, parse_span_item(item)));
}

VeryStandardNorm normal_norm(std::shared_ptr<const ReductiveSplit> split, Shape shape = Shape::Reversible) {
  return VeryStandardNorm(split, LFunction::diagonal(shape, std::vector<double>(split->summands.size(), 1.0)));
}

Eigen::VectorXd random_in(const ReductiveSplit& split, std::size_t summand, std::mt19937_64& rng) {
  std::normal_distribution<double> N;
  Eigen::VectorXd y = Eigen::VectorXd::Zero(split.dim_m());
  const auto& b = split.summands[summand];
  for (int k = 0; k < b.dim; ++k) y(b.offset + k) = N(rng);
  return y;
}

// random element of m_j commuting with y, if any
std::optional<Eigen::VectorXd> commuting_in(const ReductiveSplit& split, const Eigen::VectorXd& y, std::size_t j,
                                            std::mt19937_64& rng) {
  const auto& b = split.summands[j];
  Eigen::MatrixXd C(split.algebra->dim(), b.dim);
  for (int k = 0; k < b.dim; ++k) C.col(k) = bracket_g(split, y, Eigen::VectorXd::Unit(split.dim_m(), b.offset + k));
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(C, Eigen::ComputeFullV);
  std::normal_distribution<double> N;
  Eigen::VectorXd local = Eigen::VectorXd::Zero(b.dim);
  for (int k = 0; k < b.dim; ++k) {
    const double sigma = k < svd.singularValues().size() ? svd.singularValues()(k) : 0.0;
    if (sigma < 1e-10) local += N(rng) * svd.matrixV().col(k);
  }
  Eigen::VectorXd v = Eigen::VectorXd::Zero(split.dim_m());
  v.segment(b.offset, b.dim) = local;
  v -= v.dot(y) / y.squaredNorm() * y;
  if (v.norm() < 1e-6) return std::nullopt;
  return v;
}

}  // namespace

TEST_CASE("C1 pair has zero curvature for the normal metric and a skewed diagonal one") {
  const auto split = fixture_split("C1");
  const Flag f{m_vector(*split, "plane 2 0"), m_vector(*split, "plane 0 2")};
  for (const auto& c : {std::vector<double>{1, 1, 1, 1}, std::vector<double>{0.3, 2.0, 5.0, 1.2}}) {
    const CurvatureResult r = flag_curvature(VeryStandardNorm(split, LFunction::diagonal(Shape::Reversible, c)), f);
    CHECK(std::abs(r.K) < 1e-9);
    CHECK(r.commute_residual < 1e-12);
    CHECK(r.denominator > 0);
  }
}

TEST_CASE("normal metric on the Sp sphere is positive on random flags") {
  const auto split = fixture_split("sphere_Sp");
  std::mt19937_64 rng(11);
  std::normal_distribution<double> N;
  for (int k = 0; k < 200; ++k) {
    Flag f{Eigen::VectorXd(split->dim_m()), Eigen::VectorXd(split->dim_m())};
    for (int i = 0; i < split->dim_m(); ++i) f.y(i) = N(rng), f.v(i) = N(rng);
    CHECK(normal_oracle(*split, f) > 1e-3);
  }
}

TEST_CASE("degenerate flags are rejected") {
  const auto split = fixture_split("C1");
  const Eigen::VectorXd y = m_vector(*split, "plane 2 0");
  const VeryStandardNorm n = normal_norm(split);
  CHECK_THROWS_AS(flag_curvature(n, {y, 2.0 * y}), InputError);
  CHECK_THROWS_AS(flag_curvature(n, {Eigen::VectorXd::Zero(split->dim_m()), y}), InputError);
  CHECK_THROWS_AS(normal_oracle(*split, {y, -y}), InputError);
  CHECK_THROWS_AS(zero_flag_check(n, y, 3.0 * y), InputError);
}

TEST_CASE("non-commuting flags are inapplicable") {
  const auto split = fixture_split("C1");
  const VeryStandardNorm n = normal_norm(split);
  const Flag f{m_vector(*split, "plane 2 0"), m_vector(*split, "plane 1 1")};
  CHECK_THROWS_AS(flag_curvature(n, f), InapplicableFlag);
}

TEST_CASE("bi-invariant three-sphere has constant curvature") {
  auto g = std::make_shared<const CompactLieAlgebra>(RootSystem(Family::C, 1));
  const ReductiveSplit split = reductive_split(g, SubalgebraSpec{});
  REQUIRE(split.dim_m() == 3);
  std::mt19937_64 rng(5);
  std::normal_distribution<double> N;
  double first = 0;
  for (int k = 0; k < 100; ++k) {
    Flag f{Eigen::VectorXd(3), Eigen::VectorXd(3)};
    for (int i = 0; i < 3; ++i) f.y(i) = N(rng), f.v(i) = N(rng);
    const double K = normal_oracle(split, f);
    if (k == 0) first = K;
    CHECK(K == doctest::Approx(first).epsilon(1e-10));
  }
  CHECK(first > 0);
}

TEST_CASE("curvature formula agrees with the normal oracle on commuting flags") {
  for (const std::string id : {"C1", "C2", "C3", "C4", "C5", "AW_degenerate"}) {
    CAPTURE(id);
    const auto split = fixture_split(id);
    const VeryStandardNorm n = normal_norm(split);
    std::mt19937_64 rng(17);
    int used = 0;
    for (int k = 0; k < 300 && used < 60; ++k) {
      const auto f = random_commuting_flag(*split, k % 3, rng);
      if (!f) continue;
      ++used;
      const CurvatureResult r = flag_curvature(n, *f);
      CHECK(std::abs(r.K - normal_oracle(*split, *f)) < 1e-8);
    }
    CHECK(used > 10);
  }
}

TEST_CASE("flag curvature depends only on the flag") {
  // C1 with a non-normal diagonal norm has commuting flags of positive curvature
  const auto split = fixture_split("C1");
  const VeryStandardNorm n(split, LFunction::diagonal(Shape::Reversible, {1.0, 2.5, 0.7, 1.8}));
  std::mt19937_64 rng(23);
  int checked = 0;
  for (int k = 0; k < 2000 && checked < 20; ++k) {
    const auto f = random_commuting_flag(*split, k % 3, rng);
    if (!f) continue;
    CurvatureResult base;
    try {
      base = flag_curvature(n, *f);
    } catch (const InapplicableFlag&) {
      continue;
    }
    if (std::abs(base.K) < 1e-4) continue;
    ++checked;
    for (auto [lambda, mu] : {std::pair{2.0, 1.0}, std::pair{0.3, 7.0}, std::pair{1.0, 0.01}})
      CHECK(std::abs(flag_curvature(n, {lambda * f->y, mu * f->v}).K - base.K) < 1e-8);
    for (double c : {-2.0, 0.5, 10.0}) CHECK(std::abs(flag_curvature(n, {f->y, f->v + c * f->y}).K - base.K) < 1e-8);
  }
  CHECK(checked == 20);
}

TEST_CASE("named certificates pass and a random pair fails") {
  SUBCASE("C3") {
    const auto split = fixture_split("C3");
    const auto cert = zero_flag_check(VeryStandardNorm(split, LFunction::diagonal(Shape::Reversible, {1.3, 0.4, 2.2})),
                                      m_vector(*split, "plane 2 0 0"), m_vector(*split, "plane 0 2 0"));
    CHECK(cert.passed());
    CHECK(cert.curvature_evaluated);
    CHECK(std::abs(cert.K_computed) < 1e-9);
  }
  SUBCASE("C5") {
    const auto split = fixture_split("C5");
    const auto cert = zero_flag_check(VeryStandardNorm(split, LFunction::diagonal(Shape::Reversible, {0.6, 3.0})),
                                      m_vector(*split, "plane 1/2 -sqrt(3)/2"),
                                      m_vector(*split, "plane 3/2 sqrt(3)/2"));
    CHECK(cert.passed());
    CHECK(std::abs(cert.K_computed) < 1e-9);
  }
  SUBCASE("random") {
    const auto split = fixture_split("C3");
    std::mt19937_64 rng(2);
    std::normal_distribution<double> N;
    Eigen::VectorXd u(split->dim_m()), v(split->dim_m());
    for (int i = 0; i < split->dim_m(); ++i) u(i) = N(rng), v(i) = N(rng);
    const auto cert = zero_flag_check(normal_norm(split), u, v);
    CHECK(cert.residuals[0] > 1e-3);
    CHECK_FALSE(cert.residuals_pass());
    CHECK_FALSE(cert.passed());
    CHECK_FALSE(cert.curvature_evaluated);
  }
}

TEST_CASE("commuting pairs drawn from single summands are zero flags") {
  for (const std::string id : {"C1", "C2", "C3", "C4", "C5", "AW_degenerate"}) {
    CAPTURE(id);
    const auto split = fixture_split(id);
    std::mt19937_64 rng(29);
    const auto norms = sample_norms(split, Shape::Reversible, 4, rng);
    int tried = 0;
    for (const auto& L : norms) {
      const VeryStandardNorm n(split, L);
      for (std::size_t i = 0; i < split->summands.size(); ++i)
        for (std::size_t j = 0; j < split->summands.size(); ++j) {
          const Eigen::VectorXd y = random_in(*split, i, rng);
          const auto v = commuting_in(*split, y, j, rng);
          if (!v) continue;
          ++tried;
          const auto cert = zero_flag_check(n, y, *v);
          CAPTURE(i);
          CAPTURE(j);
          CHECK(cert.passed());
        }
    }
    CHECK(tried > 0);
  }
}

TEST_CASE("non-reversible: pole in the last summand gives zero flags") {
  const auto split = fixture_split("AW_degenerate");
  const std::size_t last = split->summands.size() - 1;
  std::mt19937_64 rng(31);
  const auto norms = sample_norms(split, Shape::Nonreversible, 4, rng);
  int tried = 0;
  for (const auto& L : norms) {
    const VeryStandardNorm n(split, L);
    for (double sign : {1.0, -1.0}) {
      const Eigen::VectorXd y = sign * random_in(*split, last, rng);
      for (std::size_t j = 0; j < last; ++j) {
        const auto v = commuting_in(*split, y, j, rng);
        if (!v) continue;
        ++tried;
        CHECK(zero_flag_check(n, y, *v).passed());
      }
    }
  }
  CHECK(tried > 0);
}
