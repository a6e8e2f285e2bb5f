#include "doctest.h"
#include "homfinsler/errors.hpp"
#include "homfinsler/fixtures.hpp"
#include "homfinsler/obstruct.hpp"
#include "homfinsler/report.hpp"

using namespace homfinsler;

namespace {

std::shared_ptr<const ReductiveSplit> fixture_split(const std::string& id) {
  const CaseFixture f = builtin_fixture(id);
  auto g = std::make_shared<const CompactLieAlgebra>(RootSystem(f.family, f.rank));
  return std::make_shared<const ReductiveSplit>(align_split(reductive_split(g, f.subalgebra()), f.summands));
}

VerifyOptions quick() {
  VerifyOptions o;
  o.norm_samples = 3;
  o.n_flags = 60;
  return o;
}

}  // namespace

TEST_CASE("sampled norms are admissible and start with the normal metric") {
  for (const char* id : {"C1", "C4", "AW_degenerate"}) {
    CAPTURE(std::string(id));
    const auto split = fixture_split(id);
    const Shape shape = builtin_fixture(id).shape;
    std::mt19937_64 rng(1);
    const auto norms = sample_norms(split, shape, 7, rng);
    REQUIRE(norms.size() == 7);
    CHECK(normal_multiple(norms[0]) == 1.0);
    for (const auto& L : norms) {
      CHECK(L.shape() == shape);
      CHECK(is_admissible(VeryStandardNorm(split, L), rng));
    }
  }
  std::mt19937_64 rng(1);
  CHECK_THROWS_AS(sample_norms(fixture_split("C1"), Shape::Reversible, 0, rng), InputError);
}

TEST_CASE("normal multiples") {
  CHECK(normal_multiple(LFunction::diagonal(Shape::Reversible, {2.5, 2.5})) == 2.5);
  CHECK_FALSE(normal_multiple(LFunction::diagonal(Shape::Reversible, {1, 2})).has_value());
  CHECK_FALSE(normal_multiple(LFunction::randers({1, 1}, 0.2)).has_value());
}

TEST_CASE("structured search finds the declared pairs") {
  SUBCASE("C2 torus and root plane") {
    const auto split = fixture_split("C2");
    const auto found = find_commuting_zero_pair(VeryStandardNorm(split, LFunction::diagonal(Shape::Reversible, {1, 1})));
    REQUIRE(found.has_value());
    CHECK(found->certificate.passed());
  }
  SUBCASE("C4") {
    const auto split = fixture_split("C4");
    const auto found =
        find_commuting_zero_pair(VeryStandardNorm(split, LFunction::diagonal(Shape::Reversible, {1, 2, 3, 0.5})));
    REQUIRE(found.has_value());
    CHECK(found->certificate.passed());
  }
  SUBCASE("spheres have none") {
    for (const char* id : {"sphere_SU", "sphere_Sp"}) {
      const auto split = fixture_split(id);
      CHECK_FALSE(find_commuting_zero_pair(VeryStandardNorm(split, LFunction::diagonal(Shape::Reversible, {1, 1})))
                      .has_value());
    }
  }
}

TEST_CASE("obstruction holds for every sampled reversible norm") {
  for (const char* id : {"C1", "C2", "C3", "C4", "C5"}) {
    CAPTURE(std::string(id));
    const CaseFixture f = builtin_fixture(id);
    const auto split = fixture_split(id);
    const Eigen::VectorXd u = split->m_coords(item_vector(*split->algebra, f.pair->first));
    const Eigen::VectorXd v = split->m_coords(item_vector(*split->algebra, f.pair->second));
    std::mt19937_64 rng(case_seed(7, id));
    for (const auto& L : sample_norms(split, Shape::Reversible, 8, rng))
      CHECK(zero_flag_check(VeryStandardNorm(split, L), u, v).passed());
  }
}

TEST_CASE("positivity sampling") {
  const auto split = fixture_split("sphere_Sp");
  const VeryStandardNorm n(split, LFunction::diagonal(Shape::Reversible, {1, 1}));
  std::mt19937_64 rng(3);
  const PositivitySummary s = positivity_sample(n, 500, rng);
  CHECK(s.admissible == 500);
  CHECK(s.normal_oracle);
  CHECK(s.min_K > 0);
  CHECK(s.mean_K >= s.min_K);
  CHECK_THROWS_AS(positivity_sample(n, 0, rng), InputError);

  // no commuting flags at all on the sphere for a non-normal norm: empty result, no throw
  const VeryStandardNorm skew(split, LFunction::diagonal(Shape::Reversible, {1, 2}));
  const PositivitySummary none = positivity_sample(skew, 5, rng);
  CHECK(none.admissible == 0);
  CHECK(none.attempts == 250);
}

TEST_CASE("case seeds") {
  CHECK(case_seed(1, "C1") == case_seed(1, "C1"));
  CHECK(case_seed(1, "C1") != case_seed(1, "C2"));
  CHECK(case_seed(1, "C1") != case_seed(2, "C1"));
}

TEST_CASE("verify_case verdicts") {
  const CaseReport c1 = verify_case(builtin_fixture("C1"), quick());
  CHECK(c1.verdict == Verdict::Obstructed);
  CHECK(c1.matches_expectation());
  CHECK(c1.rank_gap == 1);
  CHECK(c1.norms.size() == 3);
  for (const auto& n : c1.norms) {
    REQUIRE(n.named.has_value());
    CHECK(n.named->certificate.passed());
    CHECK(n.min_eigenvalue > kAdmissibleEigenvalue);
  }

  const CaseReport aw = verify_case(builtin_fixture("AW_degenerate"), quick());
  CHECK(aw.verdict == Verdict::Obstructed);
  REQUIRE(aw.central_line.has_value());

  VerifyOptions one = quick();
  one.norm_samples = 1;
  const CaseReport sp = verify_case(builtin_fixture("sphere_Sp"), one);
  CHECK(sp.verdict == Verdict::PositivitySampled);
  REQUIRE(sp.norms[0].positivity.has_value());
  CHECK(sp.norms[0].positivity->min_K > 0);
}

TEST_CASE("verify_case is deterministic and validates options") {
  const CaseFixture f = builtin_fixture("C3");
  CHECK(case_report_json(verify_case(f, quick())) == case_report_json(verify_case(f, quick())));
  VerifyOptions bad = quick();
  bad.norm_samples = 0;
  CHECK_THROWS_AS(verify_case(f, bad), InputError);
  bad = quick();
  bad.n_flags = 0;
  CHECK_THROWS_AS(verify_case(f, bad), InputError);
}

TEST_CASE("fixture mismatch is an integrity error") {
  CaseFixture f = builtin_fixture("C1");
  std::swap(f.summands[0], f.summands[1]);
  f.summands[0].pop_back();
  CHECK_THROWS_AS(verify_case(f, quick()), FixtureIntegrityError);
}
