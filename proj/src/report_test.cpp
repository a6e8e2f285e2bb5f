#include <filesystem>
#include <fstream>
#include <sstream>

#include "doctest.h"
#include "homfinsler/errors.hpp"
#include "homfinsler/fixtures.hpp"
#include "homfinsler/report.hpp"
#include "json.hpp"

using namespace homfinsler;
using nlohmann::json;

namespace {

CaseReport quick_report(const std::string& id) {
  VerifyOptions o;
  o.norm_samples = 2;
  o.n_flags = 40;
  return verify_case(builtin_fixture(id), o);
}

}  // namespace

TEST_CASE("case report carries certificates, tolerances and convention") {
  const CaseReport r = quick_report("C1");
  const json j = json::parse(case_report_json(r));
  CHECK(j["case"] == "C1");
  CHECK(j["verdict"] == "obstructed");
  CHECK(j["expected"] == "obstructed");
  CHECK(j["matches"] == true);
  CHECK(j["split"]["dims"] == json::array({1, 4, 2, 2}));
  CHECK(j["split"]["rank_gap"] == 1);
  CHECK(j["tolerances"]["zero"] == 1e-9);
  CHECK(j["settings"]["norms"] == 2);
  CHECK(j["convention"].get<std::string>().find("Killing") != std::string::npos);
  REQUIRE(j["certificates"].size() >= 2);
  for (const auto& c : j["certificates"]) {
    CHECK(c["passed"] == true);
    CHECK(c["residuals"]["commute"].get<double>() < 1e-9);
  }
  CHECK(j["samples"].size() == 2);
}

TEST_CASE("positivity block for the spheres") {
  const json j = json::parse(case_report_json(quick_report("sphere_SU")));
  CHECK(j["verdict"] == "positivity_sampled");
  const auto& p = j["samples"][0]["positivity"];
  CHECK(p["method"] == "normal_oracle");
  CHECK(p["admissible"] == 40);
  CHECK(p["min_K"].get<double>() > 0);
}

TEST_CASE("aggregate report and summary line") {
  const std::vector<CaseReport> rs = {quick_report("C2"), quick_report("sphere_Sp")};
  const json all = json::parse(all_cases_json(rs));
  CHECK(all["cases"].size() == 2);
  CHECK(case_summary_line(rs[0]).rfind("C2: obstructed (expected obstructed) dims 3 6", 0) == 0);
  CHECK(case_summary_line(rs[1]).find("min K") != std::string::npos);
  CHECK(case_summary_line(rs[1]).find("MISMATCH") == std::string::npos);
}

TEST_CASE("split and algebra documents") {
  const CaseFixture f = builtin_fixture("C5");
  auto g = std::make_shared<const CompactLieAlgebra>(RootSystem(f.family, f.rank));
  const json s = json::parse(split_json(reductive_split(g, f.subalgebra()), "C5"));
  CHECK(s["dim_m"] == 11);
  CHECK(s["dims"] == json::array({3, 8}));  // canonical order, not the fixture's
  CHECK(s["invariance_residual"].get<double>() < 1e-10);
  const json a = json::parse(algebra_json(*g));
  CHECK(a["dim"] == 14);
  CHECK(a["roots"] == 12);
  CHECK(a["jacobi_residual"].get<double>() < 1e-10);
}

TEST_CASE("atomic writes") {
  namespace fs = std::filesystem;
  const fs::path dir = fs::temp_directory_path() / "homfinsler_report_test";
  fs::create_directories(dir);
  const std::string path = (dir / "r.json").string();
  write_atomically(path, "first");
  write_atomically(path, "second");
  std::ifstream in(path);
  std::ostringstream got;
  got << in.rdbuf();
  CHECK(got.str() == "second");
  std::size_t files = 0;
  for ([[maybe_unused]] const auto& e : fs::directory_iterator(dir)) ++files;
  CHECK(files == 1);
  CHECK_THROWS_AS(write_atomically((dir / "missing" / "r.json").string(), "x"), InputError);
  fs::remove_all(dir);
}
