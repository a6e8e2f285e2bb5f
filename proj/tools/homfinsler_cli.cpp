#include <filesystem>
#include <fstream>
#include <future>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "homfinsler/errors.hpp"
#include "homfinsler/obstruct.hpp"
#include "homfinsler/report.hpp"

using namespace homfinsler;

namespace {

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot read '" + path + "'");
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

// built-in case id or fixture file
CaseFixture load_fixture(const std::string& name) {
  for (const auto& id : builtin_case_ids())
    if (id == name) return builtin_fixture(id);
  if (std::filesystem::exists(name)) return CaseFixture::from_text(read_file(name), name);
  throw InputError("'" + name + "' is neither a known case nor a fixture file");
}

std::shared_ptr<const ReductiveSplit> build_split(const CaseFixture& f) {
  auto g = std::make_shared<const CompactLieAlgebra>(RootSystem(f.family, f.rank));
  ReductiveSplit s = reductive_split(g, f.subalgebra());
  if (!f.summands.empty()) s = align_split(s, f.summands);
  return std::make_shared<const ReductiveSplit>(std::move(s));
}

void emit(const std::string& out, const std::string& json) {
  if (!out.empty()) write_atomically(out, json);
}

struct Settings {
  int norms = 10;
  int flags = 500;
  std::uint64_t seed = VerifyOptions{}.seed;
  std::string out;
  double tolerance_zero = 1e-9;
  double tolerance_hessian = 1e-5;

  VerifyOptions options() const {
    VerifyOptions o;
    o.norm_samples = norms;
    o.n_flags = flags;
    o.seed = seed;
    o.tolerance_zero = tolerance_zero;
    o.tolerance_hessian = tolerance_hessian;
    return o;
  }
};

void add_common(CLI::App* cmd, Settings& s) {
  cmd->add_option("--norms", s.norms, "number of sampled very standard norms")->capture_default_str();
  cmd->add_option("--flags", s.flags, "number of flags for positivity sampling")->capture_default_str();
  cmd->add_option("--seed", s.seed, "base random seed")->capture_default_str();
  cmd->add_option("--out", s.out, "JSON report path");
  cmd->add_option("--tolerance-zero", s.tolerance_zero, "zero tolerance for residuals and K")->capture_default_str();
  cmd->add_option("--tolerance-hessian", s.tolerance_hessian, "relative tolerance of the Hessian check")
      ->capture_default_str();
}

int run_verify_case(const std::string& name, const Settings& s) {
  const CaseReport r = verify_case(load_fixture(name), s.options());
  std::cout << case_summary_line(r) << "\n";
  emit(s.out, case_report_json(r));
  return r.matches_expectation() ? 0 : 1;
}

int run_verify_all(const Settings& s) {
  const VerifyOptions o = s.options();
  if (o.norm_samples < 1 || o.n_flags < 1) throw InputError("--norms and --flags must be at least 1");
  std::vector<std::future<CaseReport>> jobs;
  for (const auto& id : builtin_case_ids())
    jobs.push_back(std::async(std::launch::async, [id, o] { return verify_case(builtin_fixture(id), o); }));
  std::vector<CaseReport> reports;
  for (auto& j : jobs) reports.push_back(j.get());
  bool ok = true;
  for (const auto& r : reports) {
    std::cout << case_summary_line(r) << "\n";
    ok = ok && r.matches_expectation();
  }
  emit(s.out, all_cases_json(reports));
  std::cout << (ok ? "all verdicts match" : "verdict mismatch") << "\n";
  return ok ? 0 : 1;
}

Eigen::VectorXd flag_vector(const ReductiveSplit& split, const std::string& text) {
  const AlgebraVector x = item_vector(*split.algebra, parse_span_item(text));
  if (split.algebra->norm(split.h_component(x)) > 1e-9 * split.algebra->norm(x))
    throw InputError("'" + text + "' is not in m");
  return split.m_coords(x);
}

int run_curvature(const std::string& name, const std::string& norm_path, const std::string& pole,
                  const std::string& span, const Settings& s) {
  const CaseFixture f = load_fixture(name);
  auto split = build_split(f);
  LFunction L = norm_path.empty()
                    ? LFunction::diagonal(f.shape, std::vector<double>(split->summands.size(), 1.0))
                    : LFunction::from_text(read_file(norm_path));
  const VeryStandardNorm n(split, L);
  const Flag flag{flag_vector(*split, pole), flag_vector(*split, span)};
  const double normal_K = normal_oracle(*split, flag);
  try {
    const CurvatureResult r = flag_curvature(n, flag, s.tolerance_zero);
    std::cout.precision(17);
    std::cout << "K = " << r.K << "\n"
              << "commute residual " << r.commute_residual << ", pole residual " << r.pole_residual
              << ", denominator " << r.denominator << "\n"
              << "normal-metric K of the same plane " << normal_K << "\n";
    emit(s.out, curvature_json(n, flag, &r, "", normal_K));
    return 0;
  } catch (const NumericalError& e) {
    std::cerr << "error: " << e.what() << "\n";
    emit(s.out, curvature_json(n, flag, nullptr, e.what(), normal_K));
    return 1;
  }
}

int run_validate_algebra(const std::string& name, const Settings& s) {
  std::size_t split_at = name.find_first_of("0123456789");
  if (split_at == std::string::npos) throw InputError("algebra name like A2, C3 or G2 expected");
  const Family family = parse_family(name.substr(0, split_at));
  int rank = 0;
  try {
    rank = std::stoi(name.substr(split_at));
  } catch (const std::logic_error&) {
    throw InputError("bad rank in '" + name + "'");
  }
  const CompactLieAlgebra g(build_root_system(family, rank));
  std::cout << name << ": dim " << g.dim() << ", Jacobi residual " << g.jacobi_residual()
            << ", ad-invariance residual " << g.ad_invariance_residual();
  bool ok = g.jacobi_residual() < 1e-10 && g.ad_invariance_residual() < 1e-10;
  if (family != Family::G2) {
    const MatrixCheckReport m = classical_matrix_check(g);
    std::cout << ", " << m.matrix_algebra << " discrepancy " << m.bracket_discrepancy;
    ok = ok && m.bracket_discrepancy < 1e-10;
  }
  std::cout << "\n";
  emit(s.out, algebra_json(g));
  return ok ? 0 : 1;
}

int run_split(const std::string& name, const Settings& s) {
  const CaseFixture f = load_fixture(name);
  auto split = build_split(f);
  std::cout << f.id << ": dim h " << split->dim_h() << ", dim m " << split->dim_m() << "\n";
  for (std::size_t i = 0; i < split->summands.size(); ++i)
    std::cout << "  m" << i + 1 << " (dim " << split->summands[i].dim << ") "
              << summand_content(*split, i).str(split->algebra->roots()) << "\n";
  emit(s.out, split_json(*split, f.id));
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Flag curvature and zero-curvature certificates for homogeneous Finsler spaces"};
  app.require_subcommand(1);
  Settings s;
  std::string case_name, norm_path, pole, span, algebra_name;

  auto* vc = app.add_subcommand("verify-case", "certify or sample one case");
  vc->add_option("case", case_name, "case id or fixture file")->required();
  add_common(vc, s);

  auto* va = app.add_subcommand("verify-all", "run every built-in case");
  add_common(va, s);

  auto* cu = app.add_subcommand("curvature", "flag curvature of one flag");
  cu->add_option("case", case_name, "case id or fixture file")->required();
  cu->add_option("--norm", norm_path, "norm spec file (default: normal metric)");
  cu->add_option("--pole", pole, "pole item, e.g. 'plane 2 0 @ 0.3'")->required();
  cu->add_option("--span", span, "spanning item")->required();
  add_common(cu, s);

  auto* al = app.add_subcommand("validate-algebra", "Jacobi and matrix checks");
  al->add_option("algebra", algebra_name, "A2, A3, C2, C3, G2, ...")->required();
  add_common(al, s);

  auto* sp = app.add_subcommand("split", "print the isotypic decomposition");
  sp->add_option("case", case_name, "case id or fixture file")->required();
  add_common(sp, s);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    if (*vc) return run_verify_case(case_name, s);
    if (*va) return run_verify_all(s);
    if (*cu) return run_curvature(case_name, norm_path, pole, span, s);
    if (*al) return run_validate_algebra(algebra_name, s);
    if (*sp) return run_split(case_name, s);
  } catch (const FixtureIntegrityError& e) {
    std::cerr << "fixture integrity error: " << e.what() << "\n";
    return 1;
  } catch (const InputError& e) {
    std::cerr << "input error: " << e.what() << "\n";
    return 2;
  } catch (const NumericalError& e) {
    std::cerr << "numerical error: " << e.what() << "\n";
    return 1;
  }
  return 2;
}
