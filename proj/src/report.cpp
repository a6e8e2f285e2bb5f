#include "homfinsler/report.hpp"

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <unistd.h>

#include "json.hpp"

namespace homfinsler {

using nlohmann::ordered_json;

std::string convention_text(const CompactLieAlgebra& g) {
  char buf[256];
  std::snprintf(buf, sizeof buf,
                "roots in ambient orthonormal coordinates e_i; <x,y> = -Killing(x,y)/%.17g so that the Cartan "
                "basis t_k is orthonormal; compact basis t_k, u_a = e_a - e_-a, v_a = i(e_a + e_-a)",
                g.killing_scale());
  return buf;
}

namespace {

ordered_json vec(const Eigen::VectorXd& v) {
  ordered_json a = ordered_json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) a.push_back(v(i));
  return a;
}

ordered_json certificate_json(const LabeledCertificate& c, std::size_t norm, const char* source) {
  const auto& z = c.certificate;
  return {{"norm", norm},
          {"source", source},
          {"pole", c.pole_label},
          {"span", c.span_label},
          {"residuals",
           {{"commute", z.residuals[0]},
            {"pole_pole", z.residuals[1]},
            {"pole_span", z.residuals[2]},
            {"span_pole", z.residuals[3]}}},
          {"K", z.curvature_evaluated ? ordered_json(z.K_computed) : ordered_json(nullptr)},
          {"passed", z.passed()}};
}

ordered_json case_json(const CaseReport& r) {
  ordered_json split = {{"dims", r.dims},
                        {"expected_dims", r.expected_dims},
                        {"contents", r.summand_contents},
                        {"invariance_residual", r.invariance_residual},
                        {"commutant_offdiagonal", r.commutant_offdiagonal},
                        {"rank_gap", r.rank_gap ? ordered_json(*r.rank_gap) : ordered_json(nullptr)}};
  if (r.central_line)
    split["central_line"] = {{"centralizer_residual", r.central_line->centralizer_residual}, {"residuals", r.central_line->residuals}};
  ordered_json certs = ordered_json::array(), samples = ordered_json::array();
  for (std::size_t i = 0; i < r.norms.size(); ++i) {
    const auto& n = r.norms[i];
    if (n.named) certs.push_back(certificate_json(*n.named, i, "fixture"));
    if (n.search) certs.push_back(certificate_json(*n.search, i, "search"));
    ordered_json s = {{"norm", i},
                      {"spec", n.norm_text},
                      {"min_tensor_eigenvalue", n.min_eigenvalue},
                      {"hessian_relative_error", n.hessian_error}};
    if (n.positivity) {
      const auto& p = *n.positivity;
      s["positivity"] = {{"requested", p.requested},  {"admissible", p.admissible},
                         {"attempts", p.attempts},    {"nonconvex", p.nonconvex},
                         {"method", p.normal_oracle ? "normal_oracle" : "flag_curvature"},
                         {"min_K", p.min_K},          {"mean_K", p.mean_K}};
      if (p.argmin) s["positivity"]["argmin"] = {{"y", vec(p.argmin->y)}, {"v", vec(p.argmin->v)}};
    }
    samples.push_back(s);
  }
  return {{"case", r.case_id},
          {"split", split},
          {"certificates", certs},
          {"samples", samples},
          {"tolerances",
           {{"zero", r.options.tolerance_zero},
            {"hessian", r.options.tolerance_hessian},
            {"admissible_eigenvalue", kAdmissibleEigenvalue},
            {"invariance", 1e-10},
            {"commutant", 1e-8}}},
          {"settings", {{"norms", r.options.norm_samples}, {"flags", r.options.n_flags}, {"seed", r.options.seed}}},
          {"convention", r.convention},
          {"verdict", to_string(r.verdict)},
          {"expected", to_string(r.expected)},
          {"matches", r.matches_expectation()}};
}

}  // namespace

std::string case_report_json(const CaseReport& report) { return case_json(report).dump(2) + "\n"; }

std::string all_cases_json(const std::vector<CaseReport>& reports) {
  ordered_json all = {{"cases", ordered_json::array()}};
  bool ok = true;
  for (const auto& r : reports) {
    all["cases"].push_back(case_json(r));
    ok = ok && r.matches_expectation();
  }
  all["all_match"] = ok;
  return all.dump(2) + "\n";
}

std::string split_json(const ReductiveSplit& split, const std::string& case_id) {
  ordered_json s = {{"case", case_id},
                    {"dim_h", split.dim_h()},
                    {"dim_m", split.dim_m()},
                    {"dims", split.summand_dims()},
                    {"contents", ordered_json::array()},
                    {"invariance_residual", invariance_residual(split)},
                    {"commutant_offdiagonal", commutant_offdiagonal(split)},
                    {"convention", convention_text(*split.algebra)}};
  for (std::size_t i = 0; i < split.summands.size(); ++i)
    s["contents"].push_back(summand_content(split, i).str(split.algebra->roots()));
  return s.dump(2) + "\n";
}

std::string algebra_json(const CompactLieAlgebra& g) {
  ordered_json a = {{"family", to_string(g.roots().family())},
                    {"rank", g.rank()},
                    {"dim", g.dim()},
                    {"roots", g.roots().size()},
                    {"jacobi_residual", g.jacobi_residual()},
                    {"ad_invariance_residual", g.ad_invariance_residual()},
                    {"killing_scale", g.killing_scale()},
                    {"convention", convention_text(g)}};
  if (g.roots().family() != Family::G2) {
    const MatrixCheckReport m = classical_matrix_check(g);
    a["matrix_check"] = {{"algebra", m.matrix_algebra},
                         {"matrix_size", m.matrix_size},
                         {"bracket_discrepancy", m.bracket_discrepancy},
                         {"skew_hermitian_residual", m.skew_hermitian_residual},
                         {"membership_residual", m.membership_residual},
                         {"image_rank", m.image_rank}};
  }
  return a.dump(2) + "\n";
}

std::string curvature_json(const VeryStandardNorm& n, const Flag& flag, const CurvatureResult* result,
                           const std::string& error, double normal_K) {
  ordered_json c = {{"norm", n.L().to_text()}, {"y", vec(flag.y)}, {"v", vec(flag.v)}};
  if (result) {
    c["K"] = result->K;
    c["U"] = vec(result->U);
    c["precondition_residuals"] = {{"commute", result->commute_residual}, {"pole", result->pole_residual}};
    c["denominator"] = result->denominator;
  } else {
    c["K"] = nullptr;
    c["error"] = error;
  }
  c["normal_metric_K"] = normal_K;
  c["tolerances"] = {{"precondition", kPreconditionTolerance}};
  c["convention"] = convention_text(*n.split().algebra);
  return c.dump(2) + "\n";
}

void write_atomically(const std::string& path, const std::string& content) {
  namespace fs = std::filesystem;
  const fs::path target(path);
  fs::path tmp = target;
  tmp += ".tmp." + std::to_string(::getpid());
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw InputError("cannot write '" + tmp.string() + "'");
    out << content;
    out.flush();
    if (!out) throw InputError("write to '" + tmp.string() + "' failed");
  }
  std::error_code ec;
  fs::rename(tmp, target, ec);
  if (ec) {
    fs::remove(tmp);
    throw InputError("cannot move report into place at '" + path + "': " + ec.message());
  }
}

std::string case_summary_line(const CaseReport& r) {
  std::ostringstream out;
  out << r.case_id << ": " << to_string(r.verdict) << " (expected " << to_string(r.expected) << ") dims";
  for (int d : r.dims) out << " " << d;
  if (r.rank_gap) out << ", dim t∩m = " << *r.rank_gap;
  const NormOutcome* first = r.norms.empty() ? nullptr : &r.norms.front();
  if (first && first->named)
    out << ", pair " << first->named->pole_label << " | " << first->named->span_label;
  else if (first && first->search)
    out << ", pair " << first->search->pole_label << " | " << first->search->span_label;
  if (first && first->positivity) {
    char buf[64];
    std::snprintf(buf, sizeof buf, ", min K %.6g over %d flags", first->positivity->min_K,
                  first->positivity->admissible);
    out << buf;
  }
  out << (r.matches_expectation() ? "" : "  [MISMATCH]");
  return out.str();
}

}  // namespace homfinsler
