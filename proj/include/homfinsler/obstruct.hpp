#pragma once

#include <cstdint>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "homfinsler/curvature.hpp"
#include "homfinsler/fixtures.hpp"

namespace homfinsler {

/// Random admissible generating functions for a split. Reversible draws
/// cycle through diagonal, rational and quartic-root forms; non-reversible
/// ones through diagonal, randers and a generic drifted form. Every draw is
/// filtered by the convexity sample.
std::vector<LFunction> sample_norms(std::shared_ptr<const ReductiveSplit> split, Shape shape, int count,
                                    std::mt19937_64& rng);

/// A structured vector of m: a root-plane basis vector or a t∩m generator.
struct Candidate {
  std::string label;
  Eigen::VectorXd coords;
  int summand = -1;
};

std::vector<Candidate> structured_candidates(const ReductiveSplit& split);

struct LabeledCertificate {
  std::string pole_label, span_label;
  ZeroFlagCertificate certificate;
};

/// First ordered pair of structured candidates whose zero-flag certificate
/// passes, or nothing.
std::optional<LabeledCertificate> find_commuting_zero_pair(const VeryStandardNorm& n,
                                                           double tolerance = kPreconditionTolerance);

struct PositivitySummary {
  int requested = 0;
  int admissible = 0;  // flags actually evaluated
  int attempts = 0;
  int nonconvex = 0;  // poles where g_y failed to factor
  bool normal_oracle = false;  // flags evaluated by the normal-metric formula
  double min_K = 0, mean_K = 0;
  std::optional<Flag> argmin;
};

/// Samples flags and evaluates K. For scalar multiples of the normal metric
/// arbitrary flags are evaluated by the normal-metric formula; otherwise only
/// commuting flags passing the pole condition are used. Throws InputError
/// for n_flags < 1.
PositivitySummary positivity_sample(const VeryStandardNorm& n, int n_flags, std::mt19937_64& rng,
                                    double tolerance = kPreconditionTolerance);

/// Commuting flag with pole y drawn from `mode` (0: all of m, 1: one summand,
/// 2: t∩m), or nothing if the centralizer of y in m is spanned by y.
std::optional<Flag> random_commuting_flag(const ReductiveSplit& split, int mode, std::mt19937_64& rng);

/// Scalar c if L is c times the normal metric.
std::optional<double> normal_multiple(const LFunction& L);

enum class Verdict { Obstructed, PositivitySampled, Inconclusive };
std::string to_string(Verdict v);

struct VerifyOptions {
  int norm_samples = 10;
  int n_flags = 500;
  std::uint64_t seed = 20240601;
  double tolerance_zero = kPreconditionTolerance;
  double tolerance_hessian = 1e-5;
};

struct NormOutcome {
  std::string norm_text;
  double min_eigenvalue = 0;
  double hessian_error = 0;  // closed form vs finite differences at a sampled pole
  std::optional<LabeledCertificate> named;   // fixture pair
  std::optional<LabeledCertificate> search;  // structured search
  std::optional<PositivitySummary> positivity;
};

struct CaseReport {
  std::string case_id;
  std::vector<int> dims;
  std::vector<int> expected_dims;
  std::vector<std::string> summand_contents;
  double invariance_residual = 0;
  double commutant_offdiagonal = 0;
  std::optional<int> rank_gap;
  std::optional<CentralLineReport> central_line;
  std::vector<NormOutcome> norms;
  Verdict verdict = Verdict::Inconclusive;
  Expectation expected = Expectation::None;
  VerifyOptions options;
  std::string convention;

  bool matches_expectation() const;
};

/// Seed of the random stream used for one case.
std::uint64_t case_seed(std::uint64_t base, const std::string& case_id);

/// Builds the space, checks the split against the fixture (throws
/// FixtureIntegrityError on mismatch), samples norms and certifies or samples.
CaseReport verify_case(const CaseFixture& fixture, const VerifyOptions& options);

}  // namespace homfinsler
