#include "homfinsler/obstruct.hpp"

#include <cmath>
#include <cstdio>
#include <limits>

#include "homfinsler/errors.hpp"
#include "homfinsler/report.hpp"

namespace homfinsler {

std::string to_string(Verdict v) {
  switch (v) {
    case Verdict::Obstructed: return "obstructed";
    case Verdict::PositivitySampled: return "positivity_sampled";
    case Verdict::Inconclusive: return "inconclusive";
  }
  return {};
}

namespace {

std::string num(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

// c1*t1+c2*t2+...
std::string linear_form(const std::vector<double>& c, int n) {
  std::string s;
  for (int i = 0; i < n; ++i) s += (i ? "+" : "") + num(c[i]) + "*t" + std::to_string(i + 1);
  return s;
}

std::vector<double> log_uniform(std::mt19937_64& rng, int n) {
  std::uniform_real_distribution<double> u(std::log(0.2), std::log(5.0));
  std::vector<double> c(static_cast<std::size_t>(n));
  for (auto& x : c) x = std::exp(u(rng));
  return c;
}

std::vector<double> uniform(std::mt19937_64& rng, int n, double lo, double hi) {
  std::uniform_real_distribution<double> u(lo, hi);
  std::vector<double> c(static_cast<std::size_t>(n));
  for (auto& x : c) x = u(rng);
  return c;
}

LFunction draw_reversible(int kind, int s, std::mt19937_64& rng) {
  const auto c = log_uniform(rng, s);
  switch (kind) {
    case 0: return LFunction::diagonal(Shape::Reversible, c);
    case 1: {
      const auto a = uniform(rng, s, -1, 1);
      const auto d = log_uniform(rng, s);
      const double kappa = std::uniform_real_distribution<double>(0.05, 0.5)(rng);
      return LFunction::generic(Shape::Reversible, s,
                                linear_form(c, s) + "+" + num(kappa) + "*(" + linear_form(a, s) + ")^2/(" +
                                    linear_form(d, s) + ")");
    }
    default: {
      const auto e = uniform(rng, s, 0.05, 1.0);
      std::string quartic;
      for (int i = 0; i < s; ++i) quartic += "+" + num(e[i]) + "*t" + std::to_string(i + 1) + "^2";
      return LFunction::generic(Shape::Reversible, s, "sqrt((" + linear_form(c, s) + ")^2" + quartic + ")");
    }
  }
}

LFunction draw_nonreversible(int kind, int s, std::mt19937_64& rng) {
  const auto c = log_uniform(rng, s);
  const double b = std::uniform_real_distribution<double>(-0.9, 0.9)(rng);
  switch (kind) {
    case 0: return LFunction::diagonal(Shape::Nonreversible, c);
    case 1: return LFunction::randers(c, b);
    default: {
      const auto a = uniform(rng, s - 1, -1, 1);
      const auto d = log_uniform(rng, s - 1);
      const double kappa = std::uniform_real_distribution<double>(0.05, 0.5)(rng);
      return LFunction::generic(Shape::Nonreversible, s,
                                "(sqrt(" + linear_form(c, s - 1) + "+" + num(c[s - 1]) + "*ys^2+" + num(kappa) +
                                    "*(" + linear_form(a, s - 1) + ")^2/(" + linear_form(d, s - 1) +
                                    "+ys^2))+" + num(0.5 * b) + "*ys)^2");
    }
  }
}

}  // namespace

std::vector<LFunction> sample_norms(std::shared_ptr<const ReductiveSplit> split, Shape shape, int count,
                                    std::mt19937_64& rng) {
  if (count < 1) throw InputError("number of norms must be at least 1");
  const int s = static_cast<int>(split->summands.size());
  if (shape == Shape::Nonreversible && s < 2) throw InputError("non-reversible norms need at least two summands");
  std::vector<LFunction> out;
  out.push_back(LFunction::diagonal(shape, std::vector<double>(static_cast<std::size_t>(s), 1.0)));
  for (int k = 1; k < count; ++k) {
    const int kind = k % 3;
    bool found = false;
    for (int attempt = 0; attempt < 50 && !found; ++attempt) {
      LFunction L = shape == Shape::Reversible ? draw_reversible(kind, s, rng) : draw_nonreversible(kind, s, rng);
      if (is_admissible(VeryStandardNorm(split, L), rng)) {
        out.push_back(std::move(L));
        found = true;
      }
    }
    if (!found) out.push_back(LFunction::diagonal(shape, log_uniform(rng, s)));
  }
  return out;
}

std::vector<Candidate> structured_candidates(const ReductiveSplit& split) {
  const CompactLieAlgebra& g = *split.algebra;
  std::vector<Candidate> tori, planes;
  for (std::size_t i = 0; i < split.summands.size(); ++i) {
    const SummandContent content = summand_content(split, i);
    for (Eigen::Index j = 0; j < content.torus.cols(); ++j) {
      SummandContent one;
      one.torus = content.torus.col(j);
      tori.push_back({one.str(g.roots()), split.m_coords(g.torus(content.torus.col(j))).normalized(),
                      static_cast<int>(i)});
    }
    for (std::size_t p : content.planes) {
      const auto [u, v] = g.plane(p);
      planes.push_back({g.labels()[u], split.m_coords(g.basis(u)).normalized(), static_cast<int>(i)});
      planes.push_back({g.labels()[v], split.m_coords(g.basis(v)).normalized(), static_cast<int>(i)});
    }
  }
  tori.insert(tori.end(), planes.begin(), planes.end());
  return tori;
}

std::optional<LabeledCertificate> find_commuting_zero_pair(const VeryStandardNorm& n, double tolerance) {
  const ReductiveSplit& split = n.split();
  const auto cands = structured_candidates(split);
  for (const auto& a : cands)
    for (const auto& b : cands) {
      if (&a == &b) continue;
      if (split.algebra->norm(bracket_g(split, a.coords, b.coords)) >= tolerance) continue;
      if (std::abs(a.coords.dot(b.coords)) > 1 - 1e-9) continue;
      try {
        ZeroFlagCertificate c = zero_flag_check(n, a.coords, b.coords, tolerance);
        if (c.passed()) return LabeledCertificate{a.label, b.label, std::move(c)};
      } catch (const NumericalError&) {
      }
    }
  return std::nullopt;
}

std::optional<double> normal_multiple(const LFunction& L) {
  if (L.kind() != LKind::Diagonal) return std::nullopt;
  const auto& c = L.coeffs();
  for (double x : c)
    if (std::abs(x - c[0]) > 1e-15 * c[0]) return std::nullopt;
  return c[0];
}

std::optional<Flag> random_commuting_flag(const ReductiveSplit& split, int mode, std::mt19937_64& rng) {
  std::normal_distribution<double> normal(0.0, 1.0);
  const int dm = split.dim_m();
  Eigen::VectorXd y = Eigen::VectorXd::Zero(dm);
  if (mode == 2) {
    std::vector<Eigen::VectorXd> torus;
    for (std::size_t i = 0; i < split.summands.size(); ++i) {
      const SummandContent c = summand_content(split, i);
      for (Eigen::Index j = 0; j < c.torus.cols(); ++j) torus.push_back(split.m_coords(split.algebra->torus(c.torus.col(j))));
    }
    if (torus.empty()) mode = 1;
    for (const auto& t : torus) y += normal(rng) * t;
  }
  if (mode == 1) {
    const auto& sm = split.summands[std::uniform_int_distribution<std::size_t>(0, split.summands.size() - 1)(rng)];
    for (int k = 0; k < sm.dim; ++k) y(sm.offset + k) = normal(rng);
  } else if (mode == 0) {
    for (int k = 0; k < dm; ++k) y(k) = normal(rng);
  }
  if (y.norm() < 1e-12) return std::nullopt;
  y.normalize();

  Eigen::MatrixXd C(split.algebra->dim(), dm);
  for (int k = 0; k < dm; ++k) C.col(k) = bracket_g(split, y, Eigen::VectorXd::Unit(dm, k));
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(C, Eigen::ComputeFullV);
  const auto& sv = svd.singularValues();
  const double cut = 1e-10 * std::max(1.0, sv.size() ? sv(0) : 0.0);
  Eigen::VectorXd v = Eigen::VectorXd::Zero(dm);
  for (int k = 0; k < dm; ++k) {
    const double sigma = k < sv.size() ? sv(k) : 0.0;
    if (sigma <= cut) v += normal(rng) * svd.matrixV().col(k);
  }
  v -= v.dot(y) * y;
  if (v.norm() < 1e-8) return std::nullopt;
  return Flag{y, v.normalized()};
}

PositivitySummary positivity_sample(const VeryStandardNorm& n, int n_flags, std::mt19937_64& rng, double tolerance) {
  if (n_flags < 1) throw InputError("number of flags must be at least 1");
  const ReductiveSplit& split = n.split();
  PositivitySummary s;
  s.requested = n_flags;
  s.min_K = std::numeric_limits<double>::infinity();
  double total = 0;
  auto record = [&](const Flag& f, double K) {
    ++s.admissible;
    total += K;
    if (K < s.min_K) {
      s.min_K = K;
      s.argmin = f;
    }
  };
  if (auto c = normal_multiple(n.L())) {
    s.normal_oracle = true;
    std::normal_distribution<double> normal(0.0, 1.0);
    const int dm = split.dim_m();
    while (s.admissible < n_flags) {
      ++s.attempts;
      Flag f{Eigen::VectorXd(dm), Eigen::VectorXd(dm)};
      for (int k = 0; k < dm; ++k) f.y(k) = normal(rng), f.v(k) = normal(rng);
      record(f, normal_oracle(split, f) / *c);
    }
  } else {
    const int max_attempts = 50 * n_flags;
    while (s.admissible < n_flags && s.attempts < max_attempts) {
      const int mode = s.attempts % 3;
      ++s.attempts;
      const auto f = random_commuting_flag(split, mode, rng);
      if (!f) continue;
      try {
        record(*f, flag_curvature(n, *f, tolerance).K);
      } catch (const InapplicableFlag&) {
      } catch (const InputError&) {
      } catch (const ConvexityError&) {
        ++s.nonconvex;
      }
    }
  }
  if (s.admissible > 0) {
    s.mean_K = total / s.admissible;
  } else {
    s.min_K = 0;
  }
  return s;
}

// ---------------------------------------------------------------------------

bool CaseReport::matches_expectation() const {
  switch (expected) {
    case Expectation::Obstructed: return verdict == Verdict::Obstructed;
    case Expectation::Positivity: return verdict == Verdict::PositivitySampled;
    case Expectation::None: return true;
  }
  return false;
}

std::uint64_t case_seed(std::uint64_t base, const std::string& case_id) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : case_id) h = (h ^ c) * 0x100000001b3ULL;
  std::uint64_t z = base ^ h;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

CaseReport verify_case(const CaseFixture& fixture, const VerifyOptions& options) {
  if (options.norm_samples < 1) throw InputError("--norms must be at least 1");
  if (options.n_flags < 1) throw InputError("--flags must be at least 1");
  CaseReport report;
  report.case_id = fixture.id;
  report.expected = fixture.expect;
  report.options = options;

  auto g = std::make_shared<const CompactLieAlgebra>(RootSystem(fixture.family, fixture.rank));
  report.convention = convention_text(*g);
  ReductiveSplit computed = reductive_split(g, fixture.subalgebra());
  auto split = std::make_shared<const ReductiveSplit>(fixture.summands.empty() ? computed
                                                                               : align_split(computed, fixture.summands));
  report.dims = split->summand_dims();
  report.expected_dims = fixture.summands.empty() ? report.dims : fixture.expected_dims(*g);
  if (report.dims != report.expected_dims) throw FixtureIntegrityError(fixture.id + ": summand dimensions differ");
  for (std::size_t i = 0; i < split->summands.size(); ++i)
    report.summand_contents.push_back(summand_content(*split, i).str(g->roots()));
  report.invariance_residual = invariance_residual(*split);
  report.commutant_offdiagonal = commutant_offdiagonal(*split);
  if (report.commutant_offdiagonal > 1e-8)
    throw FixtureIntegrityError(fixture.id + ": summands carry equivalent representations");
  if (fixture.odd_dimensional(*g)) report.rank_gap = rank_gap(*split);
  if (split->summands.back().dim == 1) {
    try {
      report.central_line = check_central_line(*split);
    } catch (const InputError&) {
      // last summand does not centralize h
    }
  }

  std::mt19937_64 rng(case_seed(options.seed, fixture.id));
  const auto Ls = sample_norms(split, fixture.shape, options.norm_samples, rng);

  bool all_obstructed = true, any_flag = false, all_positive = true, hessian_ok = true;
  for (const auto& L : Ls) {
    const VeryStandardNorm n(split, L);
    NormOutcome out;
    out.norm_text = L.to_text();
    out.min_eigenvalue = min_tensor_eigenvalue(n, rng);
    std::normal_distribution<double> normal(0.0, 1.0);
    for (int k = 0; k < 3; ++k) {
      Eigen::VectorXd y(split->dim_m());
      for (Eigen::Index i = 0; i < y.size(); ++i) y(i) = normal(rng);
      const Eigen::MatrixXd G = fundamental_tensor(n, y);
      out.hessian_error = std::max(out.hessian_error, (G - fd_hessian_oracle(n, y)).norm() / G.norm());
    }
    hessian_ok = hessian_ok && out.hessian_error < options.tolerance_hessian;

    if (fixture.pair) {
      const Eigen::VectorXd u = split->m_coords(item_vector(*g, fixture.pair->first));
      const Eigen::VectorXd v = split->m_coords(item_vector(*g, fixture.pair->second));
      try {
        out.named = LabeledCertificate{fixture.pair->first.str(), fixture.pair->second.str(),
                                       zero_flag_check(n, u, v, options.tolerance_zero)};
      } catch (const NumericalError&) {
      }
    }
    out.search = find_commuting_zero_pair(n, options.tolerance_zero);
    const bool obstructed = fixture.pair ? (out.named && out.named->certificate.passed()) : out.search.has_value();
    all_obstructed = all_obstructed && obstructed;
    if (!obstructed && fixture.expect != Expectation::Obstructed) {
      out.positivity = positivity_sample(n, options.n_flags, rng, options.tolerance_zero);
      if (out.positivity->admissible > 0) {
        any_flag = true;
        all_positive = all_positive && out.positivity->min_K > options.tolerance_zero;
      }
      if (out.positivity->nonconvex > 0) all_positive = false;
    }
    if (out.search && fixture.expect == Expectation::Positivity) all_positive = false;
    report.norms.push_back(std::move(out));
  }

  if (!hessian_ok) report.verdict = Verdict::Inconclusive;
  else if (all_obstructed) report.verdict = Verdict::Obstructed;
  else if (any_flag && all_positive) report.verdict = Verdict::PositivitySampled;
  else report.verdict = Verdict::Inconclusive;
  return report;
}

}  // namespace homfinsler
