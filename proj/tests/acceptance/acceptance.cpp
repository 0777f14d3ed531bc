// Acceptance suite: one PASS/FAIL line per criterion.
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <limits>
#include <sstream>
#include <string>
#include <vector>

#include "pfreq/report_io.hpp"
#include "pfreq/scenario.hpp"
#include "pfreq/verifiers.hpp"

using namespace pfreq;

namespace {

struct Outcome {
  bool ok = true;
  std::string detail;

  void require(bool cond, const std::string& what) {
    if (!cond && ok) detail = what;
    ok = ok && cond;
  }
};

std::vector<std::vector<int>> plane_indices(int n, int max_degree) {
  std::vector<std::vector<int>> out;
  for (const auto& m : enumerate_modes(Background::plane(n), 0.5 * max_degree)) out.push_back(m.index);
  return out;
}

int degree(const std::vector<int>& idx) {
  int d = 0;
  for (int k : idx) d += k;
  return d;
}

Trajectory pure_run(const Background& bg, const std::vector<int>& idx, const TimeGrid& grid) {
  return evolve_exact(CoefficientField::from_indices(bg, grid.a(), {{idx, 1.0}}), grid);
}

const std::vector<Background> kMixtureBackgrounds = {Background::plane(1), Background::sphere(2),
                                                     Background::cylinder(1, 1)};

CoefficientField mixture(const Background& bg, std::uint64_t seed) {
  const int terms = 2 + static_cast<int>(seed % 4);
  return CoefficientField::from_indices(bg, -1.0, random_mixture_entries(bg, {3.0, terms}, 1000 + seed));
}

std::string fmt_sci(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2e", x);
  return buf;
}

// ------------------------------------------------------------------ criteria

Outcome caloric_polynomials() {
  Outcome o;
  const TimeGrid grid = TimeGrid::uniform(-1.0, -0.1, 50);
  double worst = 0.0;
  int runs = 0;
  for (int n : {1, 2})
    for (const auto& idx : plane_indices(n, 5)) {
      for (const auto& row : frequency_trace(pure_run(Background::plane(n), idx, grid), 0.0))
        worst = std::max(worst, std::abs(row.U + degree(idx)));
      ++runs;
    }
  o.require(worst < 1e-10, "max |U + k| too large");
  o.detail = "runs=" + std::to_string(runs) + " max|U+k|=" + fmt_sci(worst) + (o.ok ? "" : " " + o.detail);
  return o;
}

Outcome sphere_golden_values() {
  Outcome o;
  double worst_c = 0.0, worst_u = 0.0;
  for (int n : {1, 2, 5, 10})
    for (int k = 0; k <= 4; ++k) {
      const Background bg = Background::sphere(n);
      const CoefficientField f = CoefficientField::from_indices(bg, -1.0, {{{k, 0}, 1.0}});
      const double c_fit = compute_D(f) / (2.0 * compute_I(f));
      const double golden_c = -(k * k + (n - 1.0) * k) / (2.0 * n);
      const double golden_u = -(k * k + (n - 1.0) * k) / n;
      worst_c = std::max(worst_c, std::abs(c_fit - golden_c));
      worst_u = std::max(worst_u, std::abs(compute_U(f, kappa(bg)) - golden_u));
    }
  o.require(worst_c < 1e-12 && worst_u < 1e-12, "golden mismatch");
  char buf[128];
  std::snprintf(buf, sizeof buf, "max|c-c*|=%.2e max|U-U*|=%.2e", worst_c, worst_u);
  o.detail = buf;
  return o;
}

Outcome frequency_monotonicity() {
  Outcome o;
  const TimeGrid grid = TimeGrid::uniform(-1.0, -0.1, 50);
  double worst_margin = std::numeric_limits<double>::infinity(), worst_oracle = 0.0;
  int runs = 0;
  for (const auto& bg : kMixtureBackgrounds)
    for (std::uint64_t seed = 0; seed < 200; ++seed) {
      const CoefficientField f0 = mixture(bg, seed);
      const Trajectory traj = evolve_exact(f0, grid);
      const double kap = kappa(bg);
      const FrequencyTrace tr = frequency_trace(traj, kap);
      for (std::size_t i = 1; i < tr.size(); ++i) {
        const double scaled = (tr[i].U - tr[i - 1].U) / std::max(std::abs(tr[i].U), std::abs(tr[i - 1].U));
        worst_margin = std::min(worst_margin, scaled);
        o.require(tr[i].U - tr[i - 1].U >= -1e-9 * std::max(std::abs(tr[i].U), std::abs(tr[i - 1].U)),
                  "negative margin");
      }
      o.require(verify_frequency_monotonicity(traj, kap).passed, "verifier failed");
      for (const auto& row : tr) {
        double num = 0.0, den = 0.0;
        for (const auto& term : f0.terms()) {
          const double w = term.amplitude * term.amplitude * std::pow(-row.t, 2.0 * term.mode.mu);
          num += term.mode.mu * w;
          den += w;
        }
        worst_oracle = std::max(worst_oracle, std::abs(row.N_raw - (-2.0 * num / den)));
      }
      ++runs;
    }
  o.require(worst_oracle < 1e-10, "N_raw oracle mismatch");
  char buf[160];
  std::snprintf(buf, sizeof buf, "runs=%d min relative margin=%.3e max|N_raw-oracle|=%.2e", runs, worst_margin,
                worst_oracle);
  o.detail = std::string(buf) + (o.ok ? "" : " " + o.detail);
  return o;
}

Outcome equality_case() {
  Outcome o;
  const TimeGrid grid = TimeGrid::uniform(-1.0, -0.1, 50);
  double worst_pure = 0.0, min_mix = std::numeric_limits<double>::infinity();
  std::vector<std::pair<Background, std::vector<int>>> pures;
  for (const auto& idx : plane_indices(2, 5)) pures.push_back({Background::plane(2), idx});
  for (const auto& m : enumerate_modes(Background::sphere(2), 3.0)) pures.push_back({Background::sphere(2), m.index});
  for (const auto& m : enumerate_modes(Background::cylinder(1, 1), 2.0)) pures.push_back({Background::cylinder(1, 1), m.index});
  for (const auto& [bg, idx] : pures)
    for (const auto& row : frequency_trace(pure_run(bg, idx, grid), kappa(bg)))
      worst_pure = std::max(worst_pure, row.cs_defect / (row.I * row.I));
  // A random draw inside a single eigenspace is itself an eigenfunction.
  int mixtures = 0, eigen_draws = 0;
  for (const auto& bg : kMixtureBackgrounds)
    for (std::uint64_t seed = 0; seed < 200; ++seed) {
      const CoefficientField f = mixture(bg, seed);
      bool single_mu = true;
      for (const auto& term : f.terms()) single_mu = single_mu && term.mode.mu == f.terms().front().mode.mu;
      (single_mu ? eigen_draws : mixtures) += 1;
      for (const auto& row : frequency_trace(evolve_exact(f, grid), kappa(bg))) {
        const double rel = row.cs_defect / (row.I * row.I);
        if (single_mu)
          worst_pure = std::max(worst_pure, rel);
        else
          min_mix = std::min(min_mix, rel);
      }
    }
  o.require(worst_pure < 1e-12, "pure-mode defect");
  o.require(min_mix > 0.0, "mixture defect not positive");
  char buf[192];
  std::snprintf(buf, sizeof buf, "pure runs=%zu (+%d single-eigenspace draws) max defect/I^2=%.2e; mixtures=%d min defect/I^2=%.3e",
                pures.size(), eigen_draws, worst_pure, mixtures, min_mix);
  o.detail = buf;
  return o;
}

Outcome harnack() {
  Outcome o;
  const Trajectory s = pure_run(Background::sphere(2), {1, 1}, TimeGrid({-1.0, -0.75, -0.5}));
  const DualReport sr = verify_harnack(s, 0.5);
  const double margin = sr.primary.nodes.back().value;
  o.require(std::abs(margin - (1.0 - std::log(2.0))) < 1e-6, "sphere log-margin");
  o.require(sr.primary.passed, "sphere report");

  const TimeGrid grid = TimeGrid::uniform(-1.0, -0.1, 50);
  double worst_eq = 0.0, printed_min = std::numeric_limits<double>::infinity();
  for (int n : {1, 2})
    for (const auto& idx : plane_indices(n, 5)) {
      const DualReport r = verify_harnack(pure_run(Background::plane(n), idx, grid), 0.0);
      for (const auto& node : r.primary.nodes) worst_eq = std::max(worst_eq, std::abs(node.value));
      printed_min = std::min(printed_min, r.verbatim->min_margin);
    }
  o.require(worst_eq < 1e-10, "plane equality");
  char buf[200];
  std::snprintf(buf, sizeof buf,
                "sphere log-margin=%.10f (1-ln2=%.10f) plane max|margin|=%.2e printed kappa=0 min margin=%.4f "
                "(report-only)",
                margin, 1.0 - std::log(2.0), worst_eq, printed_min);
  o.detail = buf;
  return o;
}

Outcome weighted_monotonicity() {
  Outcome o;
  std::string detail;
  const double a = -1.0, length = 0.005;
  for (const auto& bg : {Background::plane(1), Background::sphere(2)}) {
    const QuadratureRule rule = quadrature(bg, 32);
    double finest_residual = 0.0, min_order = std::numeric_limits<double>::infinity();
    for (const auto& tf : packaged_test_functions(bg)) {
      std::vector<double> hs, errs;
      for (int level = 0; level < 6; ++level) {
        const int intervals = 10 << level;
        const TimeGrid grid = TimeGrid::uniform(a, a + length, intervals + 1);
        const VerificationReport r = verify_weighted_monotonicity(bg, tf, grid, rule);
        hs.push_back(length / intervals);
        errs.push_back(-r.nodes[intervals / 2 - 1].value);  // residual at the fixed midpoint time
        if (level == 5) finest_residual = std::max(finest_residual, -r.min_margin);
      }
      // Observed order only where truncation error dominates rounding.
      if (errs.front() > 1e-6) {
        double sx = 0, sy = 0, sxx = 0, sxy = 0;
        const double m = static_cast<double>(hs.size());
        for (std::size_t i = 0; i < hs.size(); ++i) {
          const double x = std::log(hs[i]), y = std::log(errs[i]);
          sx += x, sy += y, sxx += x * x, sxy += x * y;
        }
        min_order = std::min(min_order, (m * sxy - sx * sy) / (m * sxx - sx * sx));
      }
    }
    o.require(finest_residual < 1e-7, bg.name() + " residual");
    o.require(min_order >= 1.8, bg.name() + " order");
    char buf[160];
    std::snprintf(buf, sizeof buf, "%s max residual=%.2e order=%.3f; ", bg.name().c_str(), finest_residual, min_order);
    detail += buf;
  }
  o.detail = detail + (o.ok ? "" : o.detail);
  return o;
}

Outcome drift_bochner() {
  Outcome o;
  double worst_b = 0.0, worst_gap = 0.0;
  int checked = 0;
  for (const auto& bg : {Background::plane(1), Background::plane(2), Background::sphere(2)}) {
    const QuadratureRule rule = quadrature(bg, 32);
    for (const auto& m : enumerate_modes(bg, 3.0))
      for (double t : {-1.0, -0.5, -0.1}) {
        const CoefficientField f(bg, t, {{m, 1.0}});
        const BochnerTerms bt = drift_bochner_terms(f, rule);
        worst_b = std::max(worst_b, std::abs(bt.residual_corrected()));
        if (bg.is_sphere()) worst_gap = std::max(worst_gap, std::abs(bt.residual_verbatim() - bt.half_gradient_energy));
        ++checked;
      }
  }
  o.require(worst_b < 1e-8, "variant B residual");
  o.require(worst_gap < 1e-8, "variant A gap");
  char buf[160];
  std::snprintf(buf, sizeof buf, "cases=%d max|B|=%.2e sphere max|A - int|grad u|^2/(2(-t))|=%.2e", checked, worst_b,
                worst_gap);
  o.detail = buf;
  return o;
}

Outcome general_bounds() {
  Outcome o;
  const TimeGrid fine = TimeGrid::uniform(-1.0, -0.2, 10001);
  double worst = std::numeric_limits<double>::infinity();
  for (const auto& [bg, idx] : std::vector<std::pair<Background, std::vector<int>>>{
           {Background::plane(1), {1}}, {Background::plane(1), {2}}, {Background::plane(1), {3}},
           {Background::plane(2), {1, 1}}, {Background::sphere(2), {1, 0}}, {Background::sphere(2), {2, 3}}}) {
    const QuadratureRule rule = quadrature(bg, 16);
    for (double c0 : {0.0, 0.1, 1.0}) {
      const CoefficientField f = CoefficientField::from_indices(bg, fine.a(), {{idx, 1.0}});
      const Trajectory traj = evolve_forced(f, fine, Forcing{CProfile::constant(c0), ScalarOnU{}});
      const VerificationReport r = verify_general_bounds(traj, kappa(bg), rule);
      o.require(r.verdict != Verdict::Inapplicable, "forcing not certified");
      worst = std::min(worst, r.min_margin);
    }
  }
  o.require(worst >= -1e-6, "bound margin below -1e-6");

  double worst_rel = 0.0;
  const TimeGrid grid = TimeGrid::uniform(-1.0, -0.01, 60);
  for (const auto& bg : kMixtureBackgrounds)
    for (std::uint64_t seed = 0; seed < 10; ++seed) {
      const CoefficientField f = mixture(bg, seed);
      const Trajectory rk = evolve_forced(f, grid, Forcing{CProfile::constant(0.0), ScalarOnU{}});
      const Trajectory ex = evolve_exact(f, grid);
      for (std::size_t i = 0; i < grid.size(); ++i)
        worst_rel = std::max(worst_rel, (rk.fields[i].amplitudes() - ex.fields[i].amplitudes()).norm() /
                                            ex.fields[i].amplitudes().norm());
    }
  o.require(worst_rel < 1e-6, "RK4 vs exact");
  char buf[160];
  std::snprintf(buf, sizeof buf, "min margin=%.3e RK4(C=0) vs exact max rel=%.2e", worst, worst_rel);
  o.detail = std::string(buf) + (o.ok ? "" : " " + o.detail);
  return o;
}

Outcome eigenvalue_monotonicity() {
  Outcome o;
  const TimeGrid grid = TimeGrid::uniform(-1.0, -0.01, 200);
  for (const auto& bg : {Background::plane(1), Background::sphere(2), Background::cylinder(1, 1)})
    o.require(verify_eigenvalue_monotonicity(bg, grid, kappa(bg)).passed, bg.name());
  double worst = 0.0;
  for (double t : grid.nodes()) worst = std::max(worst, std::abs((-t) * lambda1(Background::plane(1), t) - 0.5));
  o.require(worst <= 1e-12, "plane constant");
  char buf[96];
  std::snprintf(buf, sizeof buf, "3 backgrounds nonincreasing; plane max|(-t)lambda1 - 1/2|=%.2e", worst);
  o.detail = std::string(buf) + (o.ok ? "" : " " + o.detail);
  return o;
}

Outcome backward_uniqueness() {
  Outcome o;
  const TimeGrid grid = TimeGrid::uniform(-1.0, -0.1, 50);
  int runs = 0;
  double min_log_ib = std::numeric_limits<double>::infinity();
  for (const auto& bg : {Background::plane(1), Background::plane(2), Background::sphere(2), Background::sphere(5)})
    for (const auto& m : enumerate_modes(bg, 2.5)) {
      const Trajectory traj = pure_run(bg, m.index, grid);
      const double ib = compute_I(traj.fields.back());
      o.require(ib > 0.0 && std::isfinite(std::log(ib)), "I(b) vanished");
      const double bound = general_harnack_exponent(grid.a(), grid.b(), compute_U(traj.fields.front(), kappa(bg)),
                                                    kappa(bg), CProfile::constant(0.0));
      o.require(std::isfinite(bound), "non-finite Harnack bound");
      o.require(std::log(ib) - std::log(compute_I(traj.fields.front())) >= bound - 1e-9, "Harnack bound violated");
      min_log_ib = std::min(min_log_ib, std::log(ib));
      ++runs;
    }
  const Trajectory zero = evolve_exact(CoefficientField(Background::plane(1), -1.0), grid);
  bool all_zero = true;
  for (const auto& f : zero.fields) all_zero = all_zero && compute_I(f) == 0.0;
  o.require(all_zero, "zero data not identically zero");
  o.require(verify_general_harnack(zero, 0.0, QuadratureRule{}).passed, "zero-data degenerate branch");
  char buf[128];
  std::snprintf(buf, sizeof buf, "pure runs=%d min log I(b)=%.3f; zero data I==0 at %zu nodes", runs, min_log_ib,
                zero.fields.size());
  o.detail = std::string(buf) + (o.ok ? "" : " " + o.detail);
  return o;
}

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

Outcome determinism() {
  Outcome o;
  const auto base = std::filesystem::temp_directory_path() / "pfreq_acceptance_suite";
  std::filesystem::remove_all(base);
  const auto configs = packaged_configs();
  const SuiteResult a = run_suite(configs, base / "a", std::nullopt, nullptr);
  const SuiteResult b = run_suite(configs, base / "b", std::nullopt, nullptr);
  o.require(a.exit_code == 0 && b.exit_code == 0, "paper-suite exit code " + std::to_string(a.exit_code));
  int files = 0;
  for (const auto& e : std::filesystem::directory_iterator(base / "a")) {
    const auto other = base / "b" / e.path().filename();
    o.require(std::filesystem::exists(other) && slurp(e.path()) == slurp(other),
              "differs: " + e.path().filename().string());
    ++files;
  }
  int report_only_failures = 0;
  for (const auto& out : a.outputs)
    for (const auto& r : out.reports) {
      if (r.verdict != Verdict::Fail) continue;
      o.require(r.report_only && (r.check_name == "harnack_printed" || r.check_name == "drift_bochner_verbatim"),
                "unexpected failure " + r.scenario_id + "/" + r.check_name);
      ++report_only_failures;
    }
  std::filesystem::remove_all(base);
  char buf[128];
  std::snprintf(buf, sizeof buf, "scenarios=%zu files=%d identical; exit=%d; report-only failures=%d",
                a.outputs.size(), files, a.exit_code, report_only_failures);
  o.detail = std::string(buf) + (o.ok ? "" : " " + o.detail);
  return o;
}

}  // namespace

int main() {
  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria = {
      {"1  caloric polynomial frequency", caloric_polynomials},
      {"2  sphere spectrum golden values", sphere_golden_values},
      {"3  frequency monotonicity", frequency_monotonicity},
      {"4  equality case", equality_case},
      {"5  Harnack bounds", harnack},
      {"6  weighted monotonicity", weighted_monotonicity},
      {"7  drift Bochner", drift_bochner},
      {"8  general bounds", general_bounds},
      {"9  eigenvalue monotonicity", eigenvalue_monotonicity},
      {"10 backward uniqueness", backward_uniqueness},
      {"11 determinism", determinism},
  };
  int failures = 0;
  for (const auto& [name, fn] : criteria) {
    Outcome o;
    try {
      o = fn();
    } catch (const std::exception& e) {
      o.ok = false;
      o.detail = std::string("exception: ") + e.what();
    }
    std::printf("[%s] %-34s %s\n", o.ok ? "PASS" : "FAIL", name.c_str(), o.detail.c_str());
    std::fflush(stdout);
    failures += o.ok ? 0 : 1;
  }
  std::printf("%d of %zu criteria passed\n", static_cast<int>(criteria.size()) - failures, criteria.size());
  return failures == 0 ? 0 : 1;
}
