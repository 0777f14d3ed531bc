#pragma once

#include <optional>
#include <string>
#include <vector>

#include "pfreq/evolution.hpp"
#include "pfreq/frequency.hpp"
#include "pfreq/polynomial.hpp"
#include "pfreq/quadrature.hpp"

namespace pfreq {

enum class Verdict { Pass, Fail, Inapplicable };

const char* to_string(Verdict v);
Verdict verdict_from_string(const std::string& s);

struct NodeMargin {
  double t = 0.0;
  double value = 0.0;  ///< signed slack; residual checks store -|residual|

  bool operator==(const NodeMargin&) const = default;
};

/// Outcome of one numeric check. passed <=> min_margin >= -tolerance, and an
/// inapplicable report is never counted as a failure.
struct VerificationReport {
  std::string check_name;
  std::string background;
  std::string scenario_id;
  std::vector<NodeMargin> nodes;
  double min_margin = 0.0;
  double tolerance = 0.0;
  Verdict verdict = Verdict::Inapplicable;
  bool passed = false;
  bool report_only = false;
  std::string notes;

  bool operator==(const VerificationReport&) const;
};

/// Fills min_margin, passed and verdict from nodes and tolerance.
void finalize(VerificationReport& report);
VerificationReport inapplicable(std::string check_name, const Background& bg, std::string why);

/// Concatenates and sorts by (scenario_id, check_name); associative and
/// independent of argument order.
std::vector<VerificationReport> merge_reports(std::vector<VerificationReport> a, std::vector<VerificationReport> b);

/// A check with a derivation-consistent form (primary) and, where the printed
/// statement differs, the verbatim form reported alongside it.
struct DualReport {
  VerificationReport primary;
  std::optional<VerificationReport> verbatim;
};

// ---------------------------------------------------------------- heat flow

/// Consecutive-node margins U(t_{i+1}) - U(t_i), tolerance rel_tol * max |U|.
/// The centered-difference derivative is checked as well and reported in notes.
VerificationReport verify_frequency_monotonicity(const Trajectory& traj, double kappa, double rel_tol = 1e-9);

/// Wherever U is flat across a node pair, the Cauchy-Schwarz defect must
/// vanish (relative to I^2) and D / (2I) must match U / (2 (-t)^{1+2 kappa}).
VerificationReport verify_equality_case(const Trajectory& traj, double kappa, double tol = 1e-12);

/// Harnack lower bound for I with a = first node and b = each later node, in
/// log space. For kappa = 0 the primary report uses the bound obtained by
/// integrating (log I)' = U / (-t); the verbatim report uses the printed form
/// I(b) >= I(a) e^{-U(a)} (b / a).
DualReport verify_harnack(const Trajectory& traj, double kappa, double tol = 1e-10);

/// Packaged ambient polynomial test function.
struct TestFunction {
  std::string name;
  Polynomial f;
};

/// Test functions shipped for a background: 1, |x|^2, x_i^2, x_i^4, x_i^6
/// with i the last ambient axis.
std::vector<TestFunction> packaged_test_functions(const Background& bg);

/// d/dt int f d mu_t (centered differences of quadrature integrals) against
/// int ((d_t - Laplacian) f - |H - x_perp / 2t|^2 f) d mu_t at interior nodes.
VerificationReport verify_weighted_monotonicity(const Background& bg, const TestFunction& test, const TimeGrid& grid,
                                                const QuadratureRule& rule, double tol = 1e-7);

/// Both sides of the integrated drift Bochner identity at one time slice.
struct BochnerTerms {
  double t = 0.0;
  double hessian_ricci = 0.0;         ///< int |Hess u|^2 + Ric(grad u, grad u)
  double drift_minus_gradient = 0.0;  ///< int (L_t u)^2 - |grad u|^2 / (-2t)
  double curvature_pairing = 0.0;     ///< int <H, A(grad u, grad u)>
  double half_gradient_energy = 0.0;  ///< int |grad u|^2 / (2 (-t))
  double residual_verbatim() const { return hessian_ricci - drift_minus_gradient; }
  double residual_corrected() const { return hessian_ricci - drift_minus_gradient - curvature_pairing; }
};

BochnerTerms drift_bochner_terms(const CoefficientField& field, const QuadratureRule& rule);

/// primary = identity with the <H, A(grad u, grad u)> term from the intrinsic
/// Hessian of |x|^2; verbatim = identity as printed, without it.
DualReport verify_drift_bochner(const CoefficientField& field, const QuadratureRule& rule, double tol = 1e-8);
DualReport verify_drift_bochner(const Trajectory& traj, const QuadratureRule& rule, double tol = 1e-8);

/// Eigenvalue consequence of frequency monotonicity: (-t)^{1+2 kappa} lambda_1(t) nonincreasing.
VerificationReport verify_eigenvalue_monotonicity(const Background& bg, const TimeGrid& grid, double kappa,
                                                  double tol = 1e-12);

/// For constant-frequency heat trajectories, sup over quadrature nodes of
/// |v(y, t) - (-t)^{-U/2} v(y, -1)| with U the kappa-free frequency -2 mu.
VerificationReport verify_selfsimilar_scaling(const Trajectory& traj, const QuadratureRule& rule,
                                              double rel_tol = 1e-10);

/// Coefficient path against quadrature path for I and D at every node.
VerificationReport verify_mass_consistency(const Trajectory& traj, const QuadratureRule& rule, double tol = 1e-8);

// ---------------------------------------------------------------- perturbed flow

/// Margins of (log I)' >= (1 + C/2)(-t)^{-1-2 kappa} U - 3C and
/// U' >= C^2 (U - 2(-t)^{1+2 kappa}) at interior nodes via centered
/// differences. The forcing hypothesis is certified at every node first.
VerificationReport verify_general_bounds(const Trajectory& traj, double kappa, const QuadratureRule& rule,
                                         double tol = 1e-6);

/// The explicit exponential lower bound on I(b) built from U(a), kappa and
/// integrals of C and C^2, in log space.
VerificationReport verify_general_harnack(const Trajectory& traj, double kappa, const QuadratureRule& rule,
                                          double tol = 1e-9);

/// Signed lower-bound exponent of the general Harnack inequality,
/// log I(b) - log I(a) >= general_harnack_exponent(...).
double general_harnack_exponent(double a, double b, double U_a, double kappa, const CProfile& c);

// ---------------------------------------------------------------- helpers

/// Three-point derivative at interior nodes (index 1 .. n-2), valid on
/// nonuniform grids.
std::vector<double> centered_derivative(const std::vector<double>& t, const std::vector<double>& f);

/// max h^2 * |f'''| estimated from third divided differences; the scale of
/// the centered-difference truncation error.
double centered_difference_error_scale(const std::vector<double>& t, const std::vector<double>& f);

}  // namespace pfreq
