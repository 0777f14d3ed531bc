#pragma once

#include <Eigen/Dense>

#include <functional>
#include <optional>
#include <variant>
#include <vector>

#include "pfreq/background.hpp"
#include "pfreq/quadrature.hpp"

namespace pfreq {

/// One spectral coefficient a_j(t) of v(y, t) = sum_j a_j(t) phi_j(y).
struct Term {
  Mode mode;
  double amplitude = 0.0;
};

/// A solution snapshot at time t < 0, stored as a finite mode sum in the
/// self-similar frame. Terms are kept sorted by mode order and unique; terms
/// with zero amplitude are allowed (they reserve a slot for coupled modes).
class CoefficientField {
 public:
  CoefficientField(Background bg, double time, std::vector<Term> terms = {});

  /// Field from (multi-index, amplitude) pairs.
  static CoefficientField from_indices(const Background& bg, double time,
                                       const std::vector<std::pair<std::vector<int>, double>>& entries);

  const Background& background() const { return bg_; }
  double time() const { return time_; }
  const std::vector<Term>& terms() const { return terms_; }
  bool is_zero() const;

  Eigen::VectorXd amplitudes() const;
  CoefficientField with_amplitudes(double time, const Eigen::VectorXd& a) const;

 private:
  Background bg_;
  double time_;
  std::vector<Term> terms_;
};

/// Sample times a = t_0 < ... < t_{N-1} = b < 0.
class TimeGrid {
 public:
  explicit TimeGrid(std::vector<double> nodes);
  static TimeGrid uniform(double a, double b, int count);

  double a() const { return nodes_.front(); }
  double b() const { return nodes_.back(); }
  const std::vector<double>& nodes() const { return nodes_; }
  std::size_t size() const { return nodes_.size(); }

 private:
  std::vector<double> nodes_;
};

/// Nonnegative coefficient C(t): a constant or a piecewise-linear profile.
class CProfile {
 public:
  static CProfile constant(double c);
  static CProfile piecewise_linear(std::vector<double> times, std::vector<double> values);

  double operator()(double t) const;
  /// Exact integral of C over [a, b].
  double integral(double a, double b) const;
  /// Exact integral of C^2 over [a, b].
  double integral_sq(double a, double b) const;
  /// Breakpoints strictly inside (a, b).
  std::vector<double> breakpoints(double a, double b) const;

  bool is_constant() const { return times_.empty(); }
  double constant_value() const { return constant_; }
  const std::vector<double>& times() const { return times_; }
  const std::vector<double>& values() const { return values_; }

 private:
  double constant_ = 0.0;
  std::vector<double> times_;
  std::vector<double> values_;
};

/// f = C(t) u.
struct ScalarOnU {};
/// f = C(t) sum_j (W a)_j phi_j, with W indexed by the field's term order.
struct ModeMatrix {
  Eigen::MatrixXd weights;
};

/// A perturbation (d_t - Laplacian) u = f realized in the spectral basis.
struct Forcing {
  CProfile c_profile;
  std::variant<ScalarOnU, ModeMatrix> coupling;

  /// Throws std::invalid_argument if C < 0 somewhere on [a, b], the profile
  /// does not cover [a, b], or the integral of C^2 is not finite.
  void validate(double a, double b, std::size_t num_terms) const;
};

enum class EvolutionMethod { Exact, SteppedRK4 };

struct Trajectory {
  TimeGrid grid;
  std::vector<CoefficientField> fields;
  EvolutionMethod method = EvolutionMethod::Exact;
  std::optional<Forcing> forcing;

  const Background& background() const { return fields.front().background(); }
};

struct StepperOptions {
  double local_tolerance = 1e-8;
  /// Grids ending above this time are refused (stiffness of 1 / (-t)).
  double latest_time = -1e-3;
  int max_substeps = 1 << 16;
};

/// a_j(t) = a_j(t_0) ((-t) / (-t_0))^{mu_j}; valid forward and backward in time.
CoefficientField evolve_exact(const CoefficientField& field, double t_target);

/// Exact evolution sampled on every grid node.
Trajectory evolve_exact(const CoefficientField& field, const TimeGrid& grid);

/// Classical RK4 on da/dt = -mu / (-t) a + C(t) (coupling) a, forward only,
/// with step doubling per grid interval until the local tolerance is met.
/// Throws EvolutionError when the substep limit is exceeded.
Trajectory evolve_forced(const CoefficientField& field, const TimeGrid& grid, const Forcing& forcing,
                         const StepperOptions& options = {});

/// L^2(d mu_{-1}) projection of a unit-scale function onto the given modes.
CoefficientField project(const Background& bg, double time, const std::vector<Mode>& modes,
                         const QuadratureRule& rule, const std::function<double(const Eigen::VectorXd&)>& v);

/// Value of the field's function v(y, t) at a unit-scale point.
double evaluate_field(const CoefficientField& field, const Eigen::VectorXd& point);

/// min over quadrature points of C(t)(|grad u| + |u|) - |f| at the field's
/// time; nonnegative certifies the perturbation hypothesis for the snapshot.
double forcing_bound_margin(const CoefficientField& field, const Forcing& forcing, const QuadratureRule& rule);

}  // namespace pfreq
