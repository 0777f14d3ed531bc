#include "pfreq/evolution.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

#include "pfreq/eigenfunctions.hpp"
#include "pfreq/error.hpp"
#include "pfreq/geometry.hpp"

namespace pfreq {

namespace {

void require_negative_time(double t, const char* what) {
  if (!(t < 0.0) || !std::isfinite(t)) throw std::invalid_argument(std::string(what) + " must be a finite time < 0");
}

}  // namespace

// ---------------------------------------------------------------- field

CoefficientField::CoefficientField(Background bg, double time, std::vector<Term> terms)
    : bg_(std::move(bg)), time_(time), terms_(std::move(terms)) {
  require_negative_time(time_, "field time");
  for (auto& t : terms_) {
    if (!std::isfinite(t.amplitude)) throw std::invalid_argument("field amplitudes must be finite");
    t.mode = make_mode(bg_, t.mode.index);
  }
  std::sort(terms_.begin(), terms_.end(),
            [&](const Term& a, const Term& b) { return mode_less(bg_, a.mode, b.mode); });
  for (std::size_t i = 1; i < terms_.size(); ++i)
    if (terms_[i].mode == terms_[i - 1].mode) throw std::invalid_argument("duplicate mode in coefficient field");
}

CoefficientField CoefficientField::from_indices(const Background& bg, double time,
                                                const std::vector<std::pair<std::vector<int>, double>>& entries) {
  std::vector<Term> terms;
  terms.reserve(entries.size());
  for (const auto& [idx, amp] : entries) terms.push_back(Term{make_mode(bg, idx), amp});
  return CoefficientField(bg, time, std::move(terms));
}

bool CoefficientField::is_zero() const {
  return std::all_of(terms_.begin(), terms_.end(), [](const Term& t) { return t.amplitude == 0.0; });
}

Eigen::VectorXd CoefficientField::amplitudes() const {
  Eigen::VectorXd a(static_cast<Eigen::Index>(terms_.size()));
  for (std::size_t i = 0; i < terms_.size(); ++i) a[static_cast<Eigen::Index>(i)] = terms_[i].amplitude;
  return a;
}

CoefficientField CoefficientField::with_amplitudes(double time, const Eigen::VectorXd& a) const {
  if (static_cast<std::size_t>(a.size()) != terms_.size())
    throw std::invalid_argument("amplitude vector does not match field terms");
  CoefficientField out = *this;
  require_negative_time(time, "field time");
  out.time_ = time;
  for (std::size_t i = 0; i < terms_.size(); ++i) out.terms_[i].amplitude = a[static_cast<Eigen::Index>(i)];
  return out;
}

// ---------------------------------------------------------------- grid

TimeGrid::TimeGrid(std::vector<double> nodes) : nodes_(std::move(nodes)) {
  if (nodes_.size() < 2) throw std::invalid_argument("time grid needs at least two nodes");
  for (std::size_t i = 1; i < nodes_.size(); ++i)
    if (!(nodes_[i] > nodes_[i - 1])) throw std::invalid_argument("time grid nodes must be strictly increasing");
  require_negative_time(nodes_.back(), "time grid end b");
  if (!std::isfinite(nodes_.front())) throw std::invalid_argument("time grid start must be finite");
}

TimeGrid TimeGrid::uniform(double a, double b, int count) {
  if (count < 2) throw std::invalid_argument("time grid needs at least two nodes");
  if (!(a < b)) throw std::invalid_argument("time grid requires a < b");
  std::vector<double> nodes(static_cast<std::size_t>(count));
  for (int i = 0; i < count; ++i) nodes[static_cast<std::size_t>(i)] = a + (b - a) * i / (count - 1);
  nodes.back() = b;
  return TimeGrid(std::move(nodes));
}

// ---------------------------------------------------------------- forcing

CProfile CProfile::constant(double c) {
  if (!(c >= 0.0) || !std::isfinite(c)) throw std::invalid_argument("C(t) must be finite and >= 0");
  CProfile p;
  p.constant_ = c;
  return p;
}

CProfile CProfile::piecewise_linear(std::vector<double> times, std::vector<double> values) {
  if (times.size() < 2 || times.size() != values.size())
    throw std::invalid_argument("piecewise-linear C(t) needs matching samples, at least two");
  for (std::size_t i = 0; i < times.size(); ++i) {
    if (!std::isfinite(times[i]) || !std::isfinite(values[i])) throw std::invalid_argument("C(t) samples must be finite");
    if (values[i] < 0.0) throw std::invalid_argument("C(t) must be >= 0");
    if (i > 0 && !(times[i] > times[i - 1])) throw std::invalid_argument("C(t) sample times must increase");
  }
  CProfile p;
  p.times_ = std::move(times);
  p.values_ = std::move(values);
  return p;
}

double CProfile::operator()(double t) const {
  if (is_constant()) return constant_;
  const double slack = 1e-12 * (1.0 + std::abs(times_.front()));
  if (t < times_.front() - slack || t > times_.back() + slack)
    throw std::out_of_range("C(t) evaluated outside its sampled range");
  if (t <= times_.front()) return values_.front();
  if (t >= times_.back()) return values_.back();
  const auto it = std::upper_bound(times_.begin(), times_.end(), t);
  const auto i = static_cast<std::size_t>(it - times_.begin());
  const double s = (t - times_[i - 1]) / (times_[i] - times_[i - 1]);
  return values_[i - 1] + s * (values_[i] - values_[i - 1]);
}

std::vector<double> CProfile::breakpoints(double a, double b) const {
  std::vector<double> out;
  for (double t : times_)
    if (t > a && t < b) out.push_back(t);
  return out;
}

double CProfile::integral(double a, double b) const {
  if (b < a) return -integral(b, a);
  std::vector<double> cuts{a};
  for (double t : breakpoints(a, b)) cuts.push_back(t);
  cuts.push_back(b);
  double sum = 0.0;
  for (std::size_t i = 1; i < cuts.size(); ++i) {
    const double c0 = (*this)(cuts[i - 1]), c1 = (*this)(cuts[i]);
    sum += 0.5 * (c0 + c1) * (cuts[i] - cuts[i - 1]);
  }
  return sum;
}

double CProfile::integral_sq(double a, double b) const {
  if (b < a) return -integral_sq(b, a);
  std::vector<double> cuts{a};
  for (double t : breakpoints(a, b)) cuts.push_back(t);
  cuts.push_back(b);
  double sum = 0.0;
  for (std::size_t i = 1; i < cuts.size(); ++i) {
    const double c0 = (*this)(cuts[i - 1]), c1 = (*this)(cuts[i]);
    sum += (c0 * c0 + c0 * c1 + c1 * c1) / 3.0 * (cuts[i] - cuts[i - 1]);
  }
  return sum;
}

void Forcing::validate(double a, double b, std::size_t num_terms) const {
  if (!c_profile.is_constant()) {
    const auto& ts = c_profile.times();
    const double slack = 1e-12 * (1.0 + std::abs(a));
    if (ts.front() > a + slack || ts.back() < b - slack)
      throw std::invalid_argument("C(t) profile does not cover the time interval");
  }
  if (!std::isfinite(c_profile.integral_sq(a, b))) throw std::invalid_argument("integral of C(t)^2 is not finite");
  if (const auto* mm = std::get_if<ModeMatrix>(&coupling)) {
    if (static_cast<std::size_t>(mm->weights.rows()) != num_terms ||
        static_cast<std::size_t>(mm->weights.cols()) != num_terms)
      throw std::invalid_argument("coupling matrix must be square over the field's modes");
    if (!mm->weights.allFinite()) throw std::invalid_argument("coupling matrix must be finite");
  }
}

// ---------------------------------------------------------------- exact

CoefficientField evolve_exact(const CoefficientField& field, double t_target) {
  require_negative_time(t_target, "target time");
  const double ratio = (-t_target) / (-field.time());
  std::vector<Term> terms = field.terms();
  for (auto& t : terms) t.amplitude *= std::pow(ratio, t.mode.mu);
  return CoefficientField(field.background(), t_target, std::move(terms));
}

Trajectory evolve_exact(const CoefficientField& field, const TimeGrid& grid) {
  Trajectory traj{grid, {}, EvolutionMethod::Exact, std::nullopt};
  traj.fields.reserve(grid.size());
  for (double t : grid.nodes()) traj.fields.push_back(evolve_exact(field, t));
  return traj;
}

// ---------------------------------------------------------------- stepped

namespace {

struct LinearSystem {
  Eigen::VectorXd mu;
  const Forcing* forcing;

  Eigen::VectorXd rhs(double t, const Eigen::VectorXd& a) const {
    Eigen::VectorXd d = (-mu.array() / (-t) * a.array()).matrix();
    const double c = forcing->c_profile(t);
    if (c != 0.0) {
      if (const auto* mm = std::get_if<ModeMatrix>(&forcing->coupling))
        d += c * (mm->weights * a);
      else
        d += c * a;
    }
    return d;
  }

  Eigen::VectorXd integrate(double t0, double t1, const Eigen::VectorXd& a0, int steps) const {
    const double h = (t1 - t0) / steps;
    Eigen::VectorXd a = a0;
    for (int s = 0; s < steps; ++s) {
      const double t = t0 + s * h;
      const Eigen::VectorXd k1 = rhs(t, a);
      const Eigen::VectorXd k2 = rhs(t + 0.5 * h, a + 0.5 * h * k1);
      const Eigen::VectorXd k3 = rhs(t + 0.5 * h, a + 0.5 * h * k2);
      const Eigen::VectorXd k4 = rhs(t + h, a + h * k3);
      a += (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    }
    return a;
  }
};

}  // namespace

Trajectory evolve_forced(const CoefficientField& field, const TimeGrid& grid, const Forcing& forcing,
                         const StepperOptions& options) {
  if (std::abs(field.time() - grid.a()) > 1e-12 * (1.0 + std::abs(grid.a())))
    throw std::invalid_argument("forced evolution must start at the grid's first node");
  if (grid.b() > options.latest_time)
    throw std::invalid_argument("grid ends above the latest permitted time " + std::to_string(options.latest_time));
  forcing.validate(grid.a(), grid.b(), field.terms().size());

  LinearSystem sys{Eigen::VectorXd(static_cast<Eigen::Index>(field.terms().size())), &forcing};
  for (std::size_t i = 0; i < field.terms().size(); ++i)
    sys.mu[static_cast<Eigen::Index>(i)] = field.terms()[i].mode.mu;

  Trajectory traj{grid, {}, EvolutionMethod::SteppedRK4, forcing};
  traj.fields.reserve(grid.size());
  traj.fields.push_back(field.with_amplitudes(grid.a(), field.amplitudes()));
  Eigen::VectorXd a = field.amplitudes();
  const auto& nodes = grid.nodes();
  for (std::size_t i = 1; i < nodes.size(); ++i) {
    int steps = 1;
    Eigen::VectorXd coarse = sys.integrate(nodes[i - 1], nodes[i], a, steps);
    for (;;) {
      if (2 * steps > options.max_substeps)
        throw EvolutionError("grid interval [" + std::to_string(nodes[i - 1]) + ", " + std::to_string(nodes[i]) +
                             "] too coarse: local tolerance not met within the substep limit");
      Eigen::VectorXd fine = sys.integrate(nodes[i - 1], nodes[i], a, 2 * steps);
      const double scale = std::max(fine.lpNorm<Eigen::Infinity>(), std::numeric_limits<double>::min());
      const double err = (fine - coarse).lpNorm<Eigen::Infinity>() / scale;
      steps *= 2;
      if (err <= options.local_tolerance) {
        a = fine + (fine - coarse) / 15.0;  // Richardson step for the fourth-order pair
        break;
      }
      coarse = std::move(fine);
    }
    traj.fields.push_back(field.with_amplitudes(nodes[i], a));
  }
  return traj;
}

CoefficientField project(const Background& bg, double time, const std::vector<Mode>& modes,
                         const QuadratureRule& rule, const std::function<double(const Eigen::VectorXd&)>& v) {
  const ModeBasis basis(bg, modes);
  std::vector<Term> terms;
  for (std::size_t i = 0; i < basis.size(); ++i) {
    double sum = 0.0;
    for (std::size_t q = 0; q < rule.size(); ++q) sum += rule.weights[q] * v(rule.points[q]) * basis.value(i, rule.points[q]);
    terms.push_back(Term{modes[i], sum});
  }
  return CoefficientField(bg, time, std::move(terms));
}

double evaluate_field(const CoefficientField& field, const Eigen::VectorXd& point) {
  double u = 0.0;
  for (const auto& t : field.terms())
    if (t.amplitude != 0.0) u += t.amplitude * evaluate_mode(field.background(), t.mode, point);
  return u;
}

double forcing_bound_margin(const CoefficientField& field, const Forcing& forcing, const QuadratureRule& rule) {
  const Background& bg = field.background();
  if (!bg.supports_evaluation()) throw UnsupportedBackground("forcing certification needs evaluation on " + bg.name());
  std::vector<Mode> modes;
  for (const auto& t : field.terms()) modes.push_back(t.mode);
  const ModeBasis basis(bg, modes);

  const double t = field.time();
  const double c = forcing.c_profile(t);
  const Eigen::VectorXd a = field.amplitudes();
  const auto* mm = std::get_if<ModeMatrix>(&forcing.coupling);
  Eigen::VectorXd f_coeffs = Eigen::VectorXd::Zero(a.size());
  if (mm) {
    if (mm->weights.rows() != a.size() || mm->weights.cols() != a.size())
      throw std::invalid_argument("coupling matrix must be square over the field's modes");
    f_coeffs = c * (mm->weights * a);
  }
  const double grad_scale = 1.0 / std::sqrt(-t);

  double margin = std::numeric_limits<double>::infinity();
  for (const auto& p : rule.points) {
    const GeometryData geom = geometry_at(bg, p);
    double u = 0.0, f = 0.0;
    Eigen::VectorXd grad = Eigen::VectorXd::Zero(p.size());
    for (std::size_t i = 0; i < basis.size(); ++i) {
      const auto ii = static_cast<Eigen::Index>(i);
      if (a[ii] == 0.0 && f_coeffs[ii] == 0.0) continue;
      const auto [value, gradient] = basis.value_gradient(i, p, geom);
      u += a[ii] * value;
      f += f_coeffs[ii] * value;
      grad += a[ii] * gradient;
    }
    if (!mm) f = c * u;
    margin = std::min(margin, c * (grad.norm() * grad_scale + std::abs(u)) - std::abs(f));
  }
  return margin;
}

}  // namespace pfreq
