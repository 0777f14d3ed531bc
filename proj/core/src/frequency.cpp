#include "pfreq/frequency.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

#include "pfreq/eigenfunctions.hpp"
#include "pfreq/geometry.hpp"

namespace pfreq {

double compute_I(const CoefficientField& field) {
  double s = 0.0;
  for (const auto& t : field.terms()) s += t.amplitude * t.amplitude;
  return s;
}

double compute_D(const CoefficientField& field) {
  double s = 0.0;
  for (const auto& t : field.terms()) s += t.mode.mu * t.amplitude * t.amplitude;
  return -2.0 * s / (-field.time());
}

double compute_N_raw(const CoefficientField& field) {
  const double i = compute_I(field);
  if (i == 0.0) throw std::domain_error("frequency undefined for zero initial data");
  double s = 0.0;
  for (const auto& t : field.terms()) s += t.mode.mu * t.amplitude * t.amplitude;
  return -2.0 * s / i;
}

double compute_U(const CoefficientField& field, double kappa) {
  return std::pow(-field.time(), 2.0 * kappa) * compute_N_raw(field);
}

double compute_drift_energy(const CoefficientField& field) {
  const double inv = 1.0 / (-field.time());
  double s = 0.0;
  for (const auto& t : field.terms()) {
    const double c = t.mode.mu * inv;
    s += c * c * t.amplitude * t.amplitude;
  }
  return s;
}

double cauchy_schwarz_defect(const CoefficientField& field) {
  const auto& terms = field.terms();
  const double inv = 1.0 / (-field.time());
  double s = 0.0;
  for (std::size_t i = 0; i < terms.size(); ++i) {
    const double wi = terms[i].amplitude * terms[i].amplitude;
    if (wi == 0.0) continue;
    for (std::size_t j = i + 1; j < terms.size(); ++j) {
      const double wj = terms[j].amplitude * terms[j].amplitude;
      const double dc = (terms[i].mode.mu - terms[j].mode.mu) * inv;
      s += wi * wj * dc * dc;
    }
  }
  return s;
}

double lambda1(const Background& bg, double t) {
  if (!(t < 0.0)) throw std::invalid_argument("lambda1: t must be < 0");
  return first_nonzero_mu(bg) / (-t);
}

namespace {

template <class PerPoint>
double quadrature_sum(const CoefficientField& field, const QuadratureRule& rule, PerPoint&& per_point) {
  std::vector<Mode> modes;
  for (const auto& t : field.terms()) modes.push_back(t.mode);
  const ModeBasis basis(field.background(), modes);
  double sum = 0.0;
  for (std::size_t q = 0; q < rule.size(); ++q) {
    const auto& p = rule.points[q];
    const GeometryData geom = geometry_at(field.background(), p);
    double u = 0.0;
    Eigen::VectorXd grad = Eigen::VectorXd::Zero(p.size());
    for (std::size_t i = 0; i < basis.size(); ++i) {
      const double a = field.terms()[i].amplitude;
      if (a == 0.0) continue;
      const auto [value, gradient] = basis.value_gradient(i, p, geom);
      u += a * value;
      grad += a * gradient;
    }
    sum += rule.weights[q] * per_point(u, grad);
  }
  return sum;
}

}  // namespace

double compute_I_quadrature(const CoefficientField& field, const QuadratureRule& rule) {
  return quadrature_sum(field, rule, [](double u, const Eigen::VectorXd&) { return u * u; });
}

double compute_D_quadrature(const CoefficientField& field, const QuadratureRule& rule) {
  // |grad_x u|^2 = |grad_y v|^2 / (-t)
  const double inv = 1.0 / (-field.time());
  return -2.0 * inv *
         quadrature_sum(field, rule, [](double, const Eigen::VectorXd& g) { return g.squaredNorm(); });
}

FrequencyTrace frequency_trace(const Trajectory& traj, double kappa) {
  FrequencyTrace rows;
  rows.reserve(traj.fields.size());
  for (const auto& f : traj.fields) {
    FrequencyRow r;
    r.t = f.time();
    r.I = compute_I(f);
    r.D = compute_D(f);
    r.kappa_used = kappa;
    if (r.I > 0.0) {
      r.N_raw = compute_N_raw(f);
      r.U = std::pow(-r.t, 2.0 * kappa) * r.N_raw;
    } else {
      r.N_raw = r.U = std::numeric_limits<double>::quiet_NaN();
    }
    r.cs_defect = cauchy_schwarz_defect(f);
    rows.push_back(r);
  }
  return rows;
}

}  // namespace pfreq
