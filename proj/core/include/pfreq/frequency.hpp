#pragma once

#include <vector>

#include "pfreq/evolution.hpp"
#include "pfreq/quadrature.hpp"

namespace pfreq {

// Coefficient-path functionals. With orthonormal modes and the measure
// invariant in the self-similar frame,
//   I = sum a_j^2,  D = -2 sum mu_j a_j^2 / (-t),  L_t phi_j = -mu_j / (-t) phi_j.

/// Weighted L^2 mass, the integral of u^2 d mu_t.
double compute_I(const CoefficientField& field);
/// -2 times the integral of |grad u|^2 d mu_t.
double compute_D(const CoefficientField& field);
/// (-t)^{1 + 2 kappa} D / I. Throws std::domain_error for the zero field.
double compute_U(const CoefficientField& field, double kappa);
/// (-t) D / I, equal to -2 mu on a pure mode. Throws std::domain_error for the zero field.
double compute_N_raw(const CoefficientField& field);
/// Integral of (L_t u)^2 d mu_t.
double compute_drift_energy(const CoefficientField& field);

/// I * int (L u)^2 - (int u L u)^2, evaluated through the Lagrange identity
/// sum_{i<j} a_i^2 a_j^2 (c_i - c_j)^2 so it is exactly zero on eigenfunctions.
double cauchy_schwarz_defect(const CoefficientField& field);

/// First nonzero eigenvalue of -L_t. Constants are excluded: on a closed
/// shrinker the infimum over all nonzero functions would be 0.
double lambda1(const Background& bg, double t);

/// Quadrature-path counterparts used to cross-check the coefficient path.
double compute_I_quadrature(const CoefficientField& field, const QuadratureRule& rule);
double compute_D_quadrature(const CoefficientField& field, const QuadratureRule& rule);

struct FrequencyRow {
  double t = 0.0;
  double I = 0.0;
  double D = 0.0;
  double U = 0.0;
  double N_raw = 0.0;
  double cs_defect = 0.0;
  double kappa_used = 0.0;
};

/// One row per trajectory node; U and N_raw are NaN where the field vanishes.
using FrequencyTrace = std::vector<FrequencyRow>;

FrequencyTrace frequency_trace(const Trajectory& traj, double kappa);

}  // namespace pfreq
