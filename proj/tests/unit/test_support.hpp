#pragma once

#include <cmath>
#include <vector>

#include "pfreq/background.hpp"
#include "pfreq/quadrature.hpp"

namespace pfreq::test {

/// Backgrounds with pointwise evaluation, used by most oracle sweeps.
inline std::vector<Background> evaluable_backgrounds() {
  return {Background::plane(1), Background::plane(2), Background::sphere(1), Background::sphere(2),
          Background::cylinder(1, 1)};
}

/// Hermite polynomial He_k by the three-term recurrence.
inline double hermite_he(int k, double x) {
  double h0 = 1.0, h1 = x;
  if (k == 0) return h0;
  for (int j = 1; j < k; ++j) {
    const double h2 = x * h1 - j * h0;
    h0 = h1;
    h1 = h2;
  }
  return h1;
}

inline double double_factorial(int k) {
  double r = 1.0;
  for (int j = k; j > 1; j -= 2) r *= j;
  return r;
}

/// Area of the round S^n of radius R times (4 pi)^{-n/2} e^{-R^2/4}.
inline double sphere_density_oracle(int n) {
  const double r2 = 2.0 * n;
  const double log_area = std::log(2.0) + 0.5 * (n + 1) * std::log(M_PI) - std::lgamma(0.5 * (n + 1)) + 0.5 * n * std::log(r2);
  return std::exp(log_area - 0.5 * n * std::log(4.0 * M_PI) - r2 / 4.0);
}

}  // namespace pfreq::test
