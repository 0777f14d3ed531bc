#pragma once

#include <Eigen/Dense>

#include <vector>

#include "pfreq/background.hpp"

namespace pfreq {

/// Discretization of d mu_{-1} on the unit-scale shrinker. Because the
/// measure is time invariant in self-similar coordinates, one rule serves
/// every time slice.
struct QuadratureRule {
  std::vector<Eigen::VectorXd> points;
  std::vector<double> weights;

  std::size_t size() const { return weights.size(); }
  double total_mass() const;
};

/// One-dimensional Gauss rule.
struct GaussRule {
  std::vector<double> nodes;
  std::vector<double> weights;
};

/// m-point rule for the standard normal density; weights sum to 1.
GaussRule gauss_hermite(int m);
/// m-point Gauss-Legendre rule on [-1, 1]; weights sum to 2.
GaussRule gauss_legendre(int m);

/// Tensor Gauss-Hermite per flat direction (m nodes each), 2m equispaced
/// angles per circle, Gauss-Legendre in the polar cosine for S^2.
QuadratureRule quadrature(const Background& bg, int resolution);

}  // namespace pfreq
