#pragma once

#include <Eigen/Dense>

#include <vector>

#include "pfreq/background.hpp"
#include "pfreq/geometry.hpp"
#include "pfreq/polynomial.hpp"

namespace pfreq {

/// Intrinsic derivatives of a mode at a unit-scale point, in ambient coordinates.
struct ModeJet {
  double value = 0.0;
  Eigen::VectorXd gradient;  ///< tangential gradient
  Eigen::MatrixXd hessian;   ///< intrinsic Hessian, supported on the tangent space
  double laplacian = 0.0;
  double drift_laplacian = 0.0;  ///< L_1 f = Laplacian f - <y, grad f> / 2
};

/// Ambient polynomial whose restriction to the unit-scale shrinker is the
/// mode's eigenfunction, orthonormal in L^2(d mu_{-1}).
///
/// Plane: product of He_d(y_i / sqrt 2) / sqrt(d!).
/// Sphere: homogeneous harmonic polynomial of degree k scaled by r^{-k}.
/// Cylinder: circle harmonic times a Hermite factor in the axial variable.
Polynomial mode_polynomial(const Background& bg, const Mode& mode);

/// Pointwise value of the orthonormalized eigenfunction.
double evaluate_mode(const Background& bg, const Mode& mode, const Eigen::VectorXd& point);

/// Intrinsic jet from an ambient extension's jet and the local geometry.
ModeJet intrinsic_jet(const PolynomialJet& ambient, const GeometryData& geom);

/// Fixed list of modes with differentiated polynomials cached.
class ModeBasis {
 public:
  ModeBasis(const Background& bg, std::vector<Mode> modes);

  const Background& background() const { return bg_; }
  const std::vector<Mode>& modes() const { return modes_; }
  std::size_t size() const { return modes_.size(); }

  double value(std::size_t i, const Eigen::VectorXd& point) const;
  ModeJet jet(std::size_t i, const Eigen::VectorXd& point, const GeometryData& geom) const;
  /// Value and tangential gradient only.
  std::pair<double, Eigen::VectorXd> value_gradient(std::size_t i, const Eigen::VectorXd& point,
                                                    const GeometryData& geom) const;

 private:
  Background bg_;
  std::vector<Mode> modes_;
  std::vector<DifferentiatedPolynomial> polys_;
};

}  // namespace pfreq
