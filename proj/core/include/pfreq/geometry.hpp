#pragma once

#include <Eigen/Dense>

#include "pfreq/background.hpp"

namespace pfreq {

/// Closed-form extrinsic and intrinsic tensors at a point of the unit-scale
/// shrinker. Bilinear forms are ambient matrices supported on the tangent space.
struct GeometryData {
  Eigen::MatrixXd metric;              ///< orthogonal projector onto the tangent space
  Eigen::MatrixXd ric;                 ///< Ricci form
  Eigen::MatrixXd shape_pairing;       ///< <H, A(., .)>
  Eigen::VectorXd normal;              ///< outward unit normal of the round factor; zero on the plane
  Eigen::MatrixXd second_fundamental;  ///< scalar form with A = second_fundamental * normal
  Eigen::VectorXd mean_curvature;      ///< H, equal to -x_perp / 2 on a shrinker
  double h_norm = 0.0;
  Eigen::VectorXd x_tan;
  Eigen::VectorXd x_perp;
};

/// Throws UnsupportedBackground outside the pointwise-evaluation support and
/// std::invalid_argument when the point is off the shrinker.
GeometryData geometry_at(const Background& bg, const Eigen::VectorXd& point);

/// Throws std::invalid_argument unless point lies on the unit-scale shrinker.
void require_on_shrinker(const Background& bg, const Eigen::VectorXd& point);

}  // namespace pfreq
