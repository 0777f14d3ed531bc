#include "pfreq/geometry.hpp"

#include <cmath>
#include <stdexcept>

#include "pfreq/error.hpp"

namespace pfreq {

namespace {

// Coordinates [0, round_dim) carry the round factor, the rest are flat.
int round_dim(const Background& bg) {
  if (bg.is_plane()) return 0;
  if (bg.is_sphere()) return bg.ambient_dim();
  return std::get<Cylinder>(bg.kind()).k + 1;
}

}  // namespace

void require_on_shrinker(const Background& bg, const Eigen::VectorXd& point) {
  if (point.size() != bg.ambient_dim())
    throw std::invalid_argument("point has dimension " + std::to_string(point.size()) + ", expected " +
                                std::to_string(bg.ambient_dim()) + " for " + bg.name());
  const int rd = round_dim(bg);
  if (rd == 0) return;
  const double r = bg.sphere_radius();
  const double rho = point.head(rd).norm();
  if (std::abs(rho - r) > 1e-9 * r) throw std::invalid_argument("point is not on " + bg.name());
}

GeometryData geometry_at(const Background& bg, const Eigen::VectorXd& point) {
  if (!bg.supports_evaluation()) throw UnsupportedBackground("no pointwise geometry for " + bg.name());
  require_on_shrinker(bg, point);

  const Eigen::Index d = bg.ambient_dim();
  const int rd = round_dim(bg);
  GeometryData g;
  g.normal = Eigen::VectorXd::Zero(d);
  g.ric = Eigen::MatrixXd::Zero(d, d);
  g.shape_pairing = Eigen::MatrixXd::Zero(d, d);
  g.second_fundamental = Eigen::MatrixXd::Zero(d, d);
  g.metric = Eigen::MatrixXd::Identity(d, d);

  if (rd > 0) {
    const double r = bg.sphere_radius();
    const int k = rd - 1;  // dimension of the round factor
    g.normal.head(rd) = point.head(rd).normalized();
    g.metric -= g.normal * g.normal.transpose();

    Eigen::MatrixXd round_projector = Eigen::MatrixXd::Zero(d, d);
    round_projector.topLeftCorner(rd, rd) =
        Eigen::MatrixXd::Identity(rd, rd) - g.normal.head(rd) * g.normal.head(rd).transpose();

    // A(X, Y) = -<X, Y>_round / r * normal, H = -(k / r) normal.
    g.second_fundamental = -round_projector / r;
    g.mean_curvature = -(k / r) * g.normal;
    g.shape_pairing = (k / (r * r)) * round_projector;
    g.ric = ((k - 1) / (r * r)) * round_projector;
  } else {
    g.mean_curvature = Eigen::VectorXd::Zero(d);
  }
  g.h_norm = g.mean_curvature.norm();
  g.x_perp = (g.normal.dot(point)) * g.normal;
  g.x_tan = point - g.x_perp;
  return g;
}

}  // namespace pfreq
