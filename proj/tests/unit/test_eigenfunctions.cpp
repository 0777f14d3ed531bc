#include <gtest/gtest.h>

#include <cmath>

#include "pfreq/eigenfunctions.hpp"
#include "pfreq/error.hpp"
#include "pfreq/geometry.hpp"
#include "pfreq/quadrature.hpp"
#include "test_support.hpp"

using namespace pfreq;

TEST(Eigenfunctions, Orthonormality) {
  for (const auto& bg : test::evaluable_backgrounds()) {
    const auto modes = enumerate_modes(bg, 3.0);
    const ModeBasis basis(bg, modes);
    const QuadratureRule q = quadrature(bg, 24);
    Eigen::MatrixXd gram = Eigen::MatrixXd::Zero(modes.size(), modes.size());
    for (std::size_t p = 0; p < q.size(); ++p) {
      Eigen::VectorXd v(modes.size());
      for (std::size_t i = 0; i < modes.size(); ++i) v[i] = basis.value(i, q.points[p]);
      gram += q.weights[p] * v * v.transpose();
    }
    const double err = (gram - Eigen::MatrixXd::Identity(modes.size(), modes.size())).cwiseAbs().maxCoeff();
    EXPECT_LT(err, 1e-9) << bg.name() << " with " << modes.size() << " modes";
  }
}

TEST(Eigenfunctions, HermiteOracle) {
  const Background bg = Background::plane(1);
  for (int k = 0; k <= 6; ++k) {
    const Mode m = make_mode(bg, {k});
    for (double y : {-3.1, -0.7, 0.0, 0.4, 2.5}) {
      Eigen::VectorXd p(1);
      p << y;
      const double oracle = test::hermite_he(k, y / std::sqrt(2.0)) / std::sqrt(std::tgamma(k + 1.0));
      EXPECT_NEAR(evaluate_mode(bg, m, p), oracle, 1e-12 * std::max(1.0, std::abs(oracle)));
    }
  }
}

// L_1 phi = -mu phi at every quadrature point, using exact Hessians.
TEST(Eigenfunctions, DriftLaplacianEigenIdentity) {
  for (const auto& bg : test::evaluable_backgrounds()) {
    const auto modes = enumerate_modes(bg, bg.is_plane() && bg.n_total() == 1 ? 3.0 : 2.5);
    const ModeBasis basis(bg, modes);
    const QuadratureRule q = quadrature(bg, 8);
    for (std::size_t p = 0; p < q.size(); ++p) {
      const GeometryData geo = geometry_at(bg, q.points[p]);
      for (std::size_t i = 0; i < modes.size(); ++i) {
        const ModeJet j = basis.jet(i, q.points[p], geo);
        EXPECT_NEAR(j.drift_laplacian, -modes[i].mu * j.value, 1e-9 * (1.0 + std::abs(j.value)))
            << bg.name() << " mode " << i;
      }
    }
  }
}

TEST(Eigenfunctions, TangentialGradient) {
  const Background bg = Background::sphere(2);
  const ModeBasis basis(bg, enumerate_modes(bg, 3.0));
  const QuadratureRule q = quadrature(bg, 6);
  for (std::size_t p = 0; p < q.size(); ++p) {
    const GeometryData geo = geometry_at(bg, q.points[p]);
    for (std::size_t i = 0; i < basis.size(); ++i) {
      const ModeJet j = basis.jet(i, q.points[p], geo);
      EXPECT_NEAR(j.gradient.dot(geo.normal), 0.0, 1e-12);
      EXPECT_NEAR((j.hessian * geo.normal).norm(), 0.0, 1e-11);
      const auto [v, g] = basis.value_gradient(i, q.points[p], geo);
      EXPECT_DOUBLE_EQ(v, j.value);
      EXPECT_NEAR((g - j.gradient).norm(), 0.0, 1e-14);
    }
  }
}

TEST(Eigenfunctions, CircleLabels) {
  const Background bg = Background::sphere(1);
  const double r = std::sqrt(2.0);
  const double norm = 1.0 / std::sqrt(gaussian_density(bg) / 2.0);
  for (double th : {0.1, 1.3, 2.9}) {
    Eigen::VectorXd p(2);
    p << r * std::cos(th), r * std::sin(th);
    EXPECT_NEAR(evaluate_mode(bg, make_mode(bg, {2, 0}), p), norm * std::cos(2 * th), 1e-12);
    EXPECT_NEAR(evaluate_mode(bg, make_mode(bg, {2, 1}), p), norm * std::sin(2 * th), 1e-12);
  }
}

TEST(Eigenfunctions, UnsupportedBackgroundThrows) {
  EXPECT_THROW(evaluate_mode(Background::sphere(4), make_mode(Background::sphere(4), {1, 0}), Eigen::VectorXd::Zero(5)),
               UnsupportedBackground);
}
