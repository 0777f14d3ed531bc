#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "pfreq/background.hpp"
#include "pfreq/error.hpp"
#include "pfreq/geometry.hpp"
#include "test_support.hpp"

using namespace pfreq;

TEST(Background, NamesAndDimensions) {
  EXPECT_EQ(Background::plane(2).name(), "plane(n=2)");
  EXPECT_EQ(Background::sphere(2).name(), "sphere(n=2)");
  EXPECT_EQ(Background::sphere(3).ambient_dim(), 4);
  EXPECT_EQ(Background::cylinder(2, 3).n_total(), 5);
  EXPECT_EQ(Background::cylinder(2, 3).ambient_dim(), 6);
  EXPECT_DOUBLE_EQ(Background::sphere(2).sphere_radius(), 2.0);
  EXPECT_THROW(Background::plane(0), std::invalid_argument);
  EXPECT_THROW(Background::cylinder(0, 1), std::invalid_argument);
}

TEST(Background, EvaluationSupport) {
  EXPECT_TRUE(Background::plane(3).supports_evaluation());
  EXPECT_FALSE(Background::plane(4).supports_evaluation());
  EXPECT_TRUE(Background::sphere(2).supports_evaluation());
  EXPECT_FALSE(Background::sphere(3).supports_evaluation());
  EXPECT_TRUE(Background::cylinder(1, 1).supports_evaluation());
  EXPECT_FALSE(Background::cylinder(2, 1).supports_evaluation());
  EXPECT_THROW(geometry_at(Background::sphere(5), Eigen::VectorXd::Zero(6)), UnsupportedBackground);
}

TEST(Spectrum, HarmonicDimensions) {
  for (int k = 0; k < 8; ++k) EXPECT_EQ(harmonic_dimension(2, k), static_cast<std::uint64_t>(2 * k + 1));
  EXPECT_EQ(harmonic_dimension(1, 0), 1u);
  for (int k = 1; k < 8; ++k) EXPECT_EQ(harmonic_dimension(1, k), 2u);
  for (int n = 1; n < 12; ++n) EXPECT_EQ(harmonic_dimension(n, 1), static_cast<std::uint64_t>(n + 1));
  EXPECT_EQ(harmonic_dimension(3, 2), 9u);
}

TEST(Spectrum, SphereEigenvalues) {
  for (int n : {1, 2, 5, 10}) {
    const auto modes = enumerate_modes(Background::sphere(n), 4.0);
    for (const auto& m : modes) {
      const int k = m.index[0];
      EXPECT_NEAR(m.mu, k * (k + n - 1) / (2.0 * n), 1e-15);
    }
  }
  EXPECT_EQ(enumerate_modes(Background::sphere(2), 3.0).size(), 16u);
}

TEST(Spectrum, PlaneCountsAndOrder) {
  const auto modes = enumerate_modes(Background::plane(2), 2.0);
  EXPECT_EQ(modes.size(), 15u);  // total degree <= 4
  for (std::size_t i = 1; i < modes.size(); ++i) EXPECT_LE(modes[i - 1].mu, modes[i].mu);
  EXPECT_EQ(modes.front().index, (std::vector<int>{0, 0}));
}

TEST(Spectrum, CylinderEigenvalues) {
  for (const auto& m : enumerate_modes(Background::cylinder(1, 1), 3.0)) {
    const int l = m.index[0];
    EXPECT_NEAR(m.mu, 0.5 * l * l + 0.5 * m.index[2], 1e-15);
  }
}

TEST(Spectrum, FirstNonzeroEigenvalue) {
  for (const auto& bg : {Background::plane(1), Background::plane(3), Background::sphere(1), Background::sphere(7),
                         Background::cylinder(1, 1), Background::cylinder(3, 2)})
    EXPECT_NEAR(first_nonzero_mu(bg), 0.5, 1e-15) << bg.name();
}

TEST(Spectrum, InvalidModes) {
  EXPECT_THROW(make_mode(Background::plane(2), {1}), std::invalid_argument);
  EXPECT_THROW(make_mode(Background::plane(1), {-1}), std::invalid_argument);
  EXPECT_THROW(make_mode(Background::sphere(2), {1, 3}), std::invalid_argument);
  EXPECT_THROW(enumerate_modes(Background::plane(1), -0.1), std::invalid_argument);
}

TEST(GaussianDensity, ClosedForms) {
  EXPECT_DOUBLE_EQ(gaussian_density(Background::plane(3)), 1.0);
  EXPECT_NEAR(gaussian_density(Background::sphere(2)), 4.0 / std::exp(1.0), 1e-14);
  EXPECT_NEAR(gaussian_density(Background::sphere(1)), std::sqrt(2.0 * M_PI) * std::exp(-0.5), 1e-14);
  for (int n = 1; n <= 10; ++n)
    EXPECT_NEAR(gaussian_density(Background::sphere(n)), test::sphere_density_oracle(n), 1e-12) << n;
  EXPECT_NEAR(gaussian_density(Background::cylinder(2, 3)), test::sphere_density_oracle(2), 1e-12);
}

// kappa is the largest eigenvalue of <H, A(., .)> over tangent directions.
TEST(Geometry, KappaIsMaxShapePairing) {
  std::mt19937_64 rng(3);
  std::normal_distribution<double> g;
  for (const auto& bg : test::evaluable_backgrounds()) {
    for (int trial = 0; trial < 20; ++trial) {
      Eigen::VectorXd p(bg.ambient_dim());
      for (Eigen::Index i = 0; i < p.size(); ++i) p[i] = g(rng);
      if (!bg.is_plane()) {
        const int round = bg.is_sphere() ? bg.ambient_dim() : std::get<Cylinder>(bg.kind()).k + 1;
        p.head(round) *= bg.sphere_radius() / p.head(round).norm();
      }
      const GeometryData geo = geometry_at(bg, p);
      Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(geo.shape_pairing);
      EXPECT_NEAR(es.eigenvalues().maxCoeff(), kappa(bg), 1e-12) << bg.name();
      EXPECT_NEAR((geo.mean_curvature + 0.5 * geo.x_perp).norm(), 0.0, 1e-12) << bg.name();
      EXPECT_NEAR((geo.x_tan + geo.x_perp - p).norm(), 0.0, 1e-12);
    }
  }
}

TEST(Geometry, OffShrinkerPointRejected) {
  Eigen::VectorXd p(3);
  p << 1.0, 0.0, 0.0;
  EXPECT_THROW(geometry_at(Background::sphere(2), p), std::invalid_argument);
}
