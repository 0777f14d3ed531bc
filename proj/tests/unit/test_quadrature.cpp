#include <gtest/gtest.h>

#include <cmath>

#include "pfreq/quadrature.hpp"
#include "test_support.hpp"

using namespace pfreq;

TEST(GaussHermite, WeightsAndMoments) {
  for (int m : {1, 2, 5, 12, 32, 64}) {
    const GaussRule g = gauss_hermite(m);
    ASSERT_EQ(g.nodes.size(), static_cast<std::size_t>(m));
    double sum = 0.0;
    for (double w : g.weights) sum += w;
    EXPECT_NEAR(sum, 1.0, 1e-14);
    for (int k = 0; 2 * k <= 2 * m - 1 && k <= 12; ++k) {
      double mom = 0.0;
      for (int i = 0; i < m; ++i) mom += g.weights[i] * std::pow(g.nodes[i], 2 * k);
      EXPECT_NEAR(mom / test::double_factorial(2 * k - 1), 1.0, 1e-11) << "m=" << m << " k=" << k;
    }
  }
}

TEST(GaussHermite, SymmetricNodes) {
  const GaussRule g = gauss_hermite(9);
  for (int i = 0; i < 9; ++i) {
    EXPECT_DOUBLE_EQ(g.nodes[i], -g.nodes[8 - i]);
    EXPECT_DOUBLE_EQ(g.weights[i], g.weights[8 - i]);
  }
}

TEST(GaussLegendre, Moments) {
  for (int m : {1, 4, 16, 33}) {
    const GaussRule g = gauss_legendre(m);
    for (int k = 0; 2 * k <= 2 * m - 1; ++k) {
      double mom = 0.0;
      for (int i = 0; i < m; ++i) mom += g.weights[i] * std::pow(g.nodes[i], 2 * k);
      EXPECT_NEAR(mom, 2.0 / (2 * k + 1), 1e-13) << "m=" << m << " k=" << k;
    }
  }
}

TEST(Quadrature, TotalMassMatchesDensity) {
  for (const auto& bg : test::evaluable_backgrounds())
    EXPECT_NEAR(quadrature(bg, 12).total_mass(), gaussian_density(bg), 1e-13) << bg.name();
}

TEST(Quadrature, SecondMomentOfPosition) {
  // Plane: int |y|^2 d mu = 2n. Sphere: |y|^2 = 2n pointwise.
  for (const auto& bg : test::evaluable_backgrounds()) {
    const QuadratureRule q = quadrature(bg, 16);
    double m2 = 0.0;
    for (std::size_t i = 0; i < q.size(); ++i) m2 += q.weights[i] * q.points[i].squaredNorm();
    double expected = 0.0;
    if (bg.is_plane()) expected = 2.0 * bg.n_total();
    if (bg.is_sphere()) expected = 2.0 * bg.n_total() * gaussian_density(bg);
    if (bg.is_cylinder()) expected = (2.0 + 2.0) * gaussian_density(bg);
    EXPECT_NEAR(m2, expected, 1e-12) << bg.name();
  }
}

TEST(Quadrature, PointsLieOnShrinker) {
  const QuadratureRule q = quadrature(Background::sphere(2), 10);
  for (const auto& p : q.points) EXPECT_NEAR(p.norm(), 2.0, 1e-13);
}

TEST(Quadrature, RejectsBadInput) {
  EXPECT_THROW(gauss_hermite(0), std::invalid_argument);
  EXPECT_THROW(quadrature(Background::plane(1), 0), std::invalid_argument);
}
