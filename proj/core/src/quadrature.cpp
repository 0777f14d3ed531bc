#include "pfreq/quadrature.hpp"

#include <cmath>
#include <numbers>
#include <numeric>
#include <stdexcept>

#include "pfreq/error.hpp"

namespace pfreq {

namespace {

// Golub-Welsch on the Jacobi matrix of an orthonormal family with zero
// diagonal and off-diagonal beta(j), then Newton polish and Christoffel
// weights, normalized to unit total mass.
template <class Beta>
GaussRule symmetric_gauss(int m, Beta beta) {
  if (m < 1) throw std::invalid_argument("Gauss rule needs at least one node");
  Eigen::MatrixXd jacobi = Eigen::MatrixXd::Zero(m, m);
  for (int j = 1; j < m; ++j) jacobi(j, j - 1) = jacobi(j - 1, j) = beta(j);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(jacobi, Eigen::EigenvaluesOnly);

  GaussRule rule;
  rule.nodes.resize(static_cast<std::size_t>(m));
  rule.weights.resize(static_cast<std::size_t>(m));
  for (int i = 0; i < m; ++i) {
    double x = eig.eigenvalues()[i];
    double sum_sq = 0.0;
    for (int it = 0; it < 3; ++it) {
      // orthonormal recurrence x p_j = beta(j+1) p_{j+1} + beta(j) p_{j-1}
      double p_prev = 0.0, p = 1.0, dp_prev = 0.0, dp = 0.0;
      sum_sq = 0.0;
      for (int j = 0; j < m; ++j) {
        sum_sq += p * p;
        const double bj = j == 0 ? 0.0 : beta(j);
        const double p_next = (x * p - bj * p_prev) / beta(j + 1);
        const double dp_next = (p + x * dp - bj * dp_prev) / beta(j + 1);
        p_prev = p;
        p = p_next;
        dp_prev = dp;
        dp = dp_next;
      }
      if (dp != 0.0 && it < 2) x -= p / dp;
    }
    rule.nodes[static_cast<std::size_t>(i)] = x;
    rule.weights[static_cast<std::size_t>(i)] = 1.0 / sum_sq;
  }
  // symmetrize to remove round-off asymmetry
  for (int i = 0; i < m / 2; ++i) {
    const auto a = static_cast<std::size_t>(i), b = static_cast<std::size_t>(m - 1 - i);
    const double x = 0.5 * (rule.nodes[b] - rule.nodes[a]);
    const double w = 0.5 * (rule.weights[a] + rule.weights[b]);
    rule.nodes[a] = -x;
    rule.nodes[b] = x;
    rule.weights[a] = rule.weights[b] = w;
  }
  if (m % 2 == 1) rule.nodes[static_cast<std::size_t>(m / 2)] = 0.0;
  const double total = std::accumulate(rule.weights.begin(), rule.weights.end(), 0.0);
  for (double& w : rule.weights) w /= total;
  return rule;
}

Eigen::VectorXd make_point(std::initializer_list<double> xs) {
  Eigen::VectorXd v(static_cast<Eigen::Index>(xs.size()));
  Eigen::Index i = 0;
  for (double x : xs) v[i++] = x;
  return v;
}

}  // namespace

double QuadratureRule::total_mass() const { return std::accumulate(weights.begin(), weights.end(), 0.0); }

GaussRule gauss_hermite(int m) {
  return symmetric_gauss(m, [](int j) { return std::sqrt(static_cast<double>(j)); });
}

GaussRule gauss_legendre(int m) {
  GaussRule r = symmetric_gauss(m, [](int j) {
    const double jj = static_cast<double>(j);
    return jj / std::sqrt(4.0 * jj * jj - 1.0);
  });
  for (double& w : r.weights) w *= 2.0;
  return r;
}

QuadratureRule quadrature(const Background& bg, int resolution) {
  if (resolution < 1) throw std::invalid_argument("quadrature: resolution must be >= 1");
  if (!bg.supports_evaluation()) throw UnsupportedBackground("no quadrature rule for " + bg.name());

  const double mass = gaussian_density(bg);
  const double r = bg.sphere_radius();
  const int n_angles = 2 * resolution;
  auto angle = [&](int j) { return 2.0 * std::numbers::pi * j / n_angles; };

  QuadratureRule rule;
  if (bg.is_plane()) {
    // y = sqrt(2) s maps the standard normal onto (4 pi)^{-1/2} e^{-y^2/4}.
    const GaussRule gh = gauss_hermite(resolution);
    const int n = bg.n_total();
    std::vector<int> digit(static_cast<std::size_t>(n), 0);
    const auto m = static_cast<std::size_t>(resolution);
    std::size_t count = 1;
    for (int i = 0; i < n; ++i) count *= m;
    for (std::size_t c = 0; c < count; ++c) {
      Eigen::VectorXd p(n);
      double w = 1.0;
      std::size_t rest = c;
      for (int i = 0; i < n; ++i) {
        const std::size_t d = rest % m;
        rest /= m;
        p[i] = std::sqrt(2.0) * gh.nodes[d];
        w *= gh.weights[d];
      }
      rule.points.push_back(std::move(p));
      rule.weights.push_back(w);
    }
  } else if (bg.is_sphere() && bg.n_total() == 1) {
    for (int j = 0; j < n_angles; ++j) {
      rule.points.push_back(make_point({r * std::cos(angle(j)), r * std::sin(angle(j))}));
      rule.weights.push_back(mass / n_angles);
    }
  } else if (bg.is_sphere()) {
    const GaussRule gl = gauss_legendre(resolution);
    for (std::size_t i = 0; i < gl.nodes.size(); ++i) {
      const double z = gl.nodes[i];
      const double s = std::sqrt(std::max(0.0, 1.0 - z * z));
      for (int j = 0; j < n_angles; ++j) {
        rule.points.push_back(make_point({r * s * std::cos(angle(j)), r * s * std::sin(angle(j)), r * z}));
        rule.weights.push_back(mass * 0.5 * gl.weights[i] / n_angles);
      }
    }
  } else {
    const GaussRule gh = gauss_hermite(resolution);
    for (int j = 0; j < n_angles; ++j)
      for (std::size_t i = 0; i < gh.nodes.size(); ++i) {
        rule.points.push_back(
            make_point({r * std::cos(angle(j)), r * std::sin(angle(j)), std::sqrt(2.0) * gh.nodes[i]}));
        rule.weights.push_back(mass * gh.weights[i] / n_angles);
      }
  }
  return rule;
}

}  // namespace pfreq
