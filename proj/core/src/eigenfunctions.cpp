#include "pfreq/eigenfunctions.hpp"

#include <cmath>
#include <string>

#include "pfreq/error.hpp"

namespace pfreq {

namespace {

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

double factorial(int n) {
  double f = 1.0;
  for (int i = 2; i <= n; ++i) f *= i;
  return f;
}

// He_d(y / sqrt 2) / sqrt(d!) in variable `var`: orthonormal for the weight
// (4 pi)^{-1/2} exp(-y^2 / 4) and an eigenfunction of d^2 - (y/2) d with
// eigenvalue -d/2.
Polynomial hermite_factor(std::size_t num_vars, std::size_t var, int degree) {
  const Polynomial s = Polynomial::variable(num_vars, var) * (1.0 / std::sqrt(2.0));
  Polynomial prev = Polynomial::constant(num_vars, 1.0);
  if (degree == 0) return prev;
  Polynomial cur = s;
  for (int j = 1; j < degree; ++j) {
    Polynomial next = s * cur - prev * static_cast<double>(j);
    prev = std::move(cur);
    cur = std::move(next);
  }
  return cur * (1.0 / std::sqrt(factorial(degree)));
}

// Re and Im of (y_a + i y_b)^m.
std::pair<Polynomial, Polynomial> complex_power(std::size_t num_vars, std::size_t a, std::size_t b, int m) {
  Polynomial re = Polynomial::constant(num_vars, 1.0);
  Polynomial im(num_vars);
  const Polynomial x = Polynomial::variable(num_vars, a);
  const Polynomial y = Polynomial::variable(num_vars, b);
  for (int i = 0; i < m; ++i) {
    Polynomial nre = re * x - im * y;
    Polynomial nim = re * y + im * x;
    re = std::move(nre);
    im = std::move(nim);
  }
  return {re, im};
}

// Circle harmonic of degree k on the circle of radius r in variables (a, b),
// normalized to unit mean square over the circle.
Polynomial circle_harmonic(std::size_t num_vars, std::size_t a, std::size_t b, int k, int label, double r) {
  if (k == 0) return Polynomial::constant(num_vars, 1.0);
  auto [re, im] = complex_power(num_vars, a, b, k);
  const double scale = std::sqrt(2.0) / std::pow(r, k);
  return (label == 0 ? re : im) * scale;
}

// Real spherical harmonic of degree k on S^2 of radius r, unit mean square.
// Built from the solid-harmonic recurrence on Pi_k^m(z, r^2) times Re/Im (x + i y)^m.
Polynomial sphere2_harmonic(int k, int label, double r) {
  constexpr std::size_t nv = 3;
  const int m_signed = label - k;
  const int m = std::abs(m_signed);
  const Polynomial z = Polynomial::variable(nv, 2);
  const Polynomial r2 = Polynomial::variable(nv, 0) * Polynomial::variable(nv, 0) +
                        Polynomial::variable(nv, 1) * Polynomial::variable(nv, 1) + z * z;

  double dfact = 1.0;  // (2m - 1)!!
  for (int i = 2 * m - 1; i > 1; i -= 2) dfact *= i;
  Polynomial p_prev = Polynomial::constant(nv, dfact);  // Pi_m^m
  Polynomial p_cur = p_prev;
  if (k > m) {
    p_cur = z * p_prev * static_cast<double>(2 * m + 1);  // Pi_{m+1}^m
    for (int j = m + 2; j <= k; ++j) {
      Polynomial next =
          (z * p_cur * static_cast<double>(2 * j - 1) - r2 * p_prev * static_cast<double>(j + m - 1)) *
          (1.0 / (j - m));
      p_prev = std::move(p_cur);
      p_cur = std::move(next);
    }
  }
  auto [re, im] = complex_power(nv, 0, 1, m);
  const Polynomial angular = m_signed < 0 ? im : re;
  const double norm2 = (m == 0 ? 1.0 : 2.0) * (2 * k + 1) * factorial(k - m) / factorial(k + m);
  return p_cur * angular * (std::sqrt(norm2) / std::pow(r, k));
}

void require_evaluable(const Background& bg) {
  if (!bg.supports_evaluation()) throw UnsupportedBackground("no pointwise evaluation for " + bg.name());
}

}  // namespace

Polynomial mode_polynomial(const Background& bg, const Mode& mode) {
  require_evaluable(bg);
  const Mode checked = make_mode(bg, mode.index);
  const auto& idx = checked.index;
  const auto nv = static_cast<std::size_t>(bg.ambient_dim());
  const double inv_sqrt_mass = 1.0 / std::sqrt(gaussian_density(bg));
  const double r = bg.sphere_radius();

  return std::visit(overloaded{[&](const Plane& p) {
                                 Polynomial out = Polynomial::constant(nv, 1.0);
                                 for (int i = 0; i < p.n; ++i)
                                   out = out * hermite_factor(nv, static_cast<std::size_t>(i), idx[i]);
                                 return out;
                               },
                               [&](const Sphere& s) {
                                 if (s.n == 1) return circle_harmonic(nv, 0, 1, idx[0], idx[1], r) * inv_sqrt_mass;
                                 return sphere2_harmonic(idx[0], idx[1], r) * inv_sqrt_mass;
                               },
                               [&](const Cylinder&) {
                                 return circle_harmonic(nv, 0, 1, idx[0], idx[1], r) * hermite_factor(nv, 2, idx[2]) *
                                        inv_sqrt_mass;
                               }},
                    bg.kind());
}

double evaluate_mode(const Background& bg, const Mode& mode, const Eigen::VectorXd& point) {
  require_evaluable(bg);
  require_on_shrinker(bg, point);
  return mode_polynomial(bg, mode)(point);
}

ModeJet intrinsic_jet(const PolynomialJet& ambient, const GeometryData& geom) {
  ModeJet j;
  j.value = ambient.value;
  const Eigen::MatrixXd& proj = geom.metric;
  j.gradient = proj * ambient.gradient;
  // Hess_M f(X, Y) = D^2 F(X, Y) + <grad F, A(X, Y)>.
  j.hessian = proj * ambient.hessian * proj + ambient.gradient.dot(geom.normal) * geom.second_fundamental;
  j.laplacian = j.hessian.trace();
  j.drift_laplacian = j.laplacian - 0.5 * geom.x_tan.dot(j.gradient);
  return j;
}

ModeBasis::ModeBasis(const Background& bg, std::vector<Mode> modes) : bg_(bg), modes_(std::move(modes)) {
  require_evaluable(bg_);
  polys_.reserve(modes_.size());
  for (const auto& m : modes_) polys_.emplace_back(mode_polynomial(bg_, m));
}

double ModeBasis::value(std::size_t i, const Eigen::VectorXd& point) const { return polys_.at(i).polynomial()(point); }

ModeJet ModeBasis::jet(std::size_t i, const Eigen::VectorXd& point, const GeometryData& geom) const {
  return intrinsic_jet(polys_.at(i).jet(point), geom);
}

std::pair<double, Eigen::VectorXd> ModeBasis::value_gradient(std::size_t i, const Eigen::VectorXd& point,
                                                             const GeometryData& geom) const {
  const PolynomialJet j = polys_.at(i).first_order_jet(point);
  return {j.value, geom.metric * j.gradient};
}

}  // namespace pfreq
