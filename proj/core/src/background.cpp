#include "pfreq/background.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

namespace pfreq {

namespace {

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

void require_positive(int v, const char* what) {
  if (v < 1) throw std::invalid_argument(std::string("background dimension '") + what + "' must be >= 1");
}

// mu = num / den with a denominator fixed per background, so ties compare exactly.
struct MuFraction {
  std::int64_t num;
  std::int64_t den;
};

MuFraction mu_fraction(const Background& bg, const std::vector<int>& index) {
  return std::visit(
      overloaded{
          [&](const Plane&) {
            std::int64_t deg = 0;
            for (int d : index) deg += d;
            return MuFraction{deg, 2};
          },
          [&](const Sphere& s) {
            const std::int64_t k = index[0];
            return MuFraction{k * (k + s.n - 1), 2 * std::int64_t{s.n}};
          },
          [&](const Cylinder& c) {
            const std::int64_t l = index[0];
            std::int64_t axial = 0;
            for (std::size_t i = 2; i < index.size(); ++i) axial += index[i];
            return MuFraction{l * (l + c.k - 1) + std::int64_t{c.k} * axial, 2 * std::int64_t{c.k}};
          }},
      bg.kind());
}

void validate_index(const Background& bg, const std::vector<int>& index) {
  auto fail = [&](const std::string& why) {
    throw std::invalid_argument("invalid mode index for " + bg.name() + ": " + why);
  };
  for (int v : index)
    if (v < 0) fail("negative entry");
  std::visit(overloaded{[&](const Plane& p) {
                          if (static_cast<int>(index.size()) != p.n) fail("expected one degree per axis");
                        },
                        [&](const Sphere& s) {
                          if (index.size() != 2) fail("expected {degree, label}");
                          if (static_cast<std::uint64_t>(index[1]) >= harmonic_dimension(s.n, index[0]))
                            fail("label exceeds harmonic dimension");
                        },
                        [&](const Cylinder& c) {
                          if (static_cast<int>(index.size()) != 2 + c.m)
                            fail("expected {degree, label, axial degrees...}");
                          if (static_cast<std::uint64_t>(index[1]) >= harmonic_dimension(c.k, index[0]))
                            fail("label exceeds harmonic dimension");
                        }},
             bg.kind());
}

// All multi-indices of length `len` with total degree <= max_deg.
void multi_indices(int len, int max_deg, std::vector<int>& cur, std::vector<std::vector<int>>& out) {
  if (static_cast<int>(cur.size()) == len) {
    out.push_back(cur);
    return;
  }
  for (int d = 0; d <= max_deg; ++d) {
    cur.push_back(d);
    multi_indices(len, max_deg - d, cur, out);
    cur.pop_back();
  }
}

double sphere_mass(int n) {
  const double r = std::sqrt(2.0 * n);
  const double log_area = std::log(2.0) + 0.5 * (n + 1) * std::log(std::numbers::pi) - std::lgamma(0.5 * (n + 1)) +
                          n * std::log(r);
  return std::exp(log_area - 0.5 * n * std::log(4.0 * std::numbers::pi) - 0.25 * r * r);
}

}  // namespace

Background Background::plane(int n) {
  require_positive(n, "n");
  return Background(Plane{n});
}

Background Background::sphere(int n) {
  require_positive(n, "n");
  return Background(Sphere{n});
}

Background Background::cylinder(int k, int m) {
  require_positive(k, "k");
  require_positive(m, "m");
  return Background(Cylinder{k, m});
}

int Background::n_total() const {
  return std::visit(overloaded{[](const Plane& p) { return p.n; }, [](const Sphere& s) { return s.n; },
                               [](const Cylinder& c) { return c.k + c.m; }},
                    kind_);
}

int Background::ambient_dim() const {
  return std::visit(overloaded{[](const Plane& p) { return p.n; }, [](const Sphere& s) { return s.n + 1; },
                               [](const Cylinder& c) { return c.k + 1 + c.m; }},
                    kind_);
}

double Background::sphere_radius() const {
  return std::visit(overloaded{[](const Plane&) { return 0.0; }, [](const Sphere& s) { return std::sqrt(2.0 * s.n); },
                               [](const Cylinder& c) { return std::sqrt(2.0 * c.k); }},
                    kind_);
}

bool Background::supports_evaluation() const {
  return std::visit(overloaded{[](const Plane& p) { return p.n <= 3; }, [](const Sphere& s) { return s.n <= 2; },
                               [](const Cylinder& c) { return c.k == 1 && c.m == 1; }},
                    kind_);
}

std::string Background::name() const {
  return std::visit(
      overloaded{[](const Plane& p) { return "plane(n=" + std::to_string(p.n) + ")"; },
                 [](const Sphere& s) { return "sphere(n=" + std::to_string(s.n) + ")"; },
                 [](const Cylinder& c) {
                   return "cylinder(k=" + std::to_string(c.k) + ",m=" + std::to_string(c.m) + ")";
                 }},
      kind_);
}

double kappa(const Background& bg) {
  // <H, A> = (k / r^2) g on the round factor with r^2 = 2k, zero on flat directions.
  return bg.is_plane() ? 0.0 : 0.5;
}

std::uint64_t harmonic_dimension(int n, int k) {
  if (k < 0) return 0;
  auto binom = [](std::int64_t a, std::int64_t b) -> std::uint64_t {
    if (b < 0 || a < b) return 0;
    b = std::min(b, a - b);
    std::uint64_t r = 1;
    for (std::int64_t i = 1; i <= b; ++i) r = r * static_cast<std::uint64_t>(a - b + i) / static_cast<std::uint64_t>(i);
    return r;
  };
  return binom(n + k, n) - binom(n + k - 2, n);
}

Mode make_mode(const Background& bg, std::vector<int> index) {
  validate_index(bg, index);
  const auto f = mu_fraction(bg, index);
  return Mode{std::move(index), static_cast<double>(f.num) / static_cast<double>(f.den)};
}

bool mode_less(const Background& bg, const Mode& a, const Mode& b) {
  const auto fa = mu_fraction(bg, a.index);
  const auto fb = mu_fraction(bg, b.index);
  if (fa.num * fb.den != fb.num * fa.den) return fa.num * fb.den < fb.num * fa.den;
  return a.index < b.index;
}

std::vector<Mode> enumerate_modes(const Background& bg, double mu_cutoff) {
  if (!(mu_cutoff >= 0.0)) throw std::invalid_argument("enumerate_modes: mu_cutoff must be >= 0");
  constexpr double slack = 1e-12;
  std::vector<std::vector<int>> indices;

  std::visit(overloaded{[&](const Plane& p) {
                          std::vector<int> cur;
                          multi_indices(p.n, static_cast<int>(std::floor(2.0 * mu_cutoff + slack)), cur, indices);
                        },
                        [&](const Sphere& s) {
                          for (int k = 0; static_cast<double>(k) * (k + s.n - 1) / (2.0 * s.n) <= mu_cutoff + slack;
                               ++k) {
                            const auto dim = harmonic_dimension(s.n, k);
                            for (std::uint64_t j = 0; j < dim; ++j) indices.push_back({k, static_cast<int>(j)});
                          }
                        },
                        [&](const Cylinder& c) {
                          for (int l = 0; static_cast<double>(l) * (l + c.k - 1) / (2.0 * c.k) <= mu_cutoff + slack;
                               ++l) {
                            const double rest = mu_cutoff - static_cast<double>(l) * (l + c.k - 1) / (2.0 * c.k);
                            std::vector<std::vector<int>> axial;
                            std::vector<int> cur;
                            multi_indices(c.m, static_cast<int>(std::floor(2.0 * rest + slack)), cur, axial);
                            const auto dim = harmonic_dimension(c.k, l);
                            for (std::uint64_t j = 0; j < dim; ++j)
                              for (const auto& ax : axial) {
                                std::vector<int> idx{l, static_cast<int>(j)};
                                idx.insert(idx.end(), ax.begin(), ax.end());
                                indices.push_back(std::move(idx));
                              }
                          }
                        }},
             bg.kind());

  std::vector<Mode> modes;
  modes.reserve(indices.size());
  for (auto& idx : indices) {
    Mode m = make_mode(bg, std::move(idx));
    if (m.mu <= mu_cutoff + slack) modes.push_back(std::move(m));
  }
  std::sort(modes.begin(), modes.end(), [&](const Mode& a, const Mode& b) { return mode_less(bg, a, b); });
  return modes;
}

double first_nonzero_mu(const Background& bg) {
  return std::visit(overloaded{[](const Plane&) { return 0.5; },
                               // degree-1 harmonics: k(k+n-1)/(2n) at k = 1
                               [](const Sphere&) { return 0.5; },
                               [](const Cylinder& c) {
                                 const double round = 1.0 * c.k / (2.0 * c.k);
                                 return std::min(round, 0.5);
                               }},
                    bg.kind());
}

double gaussian_density(const Background& bg) {
  return std::visit(overloaded{[](const Plane&) { return 1.0; }, [](const Sphere& s) { return sphere_mass(s.n); },
                               [](const Cylinder& c) { return sphere_mass(c.k); }},
                    bg.kind());
}

}  // namespace pfreq
