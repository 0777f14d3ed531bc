#pragma once

#include <cstdint>
#include <string>
#include <variant>
#include <vector>

namespace pfreq {

/// Flat R^n, a static self-shrinker.
struct Plane {
  int n = 1;
  bool operator==(const Plane&) const = default;
};

/// Round S^n of radius sqrt(2n) in R^{n+1}.
struct Sphere {
  int n = 1;
  bool operator==(const Sphere&) const = default;
};

/// S^k of radius sqrt(2k) times R^m, in R^{k+1+m}.
struct Cylinder {
  int k = 1;
  int m = 1;
  bool operator==(const Cylinder&) const = default;
};

/// An analytic self-shrinker M, always held at unit scale (t = -1).
///
/// The flow is M_t = sqrt(-t) M. Every computation in this library happens in
/// the self-similar frame y = x / sqrt(-t), where the shrinker, the Gaussian
/// measure d mu_t and the drift Laplacian spectrum are all time independent.
class Background {
 public:
  using Kind = std::variant<Plane, Sphere, Cylinder>;

  static Background plane(int n);
  static Background sphere(int n);
  static Background cylinder(int k, int m);

  const Kind& kind() const { return kind_; }
  bool is_plane() const { return std::holds_alternative<Plane>(kind_); }
  bool is_sphere() const { return std::holds_alternative<Sphere>(kind_); }
  bool is_cylinder() const { return std::holds_alternative<Cylinder>(kind_); }

  /// Intrinsic dimension.
  int n_total() const;
  /// Dimension of the ambient space used for point coordinates.
  int ambient_dim() const;
  /// Radius of the round factor at unit scale; 0 for the plane.
  double sphere_radius() const;
  /// True when pointwise evaluation, quadrature and geometry are available.
  bool supports_evaluation() const;

  /// e.g. "sphere(n=2)".
  std::string name() const;

  bool operator==(const Background&) const = default;

 private:
  explicit Background(Kind k) : kind_(k) {}
  Kind kind_;
};

/// An eigenfunction label of the unit-scale drift Laplacian, L_1 phi = -mu phi.
///
/// Index layout: Plane -> Hermite degree per axis; Sphere -> {degree k,
/// label in [0, dim H_k)}; Cylinder -> {degree l, label, axial degrees...}.
struct Mode {
  std::vector<int> index;
  double mu = 0.0;

  bool operator==(const Mode& o) const { return index == o.index; }
};

/// Least kappa with <H, A(v,v)> <= kappa |v|^2 on the unit-scale shrinker.
double kappa(const Background& bg);

/// Builds a mode from its multi-index, validating it and computing mu.
Mode make_mode(const Background& bg, std::vector<int> index);

/// All modes with mu <= mu_cutoff, sorted by (mu, index).
std::vector<Mode> enumerate_modes(const Background& bg, double mu_cutoff);

/// Strict-weak order used everywhere modes are sorted.
bool mode_less(const Background& bg, const Mode& a, const Mode& b);

/// Smallest nonzero eigenvalue of -L_1.
double first_nonzero_mu(const Background& bg);

/// Total mass of d mu_{-1} on the shrinker (its Gaussian density).
double gaussian_density(const Background& bg);

/// Dimension of degree-k spherical harmonics on S^n.
std::uint64_t harmonic_dimension(int n, int k);

}  // namespace pfreq
