#pragma once

#include <Eigen/Dense>

#include <cstddef>
#include <map>
#include <vector>

namespace pfreq {

/// Sparse multivariate polynomial over a fixed number of ambient variables.
///
/// Eigenfunctions of every supported background are restrictions of ambient
/// polynomials, so value, gradient and Hessian are all exact.
class Polynomial {
 public:
  using Exponents = std::vector<int>;

  explicit Polynomial(std::size_t num_vars = 0) : num_vars_(num_vars) {}

  static Polynomial constant(std::size_t num_vars, double c);
  /// The coordinate function y_i.
  static Polynomial variable(std::size_t num_vars, std::size_t i);

  std::size_t num_vars() const { return num_vars_; }
  const std::map<Exponents, double>& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }
  int degree() const;

  void add_term(const Exponents& exps, double coeff);

  Polynomial& operator+=(const Polynomial& other);
  Polynomial& operator-=(const Polynomial& other);
  Polynomial& operator*=(double s);
  friend Polynomial operator+(Polynomial a, const Polynomial& b) { return a += b; }
  friend Polynomial operator-(Polynomial a, const Polynomial& b) { return a -= b; }
  friend Polynomial operator*(Polynomial a, double s) { return a *= s; }
  friend Polynomial operator*(double s, Polynomial a) { return a *= s; }
  friend Polynomial operator*(const Polynomial& a, const Polynomial& b);

  Polynomial derivative(std::size_t i) const;
  double operator()(const Eigen::VectorXd& y) const;

 private:
  std::size_t num_vars_;
  std::map<Exponents, double> terms_;
};

/// Value, ambient gradient and ambient Hessian of a polynomial at a point.
struct PolynomialJet {
  double value = 0.0;
  Eigen::VectorXd gradient;
  Eigen::MatrixXd hessian;
};

/// Polynomial with its first and second partial derivatives precomputed.
class DifferentiatedPolynomial {
 public:
  DifferentiatedPolynomial() = default;
  explicit DifferentiatedPolynomial(Polynomial p);

  const Polynomial& polynomial() const { return p_; }
  PolynomialJet jet(const Eigen::VectorXd& y) const;
  /// Value and gradient only; the Hessian is left empty.
  PolynomialJet first_order_jet(const Eigen::VectorXd& y) const;

 private:
  Polynomial p_;
  std::vector<Polynomial> grad_;
  std::vector<std::vector<Polynomial>> hess_;
};

}  // namespace pfreq
