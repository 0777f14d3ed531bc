#include "pfreq/polynomial.hpp"

#include <cmath>
#include <stdexcept>

namespace pfreq {

Polynomial Polynomial::constant(std::size_t num_vars, double c) {
  Polynomial p(num_vars);
  p.add_term(Exponents(num_vars, 0), c);
  return p;
}

Polynomial Polynomial::variable(std::size_t num_vars, std::size_t i) {
  if (i >= num_vars) throw std::out_of_range("Polynomial::variable: index out of range");
  Polynomial p(num_vars);
  Exponents e(num_vars, 0);
  e[i] = 1;
  p.add_term(e, 1.0);
  return p;
}

int Polynomial::degree() const {
  int d = -1;
  for (const auto& [e, c] : terms_) {
    int s = 0;
    for (int k : e) s += k;
    d = std::max(d, s);
  }
  return d;
}

void Polynomial::add_term(const Exponents& exps, double coeff) {
  if (exps.size() != num_vars_) throw std::invalid_argument("Polynomial: exponent arity mismatch");
  if (coeff == 0.0) return;
  auto [it, inserted] = terms_.emplace(exps, coeff);
  if (!inserted) {
    it->second += coeff;
    if (it->second == 0.0) terms_.erase(it);
  }
}

Polynomial& Polynomial::operator+=(const Polynomial& other) {
  if (num_vars_ != other.num_vars_) throw std::invalid_argument("Polynomial: arity mismatch");
  for (const auto& [e, c] : other.terms_) add_term(e, c);
  return *this;
}

Polynomial& Polynomial::operator-=(const Polynomial& other) {
  if (num_vars_ != other.num_vars_) throw std::invalid_argument("Polynomial: arity mismatch");
  for (const auto& [e, c] : other.terms_) add_term(e, -c);
  return *this;
}

Polynomial& Polynomial::operator*=(double s) {
  if (s == 0.0) {
    terms_.clear();
    return *this;
  }
  for (auto& [e, c] : terms_) c *= s;
  return *this;
}

Polynomial operator*(const Polynomial& a, const Polynomial& b) {
  if (a.num_vars_ != b.num_vars_) throw std::invalid_argument("Polynomial: arity mismatch");
  Polynomial out(a.num_vars_);
  Polynomial::Exponents e(a.num_vars_);
  for (const auto& [ea, ca] : a.terms_) {
    for (const auto& [eb, cb] : b.terms_) {
      for (std::size_t i = 0; i < e.size(); ++i) e[i] = ea[i] + eb[i];
      out.add_term(e, ca * cb);
    }
  }
  return out;
}

Polynomial Polynomial::derivative(std::size_t i) const {
  Polynomial out(num_vars_);
  for (const auto& [e, c] : terms_) {
    if (e[i] == 0) continue;
    Exponents d = e;
    d[i] -= 1;
    out.add_term(d, c * e[i]);
  }
  return out;
}

double Polynomial::operator()(const Eigen::VectorXd& y) const {
  if (static_cast<std::size_t>(y.size()) != num_vars_)
    throw std::invalid_argument("Polynomial: point dimension mismatch");
  double sum = 0.0;
  for (const auto& [e, c] : terms_) {
    double term = c;
    for (std::size_t i = 0; i < num_vars_; ++i) {
      for (int k = 0; k < e[i]; ++k) term *= y[static_cast<Eigen::Index>(i)];
    }
    sum += term;
  }
  return sum;
}

DifferentiatedPolynomial::DifferentiatedPolynomial(Polynomial p) : p_(std::move(p)) {
  const std::size_t d = p_.num_vars();
  grad_.reserve(d);
  for (std::size_t i = 0; i < d; ++i) grad_.push_back(p_.derivative(i));
  hess_.assign(d, std::vector<Polynomial>(d, Polynomial(d)));
  for (std::size_t i = 0; i < d; ++i)
    for (std::size_t j = i; j < d; ++j) {
      hess_[i][j] = grad_[i].derivative(j);
      hess_[j][i] = hess_[i][j];
    }
}

PolynomialJet DifferentiatedPolynomial::jet(const Eigen::VectorXd& y) const {
  const auto d = static_cast<Eigen::Index>(p_.num_vars());
  PolynomialJet j;
  j.value = p_(y);
  j.gradient.resize(d);
  j.hessian.resize(d, d);
  for (Eigen::Index a = 0; a < d; ++a) {
    j.gradient[a] = grad_[static_cast<std::size_t>(a)](y);
    for (Eigen::Index b = a; b < d; ++b) {
      j.hessian(a, b) = hess_[static_cast<std::size_t>(a)][static_cast<std::size_t>(b)](y);
      j.hessian(b, a) = j.hessian(a, b);
    }
  }
  return j;
}

PolynomialJet DifferentiatedPolynomial::first_order_jet(const Eigen::VectorXd& y) const {
  const auto d = static_cast<Eigen::Index>(p_.num_vars());
  PolynomialJet j;
  j.value = p_(y);
  j.gradient.resize(d);
  for (Eigen::Index a = 0; a < d; ++a) j.gradient[a] = grad_[static_cast<std::size_t>(a)](y);
  return j;
}

}  // namespace pfreq
