#pragma once

#include <utility>
#include <vector>

#include "eigenproj/matrix.hpp"
#include "eigenproj/scalar.hpp"

namespace eigenproj {

// Scalar polynomial, coefficients ascending by degree. Canonical form has a
// nonzero leading coefficient (under the zero policy); the zero polynomial
// is the empty list.
template <class S>
struct Poly {
  std::vector<S> c;

  Poly() = default;
  explicit Poly(std::vector<S> coeffs) : c(std::move(coeffs)) {}

  static Poly zero() { return Poly{}; }
  static Poly constant(const S& v) { return Poly{std::vector<S>{v}}; }
  static Poly one() { return constant(field<S>::one()); }
  static Poly x() { return Poly{std::vector<S>{field<S>::zero(), field<S>::one()}}; }

  bool empty() const { return c.empty(); }
  int degree() const { return static_cast<int>(c.size()) - 1; }  // -1 for zero

  const S& operator[](size_t k) const { return c[k]; }
  S& operator[](size_t k) { return c[k]; }
};

template <class S>
double max_abs_coeff(const Poly<S>& p) {
  double m = 0.0;
  for (const auto& x : p.c) m = std::max(m, field<S>::mag_approx(x));
  return m;
}

// Strip negligible leading coefficients; the threshold is relative to the
// largest coefficient magnitude.
template <class S>
Poly<S> normalized(Poly<S> p, const ToleranceConfig& tol) {
  const double threshold = tol.tau_zero * max_abs_coeff(p);
  while (!p.c.empty() && field<S>::negligible(p.c.back(), threshold)) p.c.pop_back();
  return p;
}

template <class S>
Poly<S> poly_add(const Poly<S>& a, const Poly<S>& b) {
  Poly<S> r;
  r.c.resize(std::max(a.c.size(), b.c.size()), field<S>::zero());
  for (size_t k = 0; k < a.c.size(); ++k) r.c[k] += a.c[k];
  for (size_t k = 0; k < b.c.size(); ++k) r.c[k] += b.c[k];
  return r;
}

template <class S>
Poly<S> poly_scale(Poly<S> p, const S& s) {
  for (auto& x : p.c) x *= s;
  return p;
}

template <class S>
Poly<S> poly_mul(const Poly<S>& a, const Poly<S>& b) {
  if (a.empty() || b.empty()) return Poly<S>::zero();
  Poly<S> r;
  r.c.resize(a.c.size() + b.c.size() - 1, field<S>::zero());
  for (size_t i = 0; i < a.c.size(); ++i)
    for (size_t j = 0; j < b.c.size(); ++j) r.c[i + j] += a.c[i] * b.c[j];
  return r;
}

template <class S>
Poly<S> poly_sub(const Poly<S>& a, const Poly<S>& b) {
  return poly_add(a, poly_scale(b, -field<S>::one()));
}

template <class S>
S poly_eval(const Poly<S>& p, const S& x) {
  S acc = field<S>::zero();
  for (size_t k = p.c.size(); k-- > 0;) acc = acc * x + p.c[k];
  return acc;
}

// Horner evaluation at a matrix argument; the constant term multiplies I.
template <class S>
Matrix<S> poly_eval_matrix(const Poly<S>& p, const Matrix<S>& a) {
  const int n = a.order();
  Matrix<S> acc(n);
  if (p.empty()) return acc;
  for (size_t k = p.c.size(); k-- > 0;) {
    if (k + 1 < p.c.size()) acc = acc * a;
    for (int i = 0; i < n; ++i) acc(i, i) += p.c[k];
  }
  return acc;
}

// Upper bound on the magnitudes met while evaluating p at a matrix with the
// given norm; the natural scale for is-this-zero decisions on the result.
template <class S>
double poly_eval_scale(const Poly<S>& p, double mat_norm) {
  double scale = 0.0;
  double pw = 1.0;
  for (const auto& coeff : p.c) {
    scale += field<S>::mag_approx(coeff) * pw;
    pw *= std::max(1.0, mat_norm);
  }
  return std::max(scale, 1.0);
}

template <class S>
Poly<S> poly_derivative(const Poly<S>& p) {
  Poly<S> r;
  if (p.c.size() <= 1) return r;
  r.c.resize(p.c.size() - 1);
  for (size_t k = 1; k < p.c.size(); ++k) r.c[k - 1] = p.c[k] * field<S>::from_int(static_cast<long long>(k));
  return r;
}

// Long division: num = quot * den + rem with deg rem < deg den.
template <class S>
std::pair<Poly<S>, Poly<S>> poly_divmod(const Poly<S>& num, const Poly<S>& den,
                                        const ToleranceConfig& tol) {
  Poly<S> d = normalized(den, tol);
  if (d.empty()) throw ZeroPolynomialError("polynomial division by zero");
  Poly<S> rem = num;
  if (rem.c.size() < d.c.size()) return {Poly<S>::zero(), rem};
  Poly<S> quot;
  quot.c.resize(rem.c.size() - d.c.size() + 1, field<S>::zero());
  const S lead = d.c.back();
  for (size_t k = quot.c.size(); k-- > 0;) {
    S f = rem.c[k + d.c.size() - 1] / lead;
    quot.c[k] = f;
    for (size_t j = 0; j < d.c.size(); ++j) rem.c[k + j] -= f * d.c[j];
  }
  rem.c.resize(d.c.size() - 1);
  return {quot, rem};
}

// Expanded product of (x - root_k)^{mult_k}, monic.
template <class S>
Poly<S> poly_from_roots(const std::vector<S>& roots, const std::vector<int>& mults) {
  Poly<S> p = Poly<S>::one();
  for (size_t k = 0; k < roots.size(); ++k) {
    Poly<S> lin{std::vector<S>{-roots[k], field<S>::one()}};
    for (int m = 0; m < mults[k]; ++m) p = poly_mul(p, lin);
  }
  return p;
}

}  // namespace eigenproj
