#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <cmath>
#include <complex>
#include <cstdint>
#include <string>

#include "eigenproj/errors.hpp"

namespace eigenproj {

using Rational = boost::multiprecision::cpp_rational;
using Cx = std::complex<double>;

enum class Backend { exact, floating };

// Thresholds used by every zero/rank/cluster decision. Exact arithmetic
// runs with all thresholds at zero; floating point must keep them positive.
struct ToleranceConfig {
  double tau_zero = 0.0;     // entry-is-zero threshold, relative to a caller scale
  double tau_rank = 0.0;     // pivot threshold in elimination
  double tau_cluster = 0.0;  // eigenvalue dedup radius

  static ToleranceConfig exact() { return ToleranceConfig{0.0, 0.0, 0.0}; }
  static ToleranceConfig floating() { return ToleranceConfig{1e-10, 1e-10, 1e-6}; }

  bool is_exact() const { return tau_zero == 0.0 && tau_rank == 0.0 && tau_cluster == 0.0; }
};

// Complex number over exact rationals. Division is exact: multiply by the
// conjugate and divide by the (rational) squared modulus.
struct ExactScalar {
  Rational re{0};
  Rational im{0};

  ExactScalar() = default;
  ExactScalar(Rational r) : re(std::move(r)) {}
  ExactScalar(Rational r, Rational i) : re(std::move(r)), im(std::move(i)) {}
  ExactScalar(long long r) : re(r) {}
  ExactScalar(long long num, long long den) : re(Rational(num) / den) {}

  bool is_zero() const { return re == 0 && im == 0; }

  ExactScalar operator-() const { return {-re, -im}; }

  ExactScalar& operator+=(const ExactScalar& o) {
    re += o.re;
    im += o.im;
    return *this;
  }
  ExactScalar& operator-=(const ExactScalar& o) {
    re -= o.re;
    im -= o.im;
    return *this;
  }
  ExactScalar& operator*=(const ExactScalar& o) {
    Rational r = re * o.re - im * o.im;
    Rational i = re * o.im + im * o.re;
    re = std::move(r);
    im = std::move(i);
    return *this;
  }
  ExactScalar& operator/=(const ExactScalar& o) {
    if (o.is_zero()) throw SingularError("exact division by zero");
    Rational d = o.re * o.re + o.im * o.im;
    Rational r = (re * o.re + im * o.im) / d;
    Rational i = (im * o.re - re * o.im) / d;
    re = std::move(r);
    im = std::move(i);
    return *this;
  }

  friend ExactScalar operator+(ExactScalar a, const ExactScalar& b) { return a += b; }
  friend ExactScalar operator-(ExactScalar a, const ExactScalar& b) { return a -= b; }
  friend ExactScalar operator*(ExactScalar a, const ExactScalar& b) { return a *= b; }
  friend ExactScalar operator/(ExactScalar a, const ExactScalar& b) { return a /= b; }
  friend bool operator==(const ExactScalar& a, const ExactScalar& b) {
    return a.re == b.re && a.im == b.im;
  }
  friend bool operator!=(const ExactScalar& a, const ExactScalar& b) { return !(a == b); }
};

// Field access used by the generic matrix/polynomial code. The floating
// backend decides "negligible" against a threshold; the exact backend only
// accepts a true zero, no matter the threshold.
template <class S>
struct field;

template <>
struct field<Cx> {
  static constexpr bool is_exact = false;
  using mag_type = double;

  static Cx zero() { return Cx(0.0, 0.0); }
  static Cx one() { return Cx(1.0, 0.0); }
  static Cx imag_unit() { return Cx(0.0, 1.0); }
  static Cx from_int(long long v) { return Cx(double(v), 0.0); }
  static Cx from_ratio(long long num, long long den) { return Cx(double(num) / double(den), 0.0); }
  static mag_type mag(const Cx& x) { return std::abs(x); }
  static double mag_approx(const Cx& x) { return std::abs(x); }
  static bool negligible(const Cx& x, double threshold) { return std::abs(x) <= threshold; }
  static Cx conj(const Cx& x) { return std::conj(x); }
  static Cx to_value(const Cx& x) { return x; }
};

template <>
struct field<ExactScalar> {
  static constexpr bool is_exact = true;
  using mag_type = Rational;

  static ExactScalar zero() { return ExactScalar(); }
  static ExactScalar one() { return ExactScalar(1); }
  static ExactScalar imag_unit() { return ExactScalar(Rational(0), Rational(1)); }
  static ExactScalar from_int(long long v) { return ExactScalar(v); }
  static ExactScalar from_ratio(long long num, long long den) { return ExactScalar(num, den); }
  // Exact magnitude surrogate: |re| + |im|. Zero iff the value is zero, and
  // monotone enough for pivot selection.
  static mag_type mag(const ExactScalar& x) { return abs(x.re) + abs(x.im); }
  static double mag_approx(const ExactScalar& x) {
    return std::abs(static_cast<double>(x.re)) + std::abs(static_cast<double>(x.im));
  }
  static bool negligible(const ExactScalar& x, double /*threshold*/) { return x.is_zero(); }
  static ExactScalar conj(const ExactScalar& x) { return {x.re, -x.im}; }
  static Cx to_value(const ExactScalar& x) {
    return Cx(static_cast<double>(x.re), static_cast<double>(x.im));
  }
};

inline Cx to_complex(const Cx& x) { return x; }
inline Cx to_complex(const ExactScalar& x) { return field<ExactScalar>::to_value(x); }

// Exact conversion of a double (a binary fraction) to a rational.
inline Rational rational_from_double(double v) {
  if (v == 0.0) return Rational(0);
  if (!std::isfinite(v)) throw ParseError("non-finite value cannot become rational");
  int exp = 0;
  double mant = std::frexp(v, &exp);  // v = mant * 2^exp, |mant| in [0.5, 1)
  long long m = static_cast<long long>(std::ldexp(mant, 53));
  exp -= 53;
  Rational r(m);
  if (exp > 0) {
    r *= boost::multiprecision::pow(boost::multiprecision::cpp_int(2), unsigned(exp));
  } else if (exp < 0) {
    r /= boost::multiprecision::pow(boost::multiprecision::cpp_int(2), unsigned(-exp));
  }
  return r;
}

inline ExactScalar exact_from_complex(const Cx& z) {
  return ExactScalar(rational_from_double(z.real()), rational_from_double(z.imag()));
}

}  // namespace eigenproj
