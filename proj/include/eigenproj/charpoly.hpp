#pragma once

#include <vector>

#include "eigenproj/matrix.hpp"
#include "eigenproj/poly.hpp"

namespace eigenproj {

// Output of the Faddeev-LeVerrier recurrence: characteristic coefficients
// a_0..a_n (a_0 = 1, psi = sum a_{n-j} lambda^j) together with the matrix
// coefficients A_0..A_{n-1} of adj(lambda I - A), and the multiplicity v of
// zero as a root of psi (count of trailing zero coefficients).
template <class S>
struct CharData {
  std::vector<S> a;
  std::vector<Matrix<S>> adj_coeffs;
  int v = 0;
  // False when the first nonzero trailing coefficient sits too close to the
  // zero threshold for v to be trusted (floating backend only).
  bool v_well_conditioned = true;

  // psi as a Poly, coefficients ascending: [a_n, a_{n-1}, ..., a_1, 1].
  Poly<S> char_poly() const {
    Poly<S> p;
    p.c.assign(a.rbegin(), a.rend());
    return p;
  }

  S determinant() const {
    // psi(0) = a_n = (-1)^n det A.
    S d = a.back();
    if (a.size() % 2 == 0) d = -d;  // a has n+1 entries; n odd <=> even size
    return d;
  }
};

// Margin above the zero threshold below which the trailing coefficient is
// considered too ill-conditioned to pin v down.
inline constexpr double kTrailingCoeffMargin = 1e3;

template <class S>
CharData<S> faddeev(const Matrix<S>& A, const ToleranceConfig& tol) {
  const int n = A.order();
  CharData<S> cd;
  cd.a.reserve(n + 1);
  cd.a.push_back(field<S>::one());
  cd.adj_coeffs.reserve(n);
  cd.adj_coeffs.push_back(Matrix<S>::identity(n));

  Matrix<S> prev = cd.adj_coeffs.back();
  for (int k = 1; k <= n; ++k) {
    Matrix<S> m = A * prev;
    S ak = -(m.trace() / field<S>::from_int(k));
    if (k < n) {
      Matrix<S> next = m;
      for (int i = 0; i < n; ++i) next(i, i) += ak;
      cd.adj_coeffs.push_back(next);
      prev = std::move(next);
    }
    cd.a.push_back(ak);
  }

  double coeff_scale = 0.0;
  for (const auto& x : cd.a) coeff_scale = std::max(coeff_scale, field<S>::mag_approx(x));
  const double threshold = tol.tau_zero * coeff_scale;
  int v = 0;
  while (v < n && field<S>::negligible(cd.a[n - v], threshold)) ++v;
  cd.v = v;
  if constexpr (!field<S>::is_exact) {
    if (v < n) {
      cd.v_well_conditioned =
          field<S>::mag_approx(cd.a[n - v]) >= kTrailingCoeffMargin * threshold;
    }
  }
  return cd;
}

// ind A together with the rank sequence rank A^0 = n, ..., rank A^nu, and
// the stabilized rank r (total multiplicity of the nonzero eigenvalues).
struct IndexInfo {
  int nu = 0;
  std::vector<int> rank_seq;
  int r = 0;
};

template <class S>
IndexInfo index_of(const Matrix<S>& A, const ToleranceConfig& tol) {
  const int n = A.order();
  IndexInfo info;
  info.rank_seq.push_back(n);
  Matrix<S> power = Matrix<S>::identity(n);
  int prev_rank = n;
  for (int k = 1; k <= n + 1; ++k) {
    power = power * A;
    int rk = rank(power, tol);
    if (rk == prev_rank) {
      info.nu = k - 1;
      info.r = rk;
      return info;
    }
    info.rank_seq.push_back(rk);
    prev_rank = rk;
  }
  // Unreachable: ranks strictly decrease at most n times.
  info.nu = n;
  info.r = prev_rank;
  return info;
}

// Predicted index of A^k from the index of A: the least t with k*t >= nu.
inline int index_power_check(int nu, int k) {
  if (k < 1) throw Error(Errc::usage, "index power check requires k >= 1");
  return (nu + k - 1) / k;
}

}  // namespace eigenproj
