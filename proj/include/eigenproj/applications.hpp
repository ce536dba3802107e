#pragma once

#include <string>

#include "eigenproj/eigenprojection.hpp"
#include "eigenproj/matrix.hpp"

namespace eigenproj {

// Validate a row-stochastic transition matrix: real, nonnegative, rows
// summing to 1 within n * tau_zero. Floating rows are renormalized before
// use, since file-sourced chains carry rounding.
template <class S>
Matrix<S> validated_stochastic(const Matrix<S>& P, const ToleranceConfig& tol) {
  const int n = P.order();
  const double threshold = tol.tau_zero;

  if constexpr (field<S>::is_exact) {
    for (int i = 0; i < n; ++i) {
      S sum = field<S>::zero();
      for (int j = 0; j < n; ++j) {
        const S& e = P(i, j);
        if (e.im != 0 || e.re < 0)
          throw NotStochasticError("entry (" + std::to_string(i) + "," + std::to_string(j) +
                                   ") is not a nonnegative real");
        sum += e;
      }
      if (!(sum == field<S>::one()))
        throw NotStochasticError("row " + std::to_string(i) + " does not sum to 1");
    }
    return P;
  } else {
    Matrix<S> Q = P;
    for (int i = 0; i < n; ++i) {
      double sum = 0.0;
      for (int j = 0; j < n; ++j) {
        const Cx z = to_complex(P(i, j));
        if (std::abs(z.imag()) > threshold)
          throw NotStochasticError("entry (" + std::to_string(i) + "," + std::to_string(j) +
                                   ") is not real");
        if (z.real() < -threshold)
          throw NotStochasticError("entry (" + std::to_string(i) + "," + std::to_string(j) +
                                   ") is negative");
        sum += z.real();
      }
      if (std::abs(sum - 1.0) > threshold * n)
        throw NotStochasticError("row " + std::to_string(i) + " sums to " + std::to_string(sum) +
                                 ", not 1");
      for (int j = 0; j < n; ++j) Q(i, j) = Q(i, j) * S(1.0 / sum);
    }
    return Q;
  }
}

// Limiting matrix of mean probabilities of a finite homogeneous Markov
// chain: the eigenprojection of I - P.
template <class S>
Matrix<S> markov_limit(const Matrix<S>& P, const ToleranceConfig& tol) {
  Matrix<S> Q = validated_stochastic(P, tol);
  return eigenprojection_default(Matrix<S>::identity(P.order()) - Q, tol).Z;
}

// Finite Cesaro average (1/k) * sum of P^t for t = 0..k-1. Converges to the
// limiting matrix at rate O(1/k); serves as an independent slow oracle.
template <class S>
Matrix<S> cesaro_oracle(const Matrix<S>& P, long long k) {
  if (k < 1) throw Error(Errc::usage, "the Cesaro average needs at least one term");
  const int n = P.order();
  Matrix<S> sum = Matrix<S>::identity(n);
  Matrix<S> power = Matrix<S>::identity(n);
  for (long long t = 1; t < k; ++t) {
    power = power * P;
    sum += power;
  }
  return sum * (field<S>::one() / field<S>::from_int(k));
}

// Validate a directed-graph Laplacian: real, zero row sums, nonpositive
// off-diagonal entries.
template <class S>
void validate_laplacian(const Matrix<S>& L, const ToleranceConfig& tol) {
  const int n = L.order();
  const double scale = std::max(1.0, max_abs(L));

  if constexpr (field<S>::is_exact) {
    for (int i = 0; i < n; ++i) {
      S sum = field<S>::zero();
      for (int j = 0; j < n; ++j) {
        const S& e = L(i, j);
        if (e.im != 0)
          throw NotLaplacianError("entry (" + std::to_string(i) + "," + std::to_string(j) +
                                  ") is not real");
        if (i != j && e.re > 0)
          throw NotLaplacianError("off-diagonal entry (" + std::to_string(i) + "," +
                                  std::to_string(j) + ") is positive");
        sum += e;
      }
      if (!sum.is_zero())
        throw NotLaplacianError("row " + std::to_string(i) + " does not sum to 0");
    }
  } else {
    const double threshold = tol.tau_zero * scale;
    for (int i = 0; i < n; ++i) {
      double sum = 0.0;
      for (int j = 0; j < n; ++j) {
        const Cx z = to_complex(L(i, j));
        if (std::abs(z.imag()) > threshold)
          throw NotLaplacianError("entry (" + std::to_string(i) + "," + std::to_string(j) +
                                  ") is not real");
        const double re = z.real();
        if (i != j && re > threshold)
          throw NotLaplacianError("off-diagonal entry (" + std::to_string(i) + "," +
                                  std::to_string(j) + ") is positive");
        sum += re;
      }
      if (std::abs(sum) > threshold * n)
        throw NotLaplacianError("row " + std::to_string(i) + " sums to " + std::to_string(sum) +
                                ", not 0");
    }
  }
}

// Matrix of maximum converging forests of a weighted digraph: the
// eigenprojection of its Laplacian.
template <class S>
Matrix<S> laplacian_forest_projection(const Matrix<S>& L, const ToleranceConfig& tol) {
  validate_laplacian(L, tol);
  return eigenprojection_default(L, tol).Z;
}

}  // namespace eigenproj
