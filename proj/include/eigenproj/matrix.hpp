#pragma once

#include <algorithm>
#include <utility>
#include <vector>

#include "eigenproj/scalar.hpp"

namespace eigenproj {

// Dense square matrix over one scalar backend. Small orders only; every
// operation is a straightforward O(n^2)/O(n^3) loop.
template <class S>
class Matrix {
 public:
  explicit Matrix(int n) : n_(n), e_(static_cast<size_t>(n) * n, field<S>::zero()) {
    if (n < 1) throw NonSquareError("matrix order must be >= 1");
  }

  static Matrix identity(int n) {
    Matrix m(n);
    for (int i = 0; i < n; ++i) m(i, i) = field<S>::one();
    return m;
  }

  int order() const { return n_; }

  S& operator()(int i, int j) { return e_[static_cast<size_t>(i) * n_ + j]; }
  const S& operator()(int i, int j) const { return e_[static_cast<size_t>(i) * n_ + j]; }

  Matrix& operator+=(const Matrix& o) {
    for (size_t k = 0; k < e_.size(); ++k) e_[k] += o.e_[k];
    return *this;
  }
  Matrix& operator-=(const Matrix& o) {
    for (size_t k = 0; k < e_.size(); ++k) e_[k] -= o.e_[k];
    return *this;
  }
  Matrix& operator*=(const S& s) {
    for (auto& x : e_) x *= s;
    return *this;
  }

  friend Matrix operator+(Matrix a, const Matrix& b) { return a += b; }
  friend Matrix operator-(Matrix a, const Matrix& b) { return a -= b; }
  friend Matrix operator*(Matrix a, const S& s) { return a *= s; }
  friend Matrix operator*(const S& s, Matrix a) { return a *= s; }

  Matrix operator-() const {
    Matrix r(n_);
    for (size_t k = 0; k < e_.size(); ++k) r.e_[k] = -e_[k];
    return r;
  }

  friend Matrix operator*(const Matrix& a, const Matrix& b) {
    const int n = a.n_;
    Matrix r(n);
    for (int i = 0; i < n; ++i) {
      for (int k = 0; k < n; ++k) {
        const S& aik = a(i, k);
        if constexpr (field<S>::is_exact) {
          if (aik.is_zero()) continue;
        }
        for (int j = 0; j < n; ++j) r(i, j) += aik * b(k, j);
      }
    }
    return r;
  }

  friend bool operator==(const Matrix& a, const Matrix& b) {
    return a.n_ == b.n_ && a.e_ == b.e_;
  }

  S trace() const {
    S t = field<S>::zero();
    for (int i = 0; i < n_; ++i) t += (*this)(i, i);
    return t;
  }

  Matrix transpose() const {
    Matrix r(n_);
    for (int i = 0; i < n_; ++i)
      for (int j = 0; j < n_; ++j) r(j, i) = (*this)(i, j);
    return r;
  }

  // Conjugate transpose.
  Matrix adjoint() const {
    Matrix r(n_);
    for (int i = 0; i < n_; ++i)
      for (int j = 0; j < n_; ++j) r(j, i) = field<S>::conj((*this)(i, j));
    return r;
  }

 private:
  int n_;
  std::vector<S> e_;
};

template <class S>
double max_abs(const Matrix<S>& a) {
  double m = 0.0;
  for (int i = 0; i < a.order(); ++i)
    for (int j = 0; j < a.order(); ++j) m = std::max(m, field<S>::mag_approx(a(i, j)));
  return m;
}

// Maximum absolute row sum.
template <class S>
double inf_norm(const Matrix<S>& a) {
  double m = 0.0;
  for (int i = 0; i < a.order(); ++i) {
    double row = 0.0;
    for (int j = 0; j < a.order(); ++j) row += field<S>::mag_approx(a(i, j));
    m = std::max(m, row);
  }
  return m;
}

template <class S>
double max_abs_diff(const Matrix<S>& a, const Matrix<S>& b) {
  double m = 0.0;
  for (int i = 0; i < a.order(); ++i)
    for (int j = 0; j < a.order(); ++j) m = std::max(m, field<S>::mag_approx(a(i, j) - b(i, j)));
  return m;
}

// max|entry| <= tau_zero * scale under the floating backend; exact zero under
// the exact backend. `scale` is the natural magnitude of the computation that
// produced `a`, supplied by the caller.
template <class S>
bool is_zero_matrix(const Matrix<S>& a, const ToleranceConfig& tol, double scale) {
  if constexpr (field<S>::is_exact) {
    (void)tol;
    (void)scale;
    for (int i = 0; i < a.order(); ++i)
      for (int j = 0; j < a.order(); ++j)
        if (!a(i, j).is_zero()) return false;
    return true;
  } else {
    return max_abs(a) <= tol.tau_zero * scale;
  }
}

// A^k by repeated squaring; A^0 = I.
template <class S>
Matrix<S> mat_pow(Matrix<S> a, long long k) {
  if (k < 0) throw Error(Errc::usage, "matrix power requires k >= 0");
  Matrix<S> r = Matrix<S>::identity(a.order());
  while (k > 0) {
    if (k & 1) r = r * a;
    k >>= 1;
    if (k > 0) a = a * a;
  }
  return r;
}

namespace detail {

// Pivot admissibility threshold for elimination: tau_rank * n * max|entry|
// of the matrix being reduced. Exact backend pivots on any nonzero entry.
template <class S>
double pivot_threshold(const Matrix<S>& a, const ToleranceConfig& tol) {
  return tol.tau_rank * a.order() * max_abs(a);
}

// Row echelon reduction in place; returns pivot column per step.
// `threshold` only matters for the floating backend.
template <class S>
std::vector<int> row_echelon(Matrix<S>& m, double threshold) {
  const int n = m.order();
  std::vector<int> pivot_cols;
  int row = 0;
  for (int col = 0; col < n && row < n; ++col) {
    int best = -1;
    typename field<S>::mag_type best_mag{};
    for (int i = row; i < n; ++i) {
      auto mg = field<S>::mag(m(i, col));
      if (best < 0 || best_mag < mg) {
        best = i;
        best_mag = mg;
      }
    }
    if (best < 0 || field<S>::negligible(m(best, col), threshold)) continue;
    if (best != row)
      for (int j = 0; j < n; ++j) std::swap(m(row, j), m(best, j));
    for (int i = row + 1; i < n; ++i) {
      S f = m(i, col) / m(row, col);
      m(i, col) = field<S>::zero();
      for (int j = col + 1; j < n; ++j) m(i, j) -= f * m(row, j);
    }
    pivot_cols.push_back(col);
    ++row;
  }
  return pivot_cols;
}

// Gauss-Jordan inverse with partial pivoting. Pivot is inadmissible below
// `threshold` (floating) or when exactly zero (exact).
template <class S>
Matrix<S> gauss_inverse(const Matrix<S>& a, double threshold) {
  const int n = a.order();
  Matrix<S> m = a;
  Matrix<S> inv = Matrix<S>::identity(n);
  for (int col = 0; col < n; ++col) {
    int best = col;
    auto best_mag = field<S>::mag(m(col, col));
    for (int i = col + 1; i < n; ++i) {
      auto mg = field<S>::mag(m(i, col));
      if (best_mag < mg) {
        best = i;
        best_mag = mg;
      }
    }
    if (field<S>::negligible(m(best, col), threshold))
      throw SingularError("no admissible pivot in column " + std::to_string(col));
    if (best != col) {
      for (int j = 0; j < n; ++j) {
        std::swap(m(col, j), m(best, j));
        std::swap(inv(col, j), inv(best, j));
      }
    }
    S p = m(col, col);
    for (int j = 0; j < n; ++j) {
      m(col, j) /= p;
      inv(col, j) /= p;
    }
    for (int i = 0; i < n; ++i) {
      if (i == col) continue;
      S f = m(i, col);
      if constexpr (field<S>::is_exact) {
        if (f.is_zero()) continue;
      }
      for (int j = 0; j < n; ++j) {
        m(i, j) -= f * m(col, j);
        inv(i, j) -= f * inv(col, j);
      }
    }
  }
  return inv;
}

}  // namespace detail

template <class S>
int rank(const Matrix<S>& a, const ToleranceConfig& tol) {
  Matrix<S> m = a;
  return static_cast<int>(detail::row_echelon(m, detail::pivot_threshold(a, tol)).size());
}

template <class S>
Matrix<S> inverse(const Matrix<S>& a, const ToleranceConfig& tol) {
  return detail::gauss_inverse(a, detail::pivot_threshold(a, tol));
}

// Columns spanning the null space, extracted from the reduced echelon form.
// Returned as column vectors; empty when the matrix has full rank.
template <class S>
std::vector<std::vector<S>> null_space_basis(const Matrix<S>& a, const ToleranceConfig& tol) {
  const int n = a.order();
  Matrix<S> m = a;
  const double threshold = detail::pivot_threshold(a, tol);
  std::vector<int> pivot_cols = detail::row_echelon(m, threshold);

  // Back-substitute to reduced form: clear above each pivot, normalize pivots.
  for (int r = static_cast<int>(pivot_cols.size()) - 1; r >= 0; --r) {
    int c = pivot_cols[r];
    S p = m(r, c);
    for (int j = c; j < n; ++j) m(r, j) /= p;
    for (int i = 0; i < r; ++i) {
      S f = m(i, c);
      if constexpr (field<S>::is_exact) {
        if (f.is_zero()) continue;
      }
      for (int j = c; j < n; ++j) m(i, j) -= f * m(r, j);
    }
  }

  std::vector<bool> is_pivot(n, false);
  for (int c : pivot_cols) is_pivot[c] = true;

  std::vector<std::vector<S>> basis;
  for (int freec = 0; freec < n; ++freec) {
    if (is_pivot[freec]) continue;
    std::vector<S> v(n, field<S>::zero());
    v[freec] = field<S>::one();
    for (size_t r = 0; r < pivot_cols.size(); ++r) {
      if (pivot_cols[r] < freec) v[pivot_cols[r]] = -m(static_cast<int>(r), freec);
    }
    basis.push_back(std::move(v));
  }
  return basis;
}

}  // namespace eigenproj
