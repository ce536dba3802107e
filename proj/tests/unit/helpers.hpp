#pragma once

#include <initializer_list>
#include <vector>

#include "eigenproj/matrix.hpp"
#include "eigenproj/scalar.hpp"

namespace eigenproj::testhelpers {

// Square matrix from row-major complex literals.
inline Matrix<Cx> cmat(std::initializer_list<std::initializer_list<Cx>> rows) {
  const int n = static_cast<int>(rows.size());
  Matrix<Cx> m(n);
  int i = 0;
  for (const auto& row : rows) {
    int j = 0;
    for (const Cx& v : row) m(i, j++) = v;
    ++i;
  }
  return m;
}

// Square matrix of exact rationals from integer literals.
inline Matrix<ExactScalar> emat(std::initializer_list<std::initializer_list<long long>> rows) {
  const int n = static_cast<int>(rows.size());
  Matrix<ExactScalar> m(n);
  int i = 0;
  for (const auto& row : rows) {
    int j = 0;
    for (long long v : row) m(i, j++) = ExactScalar(v);
    ++i;
  }
  return m;
}

inline bool exact_equal(const Matrix<ExactScalar>& a, const Matrix<ExactScalar>& b) {
  if (a.order() != b.order()) return false;
  for (int i = 0; i < a.order(); ++i)
    for (int j = 0; j < a.order(); ++j)
      if (a(i, j) != b(i, j)) return false;
  return true;
}

}  // namespace eigenproj::testhelpers
