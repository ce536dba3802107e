#include "doctest.h"

#include "eigenproj/applications.hpp"
#include "helpers.hpp"

using namespace eigenproj;
using namespace eigenproj::testhelpers;

namespace {
const ToleranceConfig ftol = ToleranceConfig::floating();
const ToleranceConfig etol = ToleranceConfig::exact();

Matrix<ExactScalar> ratmat(std::initializer_list<std::initializer_list<std::pair<long long, long long>>> rows) {
  const int n = static_cast<int>(rows.size());
  Matrix<ExactScalar> m(n);
  int i = 0;
  for (const auto& row : rows) {
    int j = 0;
    for (const auto& [num, den] : row) m(i, j++) = ExactScalar(num, den);
    ++i;
  }
  return m;
}
}  // namespace

TEST_CASE("a periodic chain still has exact mean limits") {
  Matrix<ExactScalar> p = emat({{0, 1}, {1, 0}});
  Matrix<ExactScalar> lim = markov_limit(p, etol);
  Matrix<ExactScalar> expect = ratmat({{{1, 2}, {1, 2}}, {{1, 2}, {1, 2}}});
  CHECK(exact_equal(lim, expect));
}

TEST_CASE("an absorbing chain funnels all mass into the absorbing state") {
  Matrix<ExactScalar> p = ratmat({{{1, 1}, {0, 1}}, {{1, 2}, {1, 2}}});
  Matrix<ExactScalar> lim = markov_limit(p, etol);
  Matrix<ExactScalar> expect = emat({{1, 0}, {1, 0}});
  CHECK(exact_equal(lim, expect));
}

TEST_CASE("the mean limit agrees with a long Cesaro average") {
  Matrix<Cx> p = cmat({{Cx(0.0, 0), Cx(0.5, 0), Cx(0.5, 0)},
                       {Cx(0.25, 0), Cx(0.5, 0), Cx(0.25, 0)},
                       {Cx(0.5, 0), Cx(0.25, 0), Cx(0.25, 0)}});
  Matrix<Cx> lim = markov_limit(p, ftol);
  Matrix<Cx> slow = cesaro_oracle(p, 50000);
  CHECK(max_abs_diff(lim, slow) < 1e-3);
  // Rows of the limit are probability vectors.
  for (int i = 0; i < 3; ++i) {
    Cx sum;
    for (int j = 0; j < 3; ++j) sum += lim(i, j);
    CHECK(std::abs(sum - Cx(1, 0)) < 1e-10);
  }
}

TEST_CASE("bad transition matrices are rejected") {
  CHECK_THROWS_AS(markov_limit(emat({{1, 1}, {0, 1}}), etol), NotStochasticError);
  CHECK_THROWS_AS(markov_limit(emat({{2, -1}, {0, 1}}), etol), NotStochasticError);

  Matrix<ExactScalar> complex_entry = emat({{1, 0}, {0, 1}});
  complex_entry(0, 0) = ExactScalar(Rational(1), Rational(1));  // 1 + i
  CHECK_THROWS_AS(markov_limit(complex_entry, etol), NotStochasticError);

  Matrix<Cx> off = cmat({{Cx(0.6, 0), Cx(0.3, 0)}, {Cx(0.5, 0), Cx(0.5, 0)}});
  CHECK_THROWS_AS(markov_limit(off, ftol), NotStochasticError);
}

TEST_CASE("mild floating row-sum error is renormalized, not rejected") {
  // Rows sum to 1 up to 1e-12, inside the n * tau_zero budget.
  Matrix<Cx> p = cmat({{Cx(0.5 + 5e-13, 0), Cx(0.5, 0)}, {Cx(0.0, 0), Cx(1.0, 0)}});
  Matrix<Cx> q = validated_stochastic(p, ftol);
  for (int i = 0; i < 2; ++i) {
    Cx sum;
    for (int j = 0; j < 2; ++j) sum += q(i, j);
    CHECK(std::abs(sum - Cx(1, 0)) < 1e-15);
  }
}

TEST_CASE("forest projection of an undirected path") {
  Matrix<ExactScalar> l = emat({{1, -1}, {-1, 1}});
  Matrix<ExactScalar> z = laplacian_forest_projection(l, etol);
  Matrix<ExactScalar> expect = ratmat({{{1, 2}, {1, 2}}, {{1, 2}, {1, 2}}});
  CHECK(exact_equal(z, expect));
}

TEST_CASE("forest projection of the complete graph on three vertices") {
  Matrix<ExactScalar> l = emat({{2, -1, -1}, {-1, 2, -1}, {-1, -1, 2}});
  Matrix<ExactScalar> z = laplacian_forest_projection(l, etol);
  Matrix<ExactScalar> expect = ratmat({{{1, 3}, {1, 3}, {1, 3}},
                                       {{1, 3}, {1, 3}, {1, 3}},
                                       {{1, 3}, {1, 3}, {1, 3}}});
  CHECK(exact_equal(z, expect));
}

TEST_CASE("a disconnected graph keeps one projection block per component") {
  Matrix<ExactScalar> l = emat({{1, -1, 0, 0}, {-1, 1, 0, 0}, {0, 0, 0, 0}, {0, 0, 0, 0}});
  Matrix<ExactScalar> z = laplacian_forest_projection(l, etol);
  Matrix<ExactScalar> expect(4);
  expect(0, 0) = ExactScalar(1, 2);
  expect(0, 1) = ExactScalar(1, 2);
  expect(1, 0) = ExactScalar(1, 2);
  expect(1, 1) = ExactScalar(1, 2);
  expect(2, 2) = ExactScalar(1);
  expect(3, 3) = ExactScalar(1);
  CHECK(exact_equal(z, expect));
}

TEST_CASE("bad Laplacians are rejected") {
  CHECK_THROWS_AS(laplacian_forest_projection(emat({{1, -1}, {0, 1}}), etol),
                  NotLaplacianError);
  CHECK_THROWS_AS(laplacian_forest_projection(emat({{-1, 1}, {1, -1}}), etol),
                  NotLaplacianError);
}
