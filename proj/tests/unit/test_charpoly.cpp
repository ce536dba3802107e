#include "doctest.h"

#include "eigenproj/charpoly.hpp"
#include "eigenproj/poly.hpp"
#include "helpers.hpp"
#include "oracles.hpp"

using namespace eigenproj;
using namespace eigenproj::testhelpers;

TEST_CASE("characteristic coefficients match the permutation-sum oracle exactly") {
  const ToleranceConfig etol = ToleranceConfig::exact();
  Matrix<ExactScalar> a = emat({{2, -1, 0, 3}, {1, 1, 1, 0}, {0, 4, -2, 1}, {5, 0, 0, 1}});
  Poly<ExactScalar> fast = faddeev(a, etol).char_poly();
  Poly<ExactScalar> slow = oracles::charpoly_leibniz(a);
  REQUIRE(fast.c.size() == slow.c.size());
  for (size_t k = 0; k < fast.c.size(); ++k) CHECK(fast.c[k] == slow.c[k]);
}

TEST_CASE("characteristic coefficients match the oracle on the floating backend") {
  const ToleranceConfig ftol = ToleranceConfig::floating();
  Matrix<Cx> a = cmat({{Cx(1, 0), Cx(2, 0), Cx(0, 1), Cx(0, 0), Cx(1, 0)},
                       {Cx(0, 0), Cx(-1, 0), Cx(3, 0), Cx(0, 0), Cx(0, 0)},
                       {Cx(1, 0), Cx(0, 0), Cx(2, 0), Cx(1, 0), Cx(0, 0)},
                       {Cx(0, 0), Cx(1, 0), Cx(0, 0), Cx(0, -1), Cx(2, 0)},
                       {Cx(1, 0), Cx(0, 0), Cx(0, 0), Cx(1, 0), Cx(3, 0)}});
  Poly<Cx> fast = faddeev(a, ftol).char_poly();
  Poly<Cx> slow = oracles::charpoly_leibniz(a);
  REQUIRE(fast.c.size() == slow.c.size());
  double coeff_scale = std::max(max_abs_coeff(fast), 1.0);
  for (size_t k = 0; k < fast.c.size(); ++k)
    CHECK(std::abs(fast.c[k] - slow.c[k]) <= 1e-12 * coeff_scale);
}

TEST_CASE("the characteristic polynomial annihilates its matrix") {
  const ToleranceConfig etol = ToleranceConfig::exact();
  Matrix<ExactScalar> a = emat({{0, 1, 0}, {0, 0, 1}, {6, -11, 6}});
  Poly<ExactScalar> psi = faddeev(a, etol).char_poly();
  Matrix<ExactScalar> res = poly_eval_matrix(psi, a);
  CHECK(is_zero_matrix(res, etol, 0.0));
}

TEST_CASE("determinant and zero-root multiplicity from the trailing coefficients") {
  const ToleranceConfig etol = ToleranceConfig::exact();
  CharData<ExactScalar> tri = faddeev(emat({{2, 5, 1}, {0, -3, 7}, {0, 0, 4}}), etol);
  CHECK(tri.determinant() == ExactScalar(-24));
  CHECK(tri.v == 0);

  CharData<ExactScalar> sing = faddeev(emat({{0, 1, 0}, {0, 0, 0}, {0, 0, 3}}), etol);
  CHECK(sing.v == 2);
  CHECK(sing.determinant().is_zero());
  CHECK(sing.v_well_conditioned);
}

TEST_CASE("adjugate coefficients of lambda I - A") {
  const ToleranceConfig etol = ToleranceConfig::exact();
  Matrix<ExactScalar> a = emat({{2, 0}, {0, 3}});
  CharData<ExactScalar> cd = faddeev(a, etol);
  REQUIRE(cd.adj_coeffs.size() == 2);
  // adj(lambda I - diag(2,3)) = diag(lambda-3, lambda-2): leading coefficient
  // is the identity, constant coefficient is A - tr(A) I.
  CHECK(exact_equal(cd.adj_coeffs[0], Matrix<ExactScalar>::identity(2)));
  Matrix<ExactScalar> expect(2);
  expect(0, 0) = ExactScalar(-3);
  expect(1, 1) = ExactScalar(-2);
  CHECK(exact_equal(cd.adj_coeffs[1], expect));
}

TEST_CASE("index from the rank sequence") {
  const ToleranceConfig etol = ToleranceConfig::exact();
  // J3(0) + a simple nonzero eigenvalue: index 3.
  Matrix<ExactScalar> a = emat({{0, 1, 0, 0}, {0, 0, 1, 0}, {0, 0, 0, 0}, {0, 0, 0, 5}});
  IndexInfo info = index_of(a, etol);
  CHECK(info.nu == 3);
  REQUIRE(info.rank_seq.size() >= 4);
  CHECK(info.rank_seq[0] == 4);  // rank of A^0
  CHECK(info.rank_seq[1] == 3);
  CHECK(info.rank_seq[2] == 2);
  CHECK(info.rank_seq[3] == 1);

  CHECK(index_of(emat({{1, 0}, {0, 2}}), etol).nu == 0);
  CHECK(index_of(emat({{0, 0}, {0, 0}}), etol).nu == 1);
}

TEST_CASE("index of a power follows the ceiling rule") {
  CHECK(index_power_check(3, 1) == 3);
  CHECK(index_power_check(3, 2) == 2);
  CHECK(index_power_check(3, 3) == 1);
  CHECK(index_power_check(3, 4) == 1);
  CHECK(index_power_check(4, 2) == 2);
  CHECK(index_power_check(0, 3) == 0);
}
