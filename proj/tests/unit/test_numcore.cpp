#include "doctest.h"

#include "eigenproj/errors.hpp"
#include "eigenproj/matrix.hpp"
#include "eigenproj/scalar.hpp"
#include "helpers.hpp"

using namespace eigenproj;
using namespace eigenproj::testhelpers;

TEST_CASE("exact scalar arithmetic is complex-rational") {
  ExactScalar a(Rational(1), Rational(2));   // 1 + 2i
  ExactScalar b(Rational(3), Rational(-1));  // 3 - i
  ExactScalar prod = a * b;
  CHECK(prod.re == 5);
  CHECK(prod.im == 5);

  ExactScalar q = prod / b;
  CHECK(q == a);

  ExactScalar half(1, 2);
  CHECK((half + half) == ExactScalar(1));
  CHECK_THROWS_AS(a / ExactScalar(0), SingularError);
}

TEST_CASE("field traits") {
  CHECK(field<Cx>::from_ratio(1, 4) == Cx(0.25, 0.0));
  CHECK(field<ExactScalar>::imag_unit() * field<ExactScalar>::imag_unit() ==
        ExactScalar(-1));
  CHECK(field<ExactScalar>::conj(ExactScalar(Rational(2), Rational(3))) ==
        ExactScalar(Rational(2), Rational(-3)));
  // Exact negligibility ignores the threshold entirely.
  CHECK(field<ExactScalar>::negligible(ExactScalar(0), 0.0));
  CHECK_FALSE(field<ExactScalar>::negligible(ExactScalar(1, 1000000), 1.0));
}

TEST_CASE("matrix multiply, power, and norms") {
  Matrix<Cx> a = cmat({{Cx(1, 0), Cx(2, 0)}, {Cx(3, 0), Cx(4, 0)}});
  Matrix<Cx> a2 = a * a;
  CHECK(a2(0, 0) == Cx(7, 0));
  CHECK(a2(1, 1) == Cx(22, 0));

  CHECK(max_abs_diff(mat_pow(a, 0), Matrix<Cx>::identity(2)) == 0.0);
  CHECK(max_abs_diff(mat_pow(a, 3), a * a * a) == 0.0);

  CHECK(inf_norm(a) == doctest::Approx(7.0));  // max row sum of moduli
  CHECK(max_abs(a) == doctest::Approx(4.0));
}

TEST_CASE("adjoint conjugates and transposes") {
  Matrix<Cx> a = cmat({{Cx(1, 1), Cx(0, 2)}, {Cx(3, 0), Cx(0, -4)}});
  Matrix<Cx> h = a.adjoint();
  CHECK(h(0, 0) == Cx(1, -1));
  CHECK(h(0, 1) == Cx(3, 0));
  CHECK(h(1, 0) == Cx(0, -2));
  CHECK(h(1, 1) == Cx(0, 4));
}

TEST_CASE("inverse round trip on both backends") {
  const ToleranceConfig ftol = ToleranceConfig::floating();
  Matrix<Cx> a = cmat({{Cx(2, 0), Cx(1, 0)}, {Cx(1, 0), Cx(1, 0)}});
  Matrix<Cx> ia = inverse(a, ftol);
  CHECK(max_abs_diff(a * ia, Matrix<Cx>::identity(2)) < 1e-14);

  const ToleranceConfig etol = ToleranceConfig::exact();
  Matrix<ExactScalar> e = emat({{2, 1, 0}, {1, 1, 0}, {0, 3, 1}});
  Matrix<ExactScalar> ie = inverse(e, etol);
  CHECK(exact_equal(e * ie, Matrix<ExactScalar>::identity(3)));

  Matrix<ExactScalar> sing = emat({{1, 2}, {2, 4}});
  CHECK_THROWS_AS(inverse(sing, etol), SingularError);
}

TEST_CASE("rank and null space") {
  const ToleranceConfig etol = ToleranceConfig::exact();
  Matrix<ExactScalar> a = emat({{1, 2, 3}, {2, 4, 6}, {1, 0, 1}});
  CHECK(rank(a, etol) == 2);

  auto basis = null_space_basis(a, etol);
  REQUIRE(basis.size() == 1);
  // Each basis vector must actually be annihilated.
  for (const auto& x : basis) {
    for (int i = 0; i < a.order(); ++i) {
      ExactScalar acc;
      for (int j = 0; j < a.order(); ++j) acc += a(i, j) * x[static_cast<size_t>(j)];
      CHECK(acc.is_zero());
    }
  }

  CHECK(rank(Matrix<ExactScalar>(4), etol) == 0);
  CHECK(null_space_basis(Matrix<ExactScalar>(2), etol).size() == 2);
}

TEST_CASE("zero test is scale-relative on the floating backend") {
  const ToleranceConfig ftol = ToleranceConfig::floating();
  Matrix<Cx> dust(2);
  dust(0, 0) = Cx(1e-12, 0);
  CHECK(is_zero_matrix(dust, ftol, 1.0));         // 1e-12 <= 1e-10 * 1
  CHECK_FALSE(is_zero_matrix(dust, ftol, 1e-4));  // 1e-12 >  1e-10 * 1e-4
  CHECK(is_zero_matrix(dust, ftol, 100.0));       // larger scale is more permissive

  Matrix<ExactScalar> tiny(1);
  tiny(0, 0) = ExactScalar(1, 1000000000);
  CHECK_FALSE(is_zero_matrix(tiny, ToleranceConfig::exact(), 1e9));
}
