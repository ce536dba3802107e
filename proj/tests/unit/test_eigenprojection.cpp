#include "doctest.h"

#include "eigenproj/eigenprojection.hpp"
#include "helpers.hpp"

using namespace eigenproj;
using namespace eigenproj::testhelpers;

namespace {
const ToleranceConfig ftol = ToleranceConfig::floating();
const ToleranceConfig etol = ToleranceConfig::exact();
}  // namespace

TEST_CASE("annihilator split and h normalization") {
  // lambda^2 (lambda - 1): t = 2, q = 1, p_1 = -1.
  Poly<ExactScalar> phi{std::vector<ExactScalar>{
      ExactScalar(0), ExactScalar(0), ExactScalar(-1), ExactScalar(1)}};
  auto parts = split_annihilator(phi, etol);
  CHECK(parts.t == 2);
  CHECK(parts.q == 1);
  REQUIRE(parts.p.size() == 1);
  CHECK(parts.p[0] == ExactScalar(-1));

  Poly<ExactScalar> h = build_h(parts);
  CHECK(poly_eval(h, ExactScalar(0)) == ExactScalar(1));

  // Pure power lambda^t: h is identically one.
  Poly<ExactScalar> pure{std::vector<ExactScalar>{
      ExactScalar(0), ExactScalar(0), ExactScalar(1)}};
  auto pure_parts = split_annihilator(pure, etol);
  CHECK(pure_parts.q == 0);
  Poly<ExactScalar> hp = build_h(pure_parts);
  REQUIRE(hp.c.size() == 1);
  CHECK(hp.c[0] == ExactScalar(1));

  Poly<ExactScalar> zero;
  CHECK_THROWS_AS(split_annihilator(zero, etol), ZeroPolynomialError);
}

TEST_CASE("projection of a diagonal matrix selects the zero eigenspace") {
  Matrix<Cx> a = cmat({{Cx(2, 0), Cx(0, 0)}, {Cx(0, 0), Cx(0, 0)}});
  Matrix<Cx> expect = cmat({{Cx(0, 0), Cx(0, 0)}, {Cx(0, 0), Cx(1, 0)}});

  CHECK(max_abs_diff(eigenprojection_default(a, ftol).Z, expect) < 1e-14);
  CHECK(max_abs_diff(eigenprojection_with_u(a, 1, ftol).Z, expect) < 1e-14);

  CharData<Cx> cd = faddeev(a, ftol);
  CHECK(max_abs_diff(eigenprojection_faddeev_ratio(a, 1, cd, ftol), expect) < 1e-14);
  CHECK(max_abs_diff(eigenprojection_limit(a, 1, ftol), expect) < 1e-9);
  CHECK(max_abs_diff(eigenprojection_nullspace(a, 1, ftol), expect) < 1e-14);
}

TEST_CASE("projection of a nilpotent matrix is the identity") {
  Matrix<Cx> a = cmat({{Cx(0, 0), Cx(1, 0)}, {Cx(0, 0), Cx(0, 0)}});
  Eigenprojection<Cx> p = eigenprojection_default(a, ftol);
  CHECK(p.u_used == 2);
  CHECK(max_abs_diff(p.Z, Matrix<Cx>::identity(2)) == 0.0);
  CHECK(max_abs_diff(eigenprojection_limit(a, 2, ftol), Matrix<Cx>::identity(2)) < 1e-9);
}

TEST_CASE("a power below the index is rejected") {
  Matrix<Cx> a = cmat({{Cx(0, 0), Cx(1, 0)}, {Cx(0, 0), Cx(0, 0)}});
  CHECK_THROWS_AS(eigenprojection_with_u(a, 1, ftol), InvariantViolationError);

  // u = 0 would test the projection of A^0 = I regardless of A.
  try {
    eigenprojection_with_u(a, 0, ftol);
    FAIL("u = 0 must be rejected");
  } catch (const Error& e) {
    CHECK(e.code() == Errc::usage);
  }
}

TEST_CASE("nonsingular input short-circuits to the zero projection") {
  Matrix<Cx> a = cmat({{Cx(1, 0), Cx(1, 0)}, {Cx(0, 0), Cx(3, 0)}});
  Eigenprojection<Cx> p = eigenprojection_default(a, ftol);
  CHECK(max_abs(p.Z) == 0.0);

  CharData<Cx> cd = faddeev(a, ftol);
  CHECK_THROWS_AS(eigenprojection_faddeev_ratio(a, 1, cd, ftol), Error);
}

TEST_CASE("all constructions agree on a defective singular matrix") {
  // J2(0) + simple eigenvalue 3, conjugated by an integer shear.
  Matrix<Cx> t = cmat({{Cx(1, 0), Cx(2, 0), Cx(0, 0)},
                       {Cx(0, 0), Cx(1, 0), Cx(-1, 0)},
                       {Cx(0, 0), Cx(0, 0), Cx(1, 0)}});
  Matrix<Cx> tinv = cmat({{Cx(1, 0), Cx(-2, 0), Cx(-2, 0)},
                          {Cx(0, 0), Cx(1, 0), Cx(1, 0)},
                          {Cx(0, 0), Cx(0, 0), Cx(1, 0)}});
  Matrix<Cx> j = cmat({{Cx(0, 0), Cx(1, 0), Cx(0, 0)},
                       {Cx(0, 0), Cx(0, 0), Cx(0, 0)},
                       {Cx(0, 0), Cx(0, 0), Cx(3, 0)}});
  Matrix<Cx> a = t * j * tinv;
  CHECK(max_abs_diff(t * tinv, Matrix<Cx>::identity(3)) == 0.0);

  Eigenprojection<Cx> main = eigenprojection_default(a, ftol);
  CHECK(main.u_used == 2);
  CharData<Cx> cd = faddeev(a, ftol);
  CHECK(max_abs_diff(main.Z, eigenprojection_faddeev_ratio(a, 2, cd, ftol)) < 1e-10);
  CHECK(max_abs_diff(main.Z, eigenprojection_limit(a, 2, ftol)) < 1e-8);
  CHECK(max_abs_diff(main.Z, eigenprojection_nullspace(a, 2, ftol)) < 1e-10);

  CheckReport rep = verify_characterizations(a, main.Z, ftol);
  CHECK(rep.all_pass());
}

TEST_CASE("exact backend produces exact projections") {
  Matrix<ExactScalar> a = emat({{0, 1, 0}, {0, 0, 0}, {0, 0, 2}});
  Matrix<ExactScalar> expect = emat({{1, 0, 0}, {0, 1, 0}, {0, 0, 0}});
  Eigenprojection<ExactScalar> p = eigenprojection_default(a, etol);
  CHECK(exact_equal(p.Z, expect));

  CharData<ExactScalar> cd = faddeev(a, etol);
  CHECK(exact_equal(eigenprojection_faddeev_ratio(a, 2, cd, etol), expect));
  CHECK(exact_equal(eigenprojection_nullspace(a, 2, etol), expect));
}

TEST_CASE("the projection is invariant under powers of the matrix") {
  Matrix<ExactScalar> a = emat({{0, 1, 0, 0}, {0, 0, 0, 0}, {0, 0, 3, 1}, {0, 0, 0, 3}});
  Matrix<ExactScalar> z1 = eigenprojection_default(a, etol).Z;
  Matrix<ExactScalar> z2 = eigenprojection_default(a * a, etol).Z;
  Matrix<ExactScalar> z3 = eigenprojection_default(a * a * a, etol).Z;
  CHECK(exact_equal(z1, z2));
  CHECK(exact_equal(z1, z3));
}

TEST_CASE("characterization report flags a wrong projection") {
  Matrix<Cx> a = cmat({{Cx(0, 0), Cx(1, 0)}, {Cx(0, 0), Cx(0, 0)}});
  // The zero matrix is idempotent and commutes but cannot be the projection
  // of a singular matrix.
  CheckReport rep = verify_characterizations(a, Matrix<Cx>(2), ftol);
  CHECK_FALSE(rep.all_pass());
}
