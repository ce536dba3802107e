#include "doctest.h"

#include <complex>

#include "eigenproj/spectral.hpp"
#include "helpers.hpp"

using namespace eigenproj;
using namespace eigenproj::testhelpers;

namespace {
const ToleranceConfig ftol = ToleranceConfig::floating();
const ToleranceConfig etol = ToleranceConfig::exact();
}  // namespace

TEST_CASE("floating eigenvalue extraction clusters repeated roots") {
  Matrix<Cx> a = cmat({{Cx(1, 0), Cx(1, 0), Cx(0, 0)},
                       {Cx(0, 0), Cx(1, 0), Cx(0, 0)},
                       {Cx(0, 0), Cx(0, 0), Cx(4, 0)}});
  Spectrum<Cx> sp = eigenvalues(a, ftol);
  REQUIRE(sp.count() == 2);
  // Sorted by modulus, largest first.
  CHECK(std::abs(sp.lambdas[0] - Cx(4, 0)) < 1e-8);
  CHECK(sp.mults[0] == 1);
  CHECK(std::abs(sp.lambdas[1] - Cx(1, 0)) < 1e-8);
  CHECK(sp.mults[1] == 2);
  CHECK(sp.recon_residual < 1e-8);
}

TEST_CASE("near-zero centroids snap to exactly zero") {
  Matrix<Cx> a = cmat({{Cx(0, 0), Cx(1, 0)}, {Cx(0, 0), Cx(0, 0)}});
  Spectrum<Cx> sp = eigenvalues(a, ftol);
  REQUIRE(sp.count() == 1);
  CHECK(sp.lambdas[0] == Cx(0, 0));
  CHECK(sp.mults[0] == 2);
}

TEST_CASE("exact extraction finds rational eigenvalues") {
  Matrix<ExactScalar> a(3);
  a(0, 0) = ExactScalar(1, 2);
  a(1, 1) = ExactScalar(-3);
  a(1, 2) = ExactScalar(7);
  a(2, 2) = ExactScalar(-3);
  Spectrum<ExactScalar> sp = eigenvalues(a, etol);
  REQUIRE(sp.count() == 2);
  CHECK(sp.lambdas[0] == ExactScalar(-3));
  CHECK(sp.mults[0] == 2);
  CHECK(sp.lambdas[1] == ExactScalar(1, 2));
  CHECK(sp.mults[1] == 1);
}

TEST_CASE("exact extraction refuses an irrational spectrum") {
  Matrix<ExactScalar> a = emat({{0, 1}, {2, 0}});  // lambda^2 = 2
  CHECK_THROWS_AS(eigenvalues(a, etol), IrrationalSpectrumError);
}

TEST_CASE("a supplied spectrum is validated, not trusted") {
  Matrix<ExactScalar> a = emat({{0, 1, 0}, {0, 0, 0}, {0, 0, 5}});
  std::vector<ExactScalar> good{ExactScalar(0), ExactScalar(5)};
  Spectrum<ExactScalar> sp = spectrum_from_values(a, good, etol);
  CHECK(sp.count() == 2);

  std::vector<ExactScalar> wrong{ExactScalar(0), ExactScalar(4)};
  CHECK_THROWS_AS(spectrum_from_values(a, wrong, etol), InvariantViolationError);

  std::vector<ExactScalar> incomplete{ExactScalar(5)};
  CHECK_THROWS_AS(spectrum_from_values(a, incomplete, etol), InvariantViolationError);
}

TEST_CASE("components of a single Jordan block") {
  Matrix<ExactScalar> a = emat({{5, 1}, {0, 5}});
  ComponentSet<ExactScalar> cs = components(a, etol);
  REQUIRE(cs.count() == 1);
  CHECK(cs.lambdas[0] == ExactScalar(5));
  CHECK(cs.nus[0] == 2);
  REQUIRE(cs.Z[0].size() == 2);
  CHECK(exact_equal(cs.Z[0][0], Matrix<ExactScalar>::identity(2)));
  CHECK(exact_equal(cs.Z[0][1], emat({{0, 1}, {0, 0}})));
}

TEST_CASE("floating components survive extraction error on a defective eigenvalue") {
  // The clustered double root comes back as 5 + delta, so the shifted matrix
  // is only singular up to delta and its square is pure noise. The component
  // machinery must still recognize that noise as the zero matrix.
  Matrix<Cx> a = cmat({{Cx(5, 0), Cx(1, 0)}, {Cx(0, 0), Cx(5, 0)}});
  ComponentSet<Cx> cs = components(a, ftol);
  REQUIRE(cs.count() == 1);
  CHECK(std::abs(cs.lambdas[0] - Cx(5, 0)) < 1e-8);
  CHECK(cs.nus[0] == 2);
  REQUIRE(cs.Z[0].size() == 2);
  CHECK(max_abs_diff(cs.Z[0][0], Matrix<Cx>::identity(2)) < 1e-8);
  CHECK(max_abs_diff(cs.Z[0][1], cmat({{Cx(0, 0), Cx(1, 0)}, {Cx(0, 0), Cx(0, 0)}})) < 1e-8);
}

TEST_CASE("components resolve projections for every eigenvalue") {
  Matrix<ExactScalar> a = emat({{0, 1, 0}, {0, 0, 0}, {0, 0, 2}});
  ComponentSet<ExactScalar> cs = components(a, etol);
  REQUIRE(cs.count() == 2);
  // Projections sum to the identity.
  Matrix<ExactScalar> sum(3);
  for (int k = 0; k < cs.count(); ++k) sum += cs.Z[k][0];
  CHECK(exact_equal(sum, Matrix<ExactScalar>::identity(3)));
  // The zero eigenvalue carries index 2 here, eigenvalue 2 is simple.
  for (int k = 0; k < cs.count(); ++k) {
    if (cs.lambdas[k].is_zero()) CHECK(cs.nus[k] == 2);
    else CHECK(cs.nus[k] == 1);
  }
}

TEST_CASE("the minimal polynomial divides with the right multiplicities") {
  Matrix<ExactScalar> a = emat({{3, 1, 0}, {0, 3, 0}, {0, 0, 2}});
  Poly<ExactScalar> psi = minimal_polynomial(a, etol);
  // (lambda - 3)^2 (lambda - 2) = lambda^3 - 8 lambda^2 + 21 lambda - 18
  REQUIRE(psi.degree() == 3);
  CHECK(psi.c[0] == ExactScalar(-18));
  CHECK(psi.c[1] == ExactScalar(21));
  CHECK(psi.c[2] == ExactScalar(-8));
  CHECK(psi.c[3] == ExactScalar(1));
  // It annihilates the matrix.
  CHECK(is_zero_matrix(poly_eval_matrix(psi, a), etol, 0.0));
  // It is a proper divisor of the characteristic polynomial of a 4x4 variant
  // with an extra copy of eigenvalue 2.
  Matrix<ExactScalar> b = emat({{3, 1, 0, 0}, {0, 3, 0, 0}, {0, 0, 2, 0}, {0, 0, 0, 2}});
  Poly<ExactScalar> psi_b = minimal_polynomial(b, etol);
  REQUIRE(psi_b.degree() == 3);  // same minimal polynomial, multiplicity ignored
  for (int k = 0; k <= 3; ++k) CHECK(psi_b.c[static_cast<size_t>(k)] == psi.c[static_cast<size_t>(k)]);
}

TEST_CASE("matrix functions through the components") {
  Matrix<ExactScalar> a = emat({{3, 1}, {0, 3}});
  ComponentSet<ExactScalar> cs = components(a, etol);

  // Identity reconstruction: f(lambda) = lambda gives back A.
  CHECK(exact_equal(matrix_function(cs, identity_function<ExactScalar>()), a));

  // Polynomial: f(lambda) = lambda^2 - 1 must equal A^2 - I.
  Poly<ExactScalar> p{std::vector<ExactScalar>{ExactScalar(-1), ExactScalar(0), ExactScalar(1)}};
  Matrix<ExactScalar> f = matrix_function(cs, poly_function(p));
  CHECK(exact_equal(f, a * a - Matrix<ExactScalar>::identity(2)));

  // Resolvent at z = 10 equals (10 I - A)^{-1}.
  Matrix<ExactScalar> r = matrix_function(cs, resolvent_function(ExactScalar(10), etol));
  Matrix<ExactScalar> direct =
      inverse(Matrix<ExactScalar>::identity(2) * ExactScalar(10) - a, etol);
  CHECK(exact_equal(r, direct));

  // The resolvent point must avoid the spectrum.
  CHECK_THROWS_AS(matrix_function(cs, resolvent_function(ExactScalar(3), etol)), SingularError);
}

TEST_CASE("the floating resolvent refuses points within rounding of an eigenvalue") {
  // Extraction returns eigenvalues with rounding, so the hit test must be
  // relative: an exact-zero test would hand back a huge garbage matrix.
  Matrix<Cx> a = cmat({{Cx(1, 0), Cx(0, 0)}, {Cx(0, 0), Cx(2, 0)}});
  ComponentSet<Cx> cs = components(a, ftol);
  CHECK_THROWS_AS(matrix_function(cs, resolvent_function(Cx(1, 0), ftol)), SingularError);
  Matrix<Cx> r = matrix_function(cs, resolvent_function(Cx(10, 0), ftol));
  CHECK(max_abs_diff(r, cmat({{Cx(1.0 / 9, 0), Cx(0, 0)}, {Cx(0, 0), Cx(1.0 / 8, 0)}})) < 1e-12);
}

TEST_CASE("exp through the components matches the closed form on a Jordan block") {
  Matrix<Cx> a = cmat({{Cx(0, 0), Cx(1, 0)}, {Cx(0, 0), Cx(0, 0)}});
  ComponentSet<Cx> cs = components(a, ftol);
  Matrix<Cx> e = matrix_function(cs, exp_function<Cx>());
  // exp(J2(0)) = I + N.
  CHECK(max_abs_diff(e, cmat({{Cx(1, 0), Cx(1, 0)}, {Cx(0, 0), Cx(1, 0)}})) < 1e-12);
}

TEST_CASE("a short derivative table is rejected") {
  Matrix<ExactScalar> a = emat({{3, 1}, {0, 3}});
  ComponentSet<ExactScalar> cs = components(a, etol);
  std::vector<std::vector<ExactScalar>> too_few{{ExactScalar(3)}};  // needs order 1 too
  CHECK_THROWS_AS(matrix_function(cs, too_few), MissingDerivativeError);
}

TEST_CASE("eigenvalue-product closed form matches the annihilator route") {
  Matrix<ExactScalar> a = emat({{0, 0, 0}, {0, 2, 0}, {0, 0, 3}});
  std::vector<ExactScalar> nonzero{ExactScalar(2), ExactScalar(3)};
  Matrix<ExactScalar> z =
      eigenprojection_from_eigenvalues(a, nonzero, std::vector<int>{1, 1}, 1, etol);
  CHECK(exact_equal(z, eigenprojection_default(a, etol).Z));

  Spectrum<ExactScalar> sp = eigenvalues(a, etol);
  Matrix<ExactScalar> z2 = eigenprojection_from_eigenvalues(a, sp, etol);
  CHECK(exact_equal(z, z2));
}

TEST_CASE("component closed form matches the chain") {
  Matrix<ExactScalar> a = emat({{0, 1, 0}, {0, 0, 0}, {0, 0, 2}});
  Spectrum<ExactScalar> sp = eigenvalues(a, etol);
  ComponentSet<ExactScalar> cs = components(a, sp, etol);
  for (int k = 0; k < cs.count(); ++k)
    for (int j = 0; j < cs.nus[k]; ++j)
      CHECK(exact_equal(cs.Z[static_cast<size_t>(k)][static_cast<size_t>(j)],
                        component_from_eigenvalues(a, sp, k, j, etol)));
}

TEST_CASE("eigenvalue indices under powers, including merging") {
  // diag(1, -1): squaring merges the two eigenvalues into 1.
  Matrix<ExactScalar> a = emat({{1, 0}, {0, -1}});
  ComponentSet<ExactScalar> cs = components(a, etol);
  CheckReport rep = power_index_check(a, cs, 2, etol);
  CHECK(rep.all_pass());

  // A defective zero block: ind A = 2 must halve under squaring.
  Matrix<ExactScalar> b = emat({{0, 1, 0}, {0, 0, 0}, {0, 0, 2}});
  ComponentSet<ExactScalar> csb = components(b, etol);
  CHECK(power_index_check(b, csb, 2, etol).all_pass());
  CHECK(power_index_check(b, csb, 3, etol).all_pass());

  CHECK_THROWS_AS(power_index_check(b, csb, 1, etol), Error);
}

TEST_CASE("eigenvalue index probes") {
  Matrix<ExactScalar> a = emat({{5, 1}, {0, 5}});
  CHECK(eigenvalue_index(a, ExactScalar(5), etol) == 2);
  CHECK(eigenvalue_index(a, ExactScalar(7), etol) == 0);
}
