#pragma once

#include <cmath>
#include <limits>
#include <string>
#include <vector>

#include "eigenproj/charpoly.hpp"
#include "eigenproj/matrix.hpp"
#include "eigenproj/poly.hpp"
#include "eigenproj/report.hpp"

namespace eigenproj {

// Which construction produced a projection; the constructions are
// independent of each other and cross-check one another.
enum class ProjectionSource {
  annihilator,        // h evaluated at A^u, h from an annihilating polynomial
  faddeev_ratio,      // I - (I - A_{n-v}/a_{n-v})^u
  limit,              // limit of (I + tau A^u)^{-1}
  nullspace_basis,    // X (Y* X)^{-1} Y* from null-space bases
  eigenvalue_product  // product over the known nonzero eigenvalues
};

inline const char* to_string(ProjectionSource s) {
  switch (s) {
    case ProjectionSource::annihilator: return "annihilator";
    case ProjectionSource::faddeev_ratio: return "faddeev-ratio";
    case ProjectionSource::limit: return "limit";
    case ProjectionSource::nullspace_basis: return "nullspace-basis";
    case ProjectionSource::eigenvalue_product: return "eigenvalue-product";
  }
  return "?";
}

template <class S>
struct Eigenprojection {
  Matrix<S> Z;
  int u_used = 0;
  ProjectionSource source = ProjectionSource::annihilator;
};

// phi factored as lambda^t (lambda^q + p_1 lambda^{q-1} + ... + p_q) with
// p_q != 0; p holds p_1..p_q.
template <class S>
struct AnnihilatorParts {
  int t = 0;
  int q = 0;
  std::vector<S> p;
};

template <class S>
AnnihilatorParts<S> split_annihilator(const Poly<S>& phi, const ToleranceConfig& tol) {
  Poly<S> f = normalized(phi, tol);
  if (f.empty()) throw ZeroPolynomialError("annihilating polynomial is identically zero");
  const double threshold = tol.tau_zero * max_abs_coeff(f);

  AnnihilatorParts<S> parts;
  int t = 0;
  while (t < f.degree() && field<S>::negligible(f.c[t], threshold)) ++t;
  parts.t = t;
  parts.q = f.degree() - t;
  const S lead = f.c.back();
  parts.p.reserve(parts.q);
  for (int j = 1; j <= parts.q; ++j) parts.p.push_back(f.c[t + parts.q - j] / lead);
  return parts;
}

// h(lambda) = p_q^{-1}(lambda^q + p_1 lambda^{q-1} + ... + p_q); h(0) = 1.
// The pure-power case q = 0 gives h == 1.
template <class S>
Poly<S> build_h(const AnnihilatorParts<S>& parts) {
  if (parts.q == 0) return Poly<S>::one();
  const S pq = parts.p.back();
  Poly<S> h;
  h.c.resize(parts.q + 1);
  h.c[parts.q] = field<S>::one() / pq;
  for (int j = 1; j <= parts.q; ++j) h.c[parts.q - j] = parts.p[j - 1] / pq;
  return h;
}

namespace detail {

// The invariant gates below separate structural failure (u below the index, a
// polynomial that does not annihilate: residuals of order the matrix norms)
// from evaluation rounding (absolute noise proportional to the magnitudes run
// through the Horner scheme, typically >= 10 orders smaller at desk scale).
// They deliberately sit far above rounding: accuracy is certified by the
// cross-construction checks, not by these gates.
inline constexpr double kProjectionGateSlack = 1e5;

template <class S>
Matrix<S> clamped_below(const Matrix<S>& M, double floor) {
  Matrix<S> out = M;
  if constexpr (!field<S>::is_exact) {
    for (int i = 0; i < out.order(); ++i)
      for (int j = 0; j < out.order(); ++j)
        if (field<S>::mag_approx(out(i, j)) <= floor) out(i, j) = field<S>::zero();
  }
  return out;
}

// power_scale is the magnitude the computation of Apow ran at (||A||^u for a
// plain power): entries of Apow below tau_zero * power_scale are
// indistinguishable from the rounding of that computation.
template <class S>
void check_projection_invariants(const Matrix<S>& Apow, double power_scale, const Matrix<S>& Z,
                                 const ToleranceConfig& tol) {
  const int n = Z.order();
  const double z_norm = std::max(1.0, inf_norm(Z));
  const double op_norm = std::max(1.0, inf_norm(Apow));
  const double gate = field<S>::is_exact ? 1.0 : kProjectionGateSlack;
  if (!is_zero_matrix(Z * Z - Z, tol, gate * op_norm * z_norm * z_norm))
    throw InvariantViolationError("projection candidate is not idempotent");
  const double ann_scale = gate * op_norm * z_norm;
  if (!is_zero_matrix(Apow * Z, tol, ann_scale) || !is_zero_matrix(Z * Apow, tol, ann_scale))
    throw InvariantViolationError(
        "projection candidate does not annihilate the matrix power; u below the index?");
  // rank() measures pivots against the matrix's own largest entry, so a matrix
  // that is zero up to evaluation noise would still report rank >= 1. Clamp
  // entries below the noise floor of the evaluation that produced each matrix
  // first: Apow decays to pure noise when the power passes the index of a
  // shifted matrix whose eigenvalue carries extraction error, and Z does when
  // the input was nonsingular.
  Matrix<S> Ar = clamped_below(Apow, tol.tau_zero * power_scale);
  Matrix<S> Zr = clamped_below(Z, tol.tau_zero * op_norm * z_norm);
  if (rank(Ar, tol) + rank(Zr, tol) != n)
    throw InvariantViolationError("rank of matrix power plus rank of projection is not n");
}

template <class S>
Eigenprojection<S> projection_from_annihilator_impl(const Matrix<S>& Apow, double power_scale,
                                                    int u, const Poly<S>& phi,
                                                    const ToleranceConfig& tol) {
  Matrix<S> residual = poly_eval_matrix(phi, Apow);
  if (!is_zero_matrix(residual, tol, poly_eval_scale(phi, inf_norm(Apow))))
    throw NotAnnihilatingError("polynomial does not annihilate A^" + std::to_string(u));
  Poly<S> h = build_h(split_annihilator(phi, tol));
  Matrix<S> Z = poly_eval_matrix(h, Apow);
  check_projection_invariants(Apow, power_scale, Z, tol);
  return Eigenprojection<S>{std::move(Z), u, ProjectionSource::annihilator};
}

}  // namespace detail

// Z = h(A^u) for any nonzero annihilating polynomial phi of A^u, u >= ind A.
// The annihilation premise and the projection invariants are both verified,
// not trusted.
template <class S>
Eigenprojection<S> eigenprojection_from_annihilator(const Matrix<S>& A, int u, const Poly<S>& phi,
                                                    const ToleranceConfig& tol) {
  // u = 0 would ask for the projection of A^0 = I regardless of A, which the
  // invariant checks (keyed to A^u) could not distinguish from a valid call.
  if (u < 1) throw Error(Errc::usage, "u must be at least 1");
  return detail::projection_from_annihilator_impl(mat_pow(A, u), std::pow(inf_norm(A), u), u,
                                                  phi, tol);
}

// Forced power: the characteristic polynomial of A^u as the annihilator.
// Valid whenever u is at least the index of A (the verified invariants catch
// a u that is too small).
template <class S>
Eigenprojection<S> eigenprojection_with_u(const Matrix<S>& A, int u, const ToleranceConfig& tol) {
  if (u < 1) throw Error(Errc::usage, "u must be at least 1");
  Matrix<S> Apow = mat_pow(A, u);
  Poly<S> phi = faddeev(Apow, tol).char_poly();
  return detail::projection_from_annihilator_impl(Apow, std::pow(inf_norm(A), u), u, phi, tol);
}

// Default construction: u = max(v, 1) with v the multiplicity of 0 as a
// characteristic root (falling back to u = n when v cannot be trusted), and
// the characteristic polynomial of A^u as the annihilator. Nonsingular input
// short-circuits to Z = 0.
template <class S>
Eigenprojection<S> eigenprojection_default(const Matrix<S>& A, const ToleranceConfig& tol) {
  CharData<S> cd = faddeev(A, tol);
  if (cd.v == 0 && cd.v_well_conditioned)
    return Eigenprojection<S>{Matrix<S>(A.order()), 0, ProjectionSource::annihilator};
  const int u = cd.v_well_conditioned ? std::max(cd.v, 1) : A.order();
  return eigenprojection_with_u(A, u, tol);
}

// Z = I - (I - A_{n-v}/a_{n-v})^u from the Faddeev data of A. Requires a
// singular input; refuses when the trailing coefficient is too close to the
// zero threshold to divide by.
template <class S>
Matrix<S> eigenprojection_faddeev_ratio(const Matrix<S>& A, int u, const CharData<S>& cd,
                                        const ToleranceConfig& tol) {
  const int n = A.order();
  if (cd.v < 1) throw Error(Errc::usage, "faddeev-ratio construction requires a singular matrix");
  if (u < 1) throw Error(Errc::usage, "faddeev-ratio construction requires u >= 1");
  const S& denom = cd.a[n - cd.v];
  if constexpr (!field<S>::is_exact) {
    double coeff_scale = 0.0;
    for (const auto& x : cd.a) coeff_scale = std::max(coeff_scale, field<S>::mag_approx(x));
    if (field<S>::mag_approx(denom) < kTrailingCoeffMargin * tol.tau_zero * coeff_scale)
      throw IllConditionedError("trailing characteristic coefficient too small to divide by");
  }
  Matrix<S> m = Matrix<S>::identity(n) - cd.adj_coeffs[n - cd.v] * (field<S>::one() / denom);
  return Matrix<S>::identity(n) - mat_pow(m, u);
}

// Geometric schedule reaching far enough that the shifted inverse enters its
// asymptotic regime even when the smallest nonzero eigenvalue of the
// normalized power is tiny.
inline const std::vector<double>& default_tau_schedule() {
  static const std::vector<double> schedule = [] {
    std::vector<double> s;
    double tau = 1.0;
    for (int i = 0; i < 29; ++i) {
      s.push_back(tau);
      tau *= 4.0;
    }
    return s;
  }();
  return schedule;
}

// Limit of (I + tau A^u)^{-1} along the tau schedule. Floating backend only.
// A^u is normalized by its norm first (the limit is unchanged), each iterate
// is extrapolated in 1/tau, and the value is accepted once successive
// extrapolates stabilize.
template <class S>
Matrix<S> eigenprojection_limit(const Matrix<S>& A, int u, const std::vector<double>& tau_schedule,
                                const ToleranceConfig& tol) {
  static_assert(!field<S>::is_exact, "the limit construction is a floating-point oracle");
  const int n = A.order();
  Matrix<S> M = mat_pow(A, u);
  const double norm = inf_norm(M);
  const double power_scale = std::pow(std::max(1.0, inf_norm(A)), std::max(u, 1));
  if (norm == 0.0 || is_zero_matrix(M, tol, power_scale)) return Matrix<S>::identity(n);
  Matrix<S> Mhat = M * S(1.0 / norm);

  const double stop_tol = std::max(tol.tau_zero, 1e-9);
  std::vector<double> xs;                 // 1/tau
  std::vector<Matrix<S>> diag;            // Neville tableau row
  bool have_prev = false;
  Matrix<S> prev_extrap(n);
  Matrix<S> best(n);
  double best_diff = std::numeric_limits<double>::infinity();

  for (double tau : tau_schedule) {
    Matrix<S> shifted = Mhat * S(tau);
    for (int i = 0; i < n; ++i) shifted(i, i) += field<S>::one();
    Matrix<S> raw(n);
    try {
      raw = detail::gauss_inverse(shifted, 0.0);
    } catch (const SingularError&) {
      // tau hit an eigenvalue of -1/Mhat exactly, or is so large that the
      // identity drowned below the rounding of tau * Mhat. Either way the
      // node carries no information; the plateau selection works without it.
      continue;
    }

    const double x = 1.0 / tau;
    std::vector<Matrix<S>> next;
    next.reserve(diag.size() + 1);
    next.push_back(raw);
    for (size_t j = 1; j <= diag.size(); ++j) {
      const double denom = xs[xs.size() - j] - x;
      Matrix<S> step = next[j - 1] + (next[j - 1] - diag[j - 1]) * S(x / denom);
      next.push_back(std::move(step));
    }
    xs.push_back(x);
    diag = std::move(next);
    const Matrix<S>& extrap = diag.back();

    // The extrapolated sequence settles on a plateau once tau is deep inside
    // the asymptotic regime and before inversion noise takes over; keep the
    // value at the flattest point of that plateau.
    if (have_prev) {
      const double diff = max_abs_diff(extrap, prev_extrap);
      if (diff < best_diff) {
        best_diff = diff;
        best = extrap;
      }
    }
    prev_extrap = extrap;
    have_prev = true;
  }
  if (best_diff > stop_tol * (1.0 + max_abs(best)))
    throw NoConvergenceError("limit iterates did not stabilize; u below the index?");
  return best;
}

template <class S>
Matrix<S> eigenprojection_limit(const Matrix<S>& A, int u, const ToleranceConfig& tol) {
  return eigenprojection_limit(A, u, default_tau_schedule(), tol);
}

// Z = X (Y* X)^{-1} Y* with X, Y null-space bases of A^nu and (A*)^nu.
template <class S>
Matrix<S> eigenprojection_nullspace(const Matrix<S>& A, int nu, const ToleranceConfig& tol) {
  const int n = A.order();
  Matrix<S> P = mat_pow(A, nu);
  std::vector<std::vector<S>> X = null_space_basis(P, tol);
  std::vector<std::vector<S>> Y = null_space_basis(P.adjoint(), tol);
  if (X.size() != Y.size())
    throw SingularError("null-space bases of A^nu and (A*)^nu have different sizes");
  const int m = static_cast<int>(X.size());
  if (m == 0) return Matrix<S>(n);

  Matrix<S> G(m);
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < m; ++j) {
      S acc = field<S>::zero();
      for (int r = 0; r < n; ++r) acc += field<S>::conj(Y[i][r]) * X[j][r];
      G(i, j) = acc;
    }
  Matrix<S> Ginv = inverse(G, tol);

  Matrix<S> Z(n);
  for (int a = 0; a < m; ++a)
    for (int b = 0; b < m; ++b) {
      const S& g = Ginv(a, b);
      for (int r = 0; r < n; ++r) {
        S xg = X[a][r] * g;
        for (int c = 0; c < n; ++c) Z(r, c) += xg * field<S>::conj(Y[b][c]);
      }
    }
  return Z;
}

// Pass/fail report for the standard characterizations of the eigenprojection:
// annihilation and rank split, nonsingular shifts A + alpha Z, commutation,
// nilpotency of AZ, and Z != 0 for singular A.
template <class S>
CheckReport verify_characterizations(const Matrix<S>& A, const Matrix<S>& Z,
                                     const ToleranceConfig& tol) {
  CheckReport report;
  const int n = A.order();
  const double z_norm = std::max(1.0, inf_norm(Z));

  report.add("idempotent", is_zero_matrix(Z * Z - Z, tol, z_norm * z_norm));

  IndexInfo info = index_of(A, tol);
  Matrix<S> Anu = mat_pow(A, info.nu);
  const double ann_scale = std::max(1.0, inf_norm(Anu)) * z_norm;
  report.add("annihilation",
             is_zero_matrix(Anu * Z, tol, ann_scale) && is_zero_matrix(Z * Anu, tol, ann_scale),
             "A^nu Z = Z A^nu = 0, nu=" + std::to_string(info.nu));
  report.add("rank_split", rank(Anu, tol) + rank(Z, tol) == n, "rank A^nu + rank Z = n");

  const double comm_scale = std::max(1.0, inf_norm(A)) * z_norm;
  report.add("commutes", is_zero_matrix(A * Z - Z * A, tol, comm_scale));

  const std::vector<S> alphas{field<S>::one(), -field<S>::one(), field<S>::imag_unit(),
                              field<S>::from_ratio(1, 1000)};
  bool shifts_ok = true;
  std::string failed_alpha;
  for (const auto& alpha : alphas) {
    try {
      (void)inverse(A + Z * alpha, tol);
    } catch (const SingularError&) {
      shifts_ok = false;
      failed_alpha = "a shifted matrix A + alpha Z is singular";
      break;
    }
  }
  report.add("shift_nonsingular", shifts_ok, failed_alpha);

  Matrix<S> AZ = A * Z;
  const double az_norm = std::max(1.0, inf_norm(AZ));
  report.add("product_nilpotent",
             is_zero_matrix(mat_pow(AZ, n), tol, std::pow(az_norm, n)),
             "(AZ)^n = 0");

  const bool singular = rank(A, tol) < n;
  report.add("nonzero_when_singular", !singular || !is_zero_matrix(Z, tol, 1.0),
             singular ? "det A = 0 so Z must be nonzero" : "vacuous: A nonsingular");
  return report;
}

}  // namespace eigenproj
