#pragma once

#include <string>
#include <utility>

#include "eigenproj/charpoly.hpp"
#include "eigenproj/eigenprojection.hpp"
#include "eigenproj/matrix.hpp"
#include "eigenproj/report.hpp"

namespace eigenproj {

enum class DrazinMethod {
  shifted_inverse,  // (A + alpha Z)^{-1} (I - Z)
  group_shift,      // (A + Z)^{-1} - Z, valid for index <= 1
  power_shift       // A^{nu-1} ((A^nu + Z)^{-1} - Z)
};

inline const char* to_string(DrazinMethod m) {
  switch (m) {
    case DrazinMethod::shifted_inverse: return "shifted-inverse";
    case DrazinMethod::group_shift: return "group-shift";
    case DrazinMethod::power_shift: return "power-shift";
  }
  return "?";
}

template <class S>
struct DrazinResult {
  Matrix<S> D;  // Drazin (or group) inverse of A
  Matrix<S> Z;  // eigenprojection used in the construction
  int nu = 0;   // index of A
  DrazinMethod method = DrazinMethod::shifted_inverse;
};

// Pick a shift with magnitude near the scale of A so that A + alpha Z is not
// artificially ill-scaled. Any nonzero alpha is mathematically valid.
template <class S>
S default_alpha(const Matrix<S>& A) {
  if constexpr (field<S>::is_exact) {
    (void)A;
    return field<S>::one();
  } else {
    const double norm = inf_norm(A);
    if (norm > 1e3 || (norm > 0.0 && norm < 1e-3)) return S(norm);
    return field<S>::one();
  }
}

// A^D = (A + alpha Z)^{-1} (I - Z), any alpha != 0.
template <class S>
Matrix<S> drazin_shifted(const Matrix<S>& A, const Matrix<S>& Z, const S& alpha,
                         const ToleranceConfig& tol) {
  if (field<S>::negligible(alpha, tol.tau_zero))
    throw ZeroAlphaError("shift alpha must be nonzero");
  Matrix<S> shifted_inv = inverse(A + Z * alpha, tol);
  return shifted_inv * (Matrix<S>::identity(A.order()) - Z);
}

// A^D = A^{nu-1} ((A^nu + Z)^{-1} - Z); reduces elimination to a single
// well-shifted inverse of A^nu + Z. nu = 0 short-circuits to A^{-1}.
template <class S>
Matrix<S> drazin_power_shift(const Matrix<S>& A, const Matrix<S>& Z, int nu,
                             const ToleranceConfig& tol) {
  if (nu < 0) throw Error(Errc::usage, "index must be nonnegative");
  if (nu == 0) return inverse(A, tol);
  Matrix<S> core = inverse(mat_pow(A, nu) + Z, tol) - Z;
  return mat_pow(A, nu - 1) * core;
}

template <class S>
DrazinResult<S> drazin_inverse(const Matrix<S>& A, const S& alpha, const ToleranceConfig& tol,
                               DrazinMethod method = DrazinMethod::shifted_inverse) {
  Eigenprojection<S> proj = eigenprojection_default(A, tol);
  const int nu = index_of(A, tol).nu;
  Matrix<S> D(A.order());
  switch (method) {
    case DrazinMethod::shifted_inverse:
      D = drazin_shifted(A, proj.Z, alpha, tol);
      break;
    case DrazinMethod::group_shift: {
      if (nu > 1)
        throw IndexTooHighError("group-shift form needs index <= 1, index is " +
                                std::to_string(nu));
      D = inverse(A + proj.Z, tol) - proj.Z;
      break;
    }
    case DrazinMethod::power_shift:
      D = drazin_power_shift(A, proj.Z, nu, tol);
      break;
  }
  return DrazinResult<S>{std::move(D), std::move(proj.Z), nu, method};
}

template <class S>
DrazinResult<S> drazin_inverse(const Matrix<S>& A, const ToleranceConfig& tol,
                               DrazinMethod method = DrazinMethod::shifted_inverse) {
  return drazin_inverse(A, default_alpha(A), tol, method);
}

// The group inverse A^# = (A + Z)^{-1} - Z exists iff ind A <= 1.
template <class S>
DrazinResult<S> group_inverse(const Matrix<S>& A, const ToleranceConfig& tol) {
  return drazin_inverse(A, default_alpha(A), tol, DrazinMethod::group_shift);
}

// The three defining identities of the Drazin inverse, plus the round trip
// back to the eigenprojection: I - A A^D must equal Z.
template <class S>
CheckReport verify_drazin_axioms(const Matrix<S>& A, const Matrix<S>& D,
                                 const ToleranceConfig& tol) {
  CheckReport report;
  const int n = A.order();
  const double a_norm = std::max(1.0, inf_norm(A));
  const double d_norm = std::max(1.0, inf_norm(D));

  report.add("commutes", is_zero_matrix(A * D - D * A, tol, a_norm * d_norm), "A A^D = A^D A");
  report.add("inner_inverse_of_itself",
             is_zero_matrix(D * A * D - D, tol, a_norm * d_norm * d_norm), "A^D A A^D = A^D");

  const int nu = index_of(A, tol).nu;
  Matrix<S> Anu = mat_pow(A, nu);
  report.add("collapses_power",
             is_zero_matrix(Anu * A * D - Anu, tol,
                            std::max(1.0, inf_norm(Anu)) * a_norm * d_norm),
             "A^{nu+1} A^D = A^nu, nu=" + std::to_string(nu));

  Matrix<S> Z = eigenprojection_default(A, tol).Z;
  report.add("projection_round_trip",
             is_zero_matrix(Matrix<S>::identity(n) - A * D - Z, tol,
                            std::max(1.0, a_norm * d_norm)),
             "I - A A^D equals the eigenprojection");
  return report;
}

}  // namespace eigenproj
