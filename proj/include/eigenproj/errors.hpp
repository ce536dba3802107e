#pragma once

#include <stdexcept>
#include <string>

namespace eigenproj {

// Every failure mode gets its own code so scripts can branch on the CLI
// exit status. Keep the numbers stable; they are documented in --help.
enum class Errc : int {
  ok = 0,
  internal = 1,
  usage = 2,
  parse_error = 3,
  non_square = 4,
  singular = 5,
  zero_alpha = 6,
  zero_polynomial = 7,
  not_annihilating = 8,
  invariant_violation = 9,
  ill_conditioned = 10,
  no_convergence = 11,
  irrational_spectrum = 12,
  missing_derivative = 13,
  non_termination = 14,
  index_too_high = 15,
  not_stochastic = 16,
  not_laplacian = 17,
  verification_failed = 18,
};

class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& what) : std::runtime_error(what), code_(code) {}
  Errc code() const { return code_; }
  int exit_code() const { return static_cast<int>(code_); }

 private:
  Errc code_;
};

#define EIGENPROJ_DEFINE_ERROR(Name, code)                                \
  class Name : public Error {                                             \
   public:                                                                \
    explicit Name(const std::string& what) : Error(Errc::code, what) {}   \
  }

EIGENPROJ_DEFINE_ERROR(ParseError, parse_error);
EIGENPROJ_DEFINE_ERROR(NonSquareError, non_square);
EIGENPROJ_DEFINE_ERROR(SingularError, singular);
EIGENPROJ_DEFINE_ERROR(ZeroAlphaError, zero_alpha);
EIGENPROJ_DEFINE_ERROR(ZeroPolynomialError, zero_polynomial);
EIGENPROJ_DEFINE_ERROR(NotAnnihilatingError, not_annihilating);
EIGENPROJ_DEFINE_ERROR(InvariantViolationError, invariant_violation);
EIGENPROJ_DEFINE_ERROR(IllConditionedError, ill_conditioned);
EIGENPROJ_DEFINE_ERROR(NoConvergenceError, no_convergence);
EIGENPROJ_DEFINE_ERROR(IrrationalSpectrumError, irrational_spectrum);
EIGENPROJ_DEFINE_ERROR(MissingDerivativeError, missing_derivative);
EIGENPROJ_DEFINE_ERROR(NonTerminationError, non_termination);
EIGENPROJ_DEFINE_ERROR(IndexTooHighError, index_too_high);
EIGENPROJ_DEFINE_ERROR(NotStochasticError, not_stochastic);
EIGENPROJ_DEFINE_ERROR(NotLaplacianError, not_laplacian);

#undef EIGENPROJ_DEFINE_ERROR

}  // namespace eigenproj
