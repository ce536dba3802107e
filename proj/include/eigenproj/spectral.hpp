#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <functional>
#include <limits>
#include <memory>
#include <numeric>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "eigenproj/charpoly.hpp"
#include "eigenproj/eigenprojection.hpp"
#include "eigenproj/matrix.hpp"
#include "eigenproj/poly.hpp"
#include "eigenproj/report.hpp"

namespace eigenproj {

// Distinct eigenvalues with algebraic multiplicities (mults sums to n).
// The doubles are floating-point diagnostics: the spread of each root
// cluster, the estimated error of each polished eigenvalue, and how well the
// clustered spectrum reproduces the characteristic coefficients.
template <class S>
struct Spectrum {
  std::vector<S> lambdas;
  std::vector<int> mults;
  std::vector<double> cluster_diameters;
  std::vector<double> center_errors;
  double recon_residual = 0.0;

  int count() const { return static_cast<int>(lambdas.size()); }
};

namespace detail {

inline std::string scalar_label(const Cx& z) {
  std::ostringstream os;
  os << z.real();
  if (z.imag() != 0.0) os << (z.imag() < 0 ? "" : "+") << z.imag() << "i";
  return os.str();
}

template <class S>
std::string scalar_label(const S& x) {
  return scalar_label(to_complex(x));
}

// Durand-Kerner simultaneous root iteration on a monic polynomial. Returns
// the raw (unclustered) approximants; callers validate the residuals.
inline std::vector<Cx> durand_kerner(const Poly<Cx>& monic) {
  const int d = monic.degree();
  std::vector<Cx> x(static_cast<size_t>(d));
  double bound = 0.0;
  for (int i = 0; i < d; ++i) bound = std::max(bound, std::abs(monic.c[i]));
  bound += 1.0;  // Cauchy bound for a monic polynomial
  for (int k = 0; k < d; ++k) {
    const double angle = 2.0 * M_PI * k / d + 0.4;
    x[k] = 0.8 * bound * Cx(std::cos(angle), std::sin(angle));
  }

  const int max_iter = 150 * d + 100;
  for (int iter = 0; iter < max_iter; ++iter) {
    double max_step = 0.0;
    double max_mag = 0.0;
    for (int k = 0; k < d; ++k) {
      Cx den(1.0, 0.0);
      for (int j = 0; j < d; ++j) {
        if (j == k) continue;
        Cx diff = x[k] - x[j];
        if (std::abs(diff) == 0.0) diff = Cx(1e-12, 1e-12) * (1.0 + std::abs(x[k]));
        den *= diff;
      }
      Cx step = poly_eval(monic, x[k]) / den;
      x[k] -= step;
      max_step = std::max(max_step, std::abs(step));
      max_mag = std::max(max_mag, std::abs(x[k]));
    }
    if (max_step <= 1e-14 * (1.0 + max_mag)) break;
  }
  return x;
}

// Error radius of each approximant r: the tightest of the multiplicity-m
// bounds (m! |psi(r)| / |psi^{(m)}(r)|)^{1/m}. At a well-separated simple
// root this is the Newton correction; near an m-fold root the m-th-root term
// takes over, tracking how the approximants actually spread (as the m-th
// root of the coefficient error, which no fixed clustering radius can).
inline std::vector<double> root_error_radii(const Poly<Cx>& psi, const std::vector<Cx>& roots) {
  std::vector<Poly<Cx>> derivs{psi};
  for (int m = 1; m <= psi.degree(); ++m) derivs.push_back(poly_derivative(derivs.back()));
  std::vector<double> out;
  out.reserve(roots.size());
  for (const Cx& r : roots) {
    const double fr = std::abs(poly_eval(psi, r));
    double best = std::numeric_limits<double>::infinity();
    double factorial = 1.0;
    for (int m = 1; m <= psi.degree(); ++m) {
      factorial *= m;
      const double dm = std::abs(poly_eval(derivs[static_cast<size_t>(m)], r));
      if (dm == 0.0) continue;
      best = std::min(best, std::pow(factorial * fr / dm, 1.0 / m));
    }
    out.push_back(std::isfinite(best) ? best : 0.0);
  }
  return out;
}

// Two approximants whose error disks nearly touch cannot be told apart; the
// slack bridges approximants sitting on opposite sides of a split circle.
inline constexpr double kClusterErrorSlack = 4.0;

struct RootClusters {
  std::vector<Cx> centers;
  std::vector<int> counts;
  std::vector<double> diameters;
  std::vector<double> guards;  // largest member error radius per cluster
};

// Single-linkage clustering: roots closer than the merge radius (directly or
// via a chain) share a cluster; each cluster is replaced by its centroid.
// The merge radius per pair is the base radius widened by the pair's error
// radii, so defective roots cluster however far machine arithmetic split them.
inline RootClusters cluster_roots(const std::vector<Cx>& roots, double radius,
                                  const std::vector<double>& err) {
  const int m = static_cast<int>(roots.size());
  std::vector<int> group(static_cast<size_t>(m));
  std::iota(group.begin(), group.end(), 0);
  std::function<int(int)> find = [&](int a) {
    while (group[a] != a) a = group[a] = group[group[a]];
    return a;
  };
  for (int i = 0; i < m; ++i)
    for (int j = i + 1; j < m; ++j) {
      const double pair_radius =
          std::max(radius, kClusterErrorSlack * (err[static_cast<size_t>(i)] +
                                                 err[static_cast<size_t>(j)]));
      if (std::abs(roots[i] - roots[j]) <= pair_radius) group[find(i)] = find(j);
    }

  RootClusters out;
  std::vector<int> slot(static_cast<size_t>(m), -1);
  std::vector<std::vector<int>> members;
  for (int i = 0; i < m; ++i) {
    int r = find(i);
    if (slot[r] < 0) {
      slot[r] = static_cast<int>(members.size());
      members.emplace_back();
    }
    members[slot[r]].push_back(i);
  }
  for (const auto& ms : members) {
    Cx sum(0.0, 0.0);
    double diam = 0.0;
    double guard = 0.0;
    for (int i : ms) {
      sum += roots[i];
      guard = std::max(guard, err[static_cast<size_t>(i)]);
    }
    for (size_t a = 0; a < ms.size(); ++a)
      for (size_t b = a + 1; b < ms.size(); ++b)
        diam = std::max(diam, std::abs(roots[ms[a]] - roots[ms[b]]));
    out.centers.push_back(sum / double(ms.size()));
    out.counts.push_back(static_cast<int>(ms.size()));
    out.diameters.push_back(diam);
    out.guards.push_back(guard);
  }
  return out;
}

// A cluster of m approximants stands for an m-fold root, and an m-fold root
// of psi is a simple root of psi^{(m-1)}. Newton on that derivative is
// well-conditioned and recovers the root to near machine accuracy, where the
// raw centroid of a defective root keeps only about half the digits (the
// cluster spreads as the m-th root of the coefficient error). A polish that
// tries to leave the cluster's neighborhood is distrusted and discarded.
// err_out receives an estimate of the polished value's remaining error: the
// last Newton step, or the guard itself when the polish was discarded.
inline Cx polish_cluster_center(const Poly<Cx>& psi, Cx center, int count, double guard,
                                double& err_out) {
  Poly<Cx> f = psi;
  for (int j = 1; j < count; ++j) f = poly_derivative(f);
  const Poly<Cx> fp = poly_derivative(f);
  Cx x = center;
  double last_step = guard;
  for (int it = 0; it < 8; ++it) {
    const Cx d = poly_eval(fp, x);
    if (std::abs(d) == 0.0) break;
    const Cx step = poly_eval(f, x) / d;
    x -= step;
    last_step = std::abs(step);
    if (last_step <= 1e-16 * (1.0 + std::abs(x))) break;
  }
  if (std::abs(x - center) > guard) {
    err_out = guard;
    return center;
  }
  err_out = std::max(last_step, 1e-15 * (1.0 + std::abs(x)));
  return x;
}

// How far the expanded product of (x - lambda_k)^{m_k} sits from psi,
// measured as the largest coefficient deviation.
template <class S>
double reconstruction_residual(const std::vector<S>& lambdas, const std::vector<int>& mults,
                               const Poly<S>& psi) {
  Poly<S> rebuilt = poly_from_roots(lambdas, mults);
  if (rebuilt.c.size() != psi.c.size()) return std::numeric_limits<double>::infinity();
  double res = 0.0;
  for (size_t i = 0; i < psi.c.size(); ++i)
    res = std::max(res, field<S>::mag_approx(rebuilt.c[i] - psi.c[i]));
  return res;
}

template <class S>
void sort_spectrum(Spectrum<S>& sp) {
  std::vector<size_t> order(sp.lambdas.size());
  std::iota(order.begin(), order.end(), size_t{0});
  std::stable_sort(order.begin(), order.end(), [&](size_t a, size_t b) {
    Cx za = to_complex(sp.lambdas[a]), zb = to_complex(sp.lambdas[b]);
    if (std::abs(za) != std::abs(zb)) return std::abs(za) > std::abs(zb);
    if (za.real() != zb.real()) return za.real() > zb.real();
    return za.imag() > zb.imag();
  });
  Spectrum<S> s2;
  s2.recon_residual = sp.recon_residual;
  for (size_t i : order) {
    s2.lambdas.push_back(sp.lambdas[i]);
    s2.mults.push_back(sp.mults[i]);
    if (!sp.cluster_diameters.empty()) s2.cluster_diameters.push_back(sp.cluster_diameters[i]);
    if (!sp.center_errors.empty()) s2.center_errors.push_back(sp.center_errors[i]);
  }
  sp = std::move(s2);
}

inline constexpr long long kDivisorSearchCap = 2'000'000;  // trial-division iterations
inline constexpr size_t kDivisorListCap = 4096;            // divisors kept per coefficient

inline std::vector<boost::multiprecision::cpp_int> positive_divisors(
    boost::multiprecision::cpp_int n) {
  using boost::multiprecision::cpp_int;
  if (n < 0) n = -n;
  std::vector<cpp_int> divs;
  long long iterations = 0;
  for (cpp_int d = 1; d * d <= n; ++d) {
    if (++iterations > kDivisorSearchCap)
      throw IrrationalSpectrumError(
          "characteristic coefficients too large for exact eigenvalue search; "
          "supply the spectrum explicitly");
    if (n % d == 0) {
      divs.push_back(d);
      if (d * d != n) divs.push_back(n / d);
      if (divs.size() > kDivisorListCap)
        throw IrrationalSpectrumError(
            "characteristic coefficients have too many divisors for exact eigenvalue "
            "search; supply the spectrum explicitly");
    }
  }
  std::sort(divs.begin(), divs.end());
  return divs;
}

// All rational roots of a polynomial with (real) rational coefficients, with
// multiplicities, found by candidate trial division against the integer-
// cleared coefficients. Throws when a nonconstant factor without rational
// roots remains.
inline std::vector<std::pair<Rational, int>> rational_roots(Poly<ExactScalar> work) {
  using boost::multiprecision::cpp_int;
  const ToleranceConfig exact_tol = ToleranceConfig::exact();
  for (const auto& c : work.c)
    if (c.im != 0)
      throw IrrationalSpectrumError(
          "characteristic polynomial has complex coefficients; supply the spectrum "
          "explicitly");

  std::vector<std::pair<Rational, int>> out;
  // Strip the power of lambda first: root 0 with its multiplicity.
  int zero_mult = 0;
  while (!work.c.empty() && work.c.front().is_zero()) {
    work.c.erase(work.c.begin());
    ++zero_mult;
  }
  if (zero_mult > 0) out.emplace_back(Rational(0), zero_mult);
  if (work.degree() <= 0) return out;

  // Clear denominators to integer coefficients.
  cpp_int lcm = 1;
  for (const auto& c : work.c)
    lcm = boost::multiprecision::lcm(lcm, boost::multiprecision::denominator(c.re));
  std::vector<cpp_int> ic;
  ic.reserve(work.c.size());
  for (const auto& c : work.c) {
    Rational scaled = c.re * lcm;
    ic.push_back(boost::multiprecision::numerator(scaled));
  }

  std::vector<cpp_int> ps = positive_divisors(ic.front());
  std::vector<cpp_int> qs = positive_divisors(ic.back());
  for (const cpp_int& p : ps) {
    for (const cpp_int& q : qs) {
      if (boost::multiprecision::gcd(p, q) != 1) continue;
      for (int sign : {1, -1}) {
        Rational r = Rational(sign * p) / Rational(q);
        ExactScalar root(r);
        int mult = 0;
        while (work.degree() >= 1 && poly_eval(work, root).is_zero()) {
          Poly<ExactScalar> lin{std::vector<ExactScalar>{-root, ExactScalar(1)}};
          work = poly_divmod(work, lin, exact_tol).first;
          ++mult;
        }
        if (mult > 0) out.emplace_back(r, mult);
        if (work.degree() <= 0) return out;
      }
    }
  }
  throw IrrationalSpectrumError(
      "spectrum is not rational; supply the eigenvalues explicitly");
}

}  // namespace detail

// Margin for coefficient-level spectrum validation, applied on top of
// tau_zero: the reconstructed characteristic coefficients may differ from the
// computed ones by accumulated roundoff but not by more than this.
inline constexpr double kSpectrumResidualMargin = 1e3;

// Distinct eigenvalues of A from its characteristic polynomial. Floating:
// simultaneous root iteration, residual validation, single-linkage clustering
// with radius tau_cluster * max(1, largest root), and a Newton polish of each
// cluster center on the matching derivative; a center within the radius of 0
// is snapped to exactly 0. Exact: rational roots only; anything else must be
// supplied via spectrum_from_values.
template <class S>
Spectrum<S> eigenvalues(const Matrix<S>& A, const ToleranceConfig& tol) {
  Poly<S> psi = faddeev(A, tol).char_poly();
  Spectrum<S> sp;

  if constexpr (field<S>::is_exact) {
    auto roots = detail::rational_roots(psi);
    for (const auto& [r, m] : roots) {
      sp.lambdas.push_back(ExactScalar(r));
      sp.mults.push_back(m);
    }
  } else {
    std::vector<Cx> roots = detail::durand_kerner(psi);
    for (const Cx& r : roots) {
      const double residual = std::abs(poly_eval(psi, r));
      const double scale = poly_eval_scale(psi, std::abs(r));
      if (residual > kSpectrumResidualMargin * std::max(tol.tau_zero, 1e-13) * scale)
        throw NoConvergenceError("root iteration failed to converge on the characteristic "
                                 "polynomial (residual " +
                                 std::to_string(residual) + ")");
    }
    double max_root = 0.0;
    for (const Cx& r : roots) max_root = std::max(max_root, std::abs(r));
    const double radius = tol.tau_cluster * std::max(1.0, max_root);
    detail::RootClusters cl =
        detail::cluster_roots(roots, radius, detail::root_error_radii(psi, roots));
    for (size_t k = 0; k < cl.centers.size(); ++k) {
      const double guard =
          std::max(radius, detail::kClusterErrorSlack * cl.guards[k] + cl.diameters[k]);
      double center_error = guard;
      Cx center =
          detail::polish_cluster_center(psi, cl.centers[k], cl.counts[k], guard, center_error);
      if (std::abs(center) <= std::max(radius, center_error)) center = Cx(0.0, 0.0);
      sp.lambdas.push_back(center);
      sp.mults.push_back(cl.counts[k]);
      sp.cluster_diameters.push_back(cl.diameters[k]);
      sp.center_errors.push_back(center_error);
    }
    sp.recon_residual = detail::reconstruction_residual(sp.lambdas, sp.mults, psi);
  }
  detail::sort_spectrum(sp);
  return sp;
}

// Spectrum with caller-supplied eigenvalues (the override path for spectra
// the automatic search cannot resolve: tight clusters, defective floating
// matrices, irrational exact spectra). Multiplicities are derived and the
// claimed spectrum is validated against the characteristic polynomial.
template <class S>
Spectrum<S> spectrum_from_values(const Matrix<S>& A, const std::vector<S>& supplied,
                                 const ToleranceConfig& tol) {
  if (supplied.empty()) throw Error(Errc::usage, "at least one eigenvalue is required");
  Poly<S> psi = faddeev(A, tol).char_poly();
  const int n = A.order();

  // Deduplicate the supplied list, preserving first-seen order.
  std::vector<S> centers;
  double max_center = 0.0;
  for (const S& v : supplied) {
    max_center = std::max(max_center, field<S>::mag_approx(v));
    bool seen = false;
    for (const S& c : centers) {
      if constexpr (field<S>::is_exact) {
        seen = (c == v);
      } else {
        seen = std::abs(to_complex(c) - to_complex(v)) <=
               tol.tau_cluster * std::max(1.0, max_center);
      }
      if (seen) break;
    }
    if (!seen) centers.push_back(v);
  }

  Spectrum<S> sp;
  sp.lambdas = centers;
  sp.mults.assign(centers.size(), 0);

  if constexpr (field<S>::is_exact) {
    const ToleranceConfig exact_tol = ToleranceConfig::exact();
    Poly<S> work = psi;
    for (size_t k = 0; k < centers.size(); ++k) {
      Poly<S> lin{std::vector<S>{-centers[k], field<S>::one()}};
      while (work.degree() >= 1 && poly_eval(work, centers[k]).is_zero()) {
        work = poly_divmod(work, lin, exact_tol).first;
        ++sp.mults[k];
      }
      if (sp.mults[k] == 0)
        throw InvariantViolationError("supplied value " + detail::scalar_label(centers[k]) +
                                      " is not an eigenvalue");
    }
    if (work.degree() > 0)
      throw InvariantViolationError("supplied eigenvalues do not exhaust the spectrum");
  } else {
    std::vector<Cx> roots = detail::durand_kerner(psi);
    for (const Cx& r : roots) {
      size_t best = 0;
      double best_dist = std::numeric_limits<double>::infinity();
      for (size_t k = 0; k < centers.size(); ++k) {
        double d = std::abs(r - to_complex(centers[k]));
        if (d < best_dist) {
          best_dist = d;
          best = k;
        }
      }
      ++sp.mults[best];
    }
    for (size_t k = 0; k < centers.size(); ++k)
      if (sp.mults[k] == 0)
        throw InvariantViolationError("supplied value " + detail::scalar_label(centers[k]) +
                                      " is not an eigenvalue");
    sp.recon_residual = detail::reconstruction_residual(sp.lambdas, sp.mults, psi);
    const double scale =
        std::max({1.0, max_abs_coeff(psi),
                  max_abs_coeff(poly_from_roots(sp.lambdas, sp.mults))});
    if (sp.recon_residual > kSpectrumResidualMargin * tol.tau_zero * scale)
      throw InvariantViolationError(
          "supplied eigenvalues do not reproduce the characteristic polynomial "
          "(residual " +
          std::to_string(sp.recon_residual) + ")");
  }

  int total = std::accumulate(sp.mults.begin(), sp.mults.end(), 0);
  if (total != n)
    throw InvariantViolationError("supplied eigenvalue multiplicities sum to " +
                                  std::to_string(total) + ", expected " + std::to_string(n));
  return sp;
}

template <class S>
Matrix<S> shift_by_eigenvalue(const Matrix<S>& A, const S& lambda) {
  Matrix<S> B = A;
  for (int i = 0; i < B.order(); ++i) B(i, i) -= lambda;
  return B;
}

namespace detail {

// Projection at 0 of a shifted matrix, trying the cheapest valid power
// first. The index from the rank sequence is the minimal u and keeps the
// powered matrix small (high powers inflate the characteristic coefficients
// until their small entries drown in rounding). If the supplied eigenvalue
// carries extraction error the rank sequence can understate the index; the
// verified projection invariants catch that, and the power escalates to the
// algebraic multiplicity and finally the order.
template <class S>
Eigenprojection<S> projection_for_shift(const Matrix<S>& B, int mult,
                                        const ToleranceConfig& tol) {
  std::vector<int> candidates{std::max(index_of(B, tol).nu, 1)};
  if (mult > candidates.back()) candidates.push_back(mult);
  if (B.order() > candidates.back()) candidates.push_back(B.order());
  for (size_t i = 0; i + 1 < candidates.size(); ++i) {
    try {
      return eigenprojection_with_u(B, candidates[i], tol);
    } catch (const InvariantViolationError&) {
      continue;
    } catch (const NotAnnihilatingError&) {
      continue;
    }
  }
  return eigenprojection_with_u(B, candidates.back(), tol);
}

}  // namespace detail

// Eigenprojection of A at a given eigenvalue: the projection at 0 of the
// shifted matrix A - lambda I.
template <class S>
Eigenprojection<S> eigenprojection_at(const Matrix<S>& A, const S& lambda,
                                      const ToleranceConfig& tol) {
  return detail::projection_for_shift(shift_by_eigenvalue(A, lambda), 0, tol);
}

// Index of lambda as an eigenvalue of A (0 when lambda is not an eigenvalue).
template <class S>
int eigenvalue_index(const Matrix<S>& A, const S& lambda, const ToleranceConfig& tol) {
  return index_of(shift_by_eigenvalue(A, lambda), tol).nu;
}

// The components of A: Z[k][j] for eigenvalue k and order j = 0..nu_k - 1.
// Z[k][0] is the eigenprojection at lambda_k; each later entry multiplies by
// (A - lambda_k I)/j, and the chain must reach zero within the algebraic
// multiplicity, which also reveals the index nu_k.
template <class S>
struct ComponentSet {
  std::vector<S> lambdas;
  std::vector<int> mults;
  std::vector<int> nus;
  std::vector<int> us;  // power used when building each projection
  std::vector<std::vector<Matrix<S>>> Z;
  int order = 0;

  int count() const { return static_cast<int>(lambdas.size()); }
  const Matrix<S>& projection(int k) const { return Z[static_cast<size_t>(k)][0]; }
};

// An eigenvalue recovered from a root cluster is only known to within its
// polished error estimate, and that uncertainty (not tau_zero) dominates the
// size of chain terms that are mathematically zero. The chain's zero test
// widens accordingly.
inline constexpr double kComponentChainSlack = 10.0;

template <class S>
ComponentSet<S> components(const Matrix<S>& A, const Spectrum<S>& sp,
                           const ToleranceConfig& tol) {
  ComponentSet<S> cs;
  cs.lambdas = sp.lambdas;
  cs.mults = sp.mults;
  cs.order = A.order();

  for (int k = 0; k < sp.count(); ++k) {
    Matrix<S> B = shift_by_eigenvalue(A, sp.lambdas[k]);
    Eigenprojection<S> proj = detail::projection_for_shift(B, sp.mults[k], tol);
    const double b_norm = std::max(1.0, inf_norm(B));

    ToleranceConfig chain_tol = tol;
    if (static_cast<size_t>(k) < sp.center_errors.size())
      chain_tol.tau_zero =
          std::max(tol.tau_zero, kComponentChainSlack * sp.center_errors[k]);

    std::vector<Matrix<S>> chain;
    chain.push_back(proj.Z);
    double chain_scale = std::max(1.0, inf_norm(proj.Z));
    int nu_k = 0;
    Matrix<S> term = proj.Z;
    for (int j = 1; j <= sp.mults[k]; ++j) {
      term = (B * term) * (field<S>::one() / field<S>::from_int(j));
      chain_scale *= b_norm / j;
      if (is_zero_matrix(term, chain_tol, std::max(1.0, chain_scale))) {
        nu_k = j;
        break;
      }
      chain.push_back(term);
    }
    if (nu_k == 0)
      throw NonTerminationError("component chain for eigenvalue " +
                                detail::scalar_label(sp.lambdas[k]) +
                                " did not reach zero within the multiplicity; the spectrum "
                                "may be misresolved - supply it explicitly");
    cs.nus.push_back(nu_k);
    cs.us.push_back(proj.u_used);
    cs.Z.push_back(std::move(chain));
  }
  return cs;
}

template <class S>
ComponentSet<S> components(const Matrix<S>& A, const ToleranceConfig& tol) {
  return components(A, eigenvalues(A, tol), tol);
}

// Minimal polynomial: the product of (lambda - lambda_k)^{nu_k}.
template <class S>
Poly<S> minimal_polynomial(const ComponentSet<S>& cs) {
  return poly_from_roots(cs.lambdas, cs.nus);
}

template <class S>
Poly<S> minimal_polynomial(const Matrix<S>& A, const ToleranceConfig& tol) {
  return minimal_polynomial(components(A, tol));
}

// A scalar function given by its derivative values: fn(lambda, j) returns
// f^{(j)}(lambda). Used to evaluate f(A) through the components.
template <class S>
using ScalarDerivativeFn = std::function<S(const S&, int)>;

template <class S>
std::vector<std::vector<S>> derivative_table(const ComponentSet<S>& cs,
                                             const ScalarDerivativeFn<S>& fn) {
  std::vector<std::vector<S>> table;
  for (int k = 0; k < cs.count(); ++k) {
    std::vector<S> row;
    for (int j = 0; j < cs.nus[k]; ++j) row.push_back(fn(cs.lambdas[k], j));
    table.push_back(std::move(row));
  }
  return table;
}

// f(A) = sum over eigenvalues k and orders j of f^{(j)}(lambda_k) Z_{kj}.
template <class S>
Matrix<S> matrix_function(const ComponentSet<S>& cs, const std::vector<std::vector<S>>& fvals) {
  if (fvals.size() != cs.Z.size())
    throw MissingDerivativeError("derivative table covers " + std::to_string(fvals.size()) +
                                 " eigenvalues, need " + std::to_string(cs.Z.size()));
  Matrix<S> out(cs.order);
  for (size_t k = 0; k < cs.Z.size(); ++k) {
    if (fvals[k].size() < cs.Z[k].size())
      throw MissingDerivativeError("eigenvalue " + detail::scalar_label(cs.lambdas[k]) +
                                   " needs derivatives up to order " +
                                   std::to_string(cs.Z[k].size() - 1));
    for (size_t j = 0; j < cs.Z[k].size(); ++j) out += cs.Z[k][j] * fvals[k][j];
  }
  return out;
}

template <class S>
Matrix<S> matrix_function(const ComponentSet<S>& cs, const ScalarDerivativeFn<S>& fn) {
  return matrix_function(cs, derivative_table(cs, fn));
}

// Built-in scalar functions for the common cases.

// exp: every derivative is exp itself. No exact rational values exist.
template <class S>
ScalarDerivativeFn<S> exp_function() {
  if constexpr (field<S>::is_exact) {
    throw MissingDerivativeError("exp has no exact rational values; use the floating backend");
  } else {
    return [](const S& lambda, int) { return std::exp(lambda); };
  }
}

// f(lambda) = lambda; reconstructs A itself from its components.
template <class S>
ScalarDerivativeFn<S> identity_function() {
  return [](const S& lambda, int j) {
    if (j == 0) return lambda;
    if (j == 1) return field<S>::one();
    return field<S>::zero();
  };
}

template <class S>
ScalarDerivativeFn<S> poly_function(Poly<S> p) {
  auto derivs = std::make_shared<std::vector<Poly<S>>>();
  derivs->push_back(std::move(p));
  return [derivs](const S& lambda, int j) {
    while (static_cast<int>(derivs->size()) <= j)
      derivs->push_back(poly_derivative(derivs->back()));
    return poly_eval((*derivs)[static_cast<size_t>(j)], lambda);
  };
}

// f(lambda) = (z - lambda)^{-1}; f(A) is the resolvent of A at z. The j-th
// derivative is j! (z - lambda)^{-(j+1)}. A gap below the negligibility
// threshold counts as a hit: an extracted eigenvalue carries rounding, so an
// exact-zero test would silently return an enormous garbage matrix instead.
template <class S>
ScalarDerivativeFn<S> resolvent_function(const S& z, const ToleranceConfig& tol) {
  return [z, tol](const S& lambda, int j) {
    S diff = z - lambda;
    const double scale =
        std::max({1.0, field<S>::mag_approx(z), field<S>::mag_approx(lambda)});
    const bool hit = field<S>::is_exact ? field<S>::mag_approx(diff) == 0.0
                                        : field<S>::mag_approx(diff) <= tol.tau_zero * scale;
    if (hit) throw SingularError("resolvent point coincides with an eigenvalue");
    S inv = field<S>::one() / diff;
    S value = inv;
    for (int t = 1; t <= j; ++t) value = value * inv * field<S>::from_int(t);
    return value;
  };
}

// Closed form from known eigenvalues: Z = prod over nonzero lambda_i of
// (I - (A/lambda_i)^u)^{u_i}, u at least the index of A, u_i at least the
// index of lambda_i. An eigenvalue counts as zero only when exactly zero
// (automatic extraction snaps near-zero centroids to zero beforehand).
template <class S>
Matrix<S> eigenprojection_from_eigenvalues(const Matrix<S>& A, const std::vector<S>& lambdas,
                                           const std::vector<int>& u_bounds, int u,
                                           const ToleranceConfig& tol) {
  if (lambdas.size() != u_bounds.size())
    throw Error(Errc::usage, "eigenvalue and exponent lists differ in length");
  if (u < 0) throw Error(Errc::usage, "u must be nonnegative");
  const int n = A.order();
  Matrix<S> Z = Matrix<S>::identity(n);
  for (size_t i = 0; i < lambdas.size(); ++i) {
    if (field<S>::mag_approx(lambdas[i]) == 0.0) continue;
    Matrix<S> factor =
        Matrix<S>::identity(n) - mat_pow(A * (field<S>::one() / lambdas[i]), u);
    Z = Z * mat_pow(factor, u_bounds[i]);
  }
  const double z_norm = std::max(1.0, inf_norm(Z));
  if (!is_zero_matrix(Z * Z - Z, tol, z_norm * z_norm))
    throw InvariantViolationError(
        "eigenvalue-product projection is not idempotent; are the eigenvalues and "
        "exponents right?");
  return Z;
}

template <class S>
Matrix<S> eigenprojection_from_eigenvalues(const Matrix<S>& A, const Spectrum<S>& sp,
                                           const ToleranceConfig& tol) {
  int u = 1;
  for (int k = 0; k < sp.count(); ++k)
    if (field<S>::mag_approx(sp.lambdas[k]) == 0.0) u = std::max(1, sp.mults[k]);
  return eigenprojection_from_eigenvalues(A, sp.lambdas, sp.mults, u, tol);
}

// Closed form for the order-j component at lambda_k:
// prod over i != k of (I - ((A - lambda_k I)/(lambda_i - lambda_k))^{u_k})^{u_i}
// times (j!)^{-1} (A - lambda_k I)^j.
template <class S>
Matrix<S> component_from_eigenvalues(const Matrix<S>& A, const std::vector<S>& lambdas,
                                     const std::vector<int>& u_bounds, int k, int j,
                                     const ToleranceConfig& tol) {
  if (lambdas.size() != u_bounds.size())
    throw Error(Errc::usage, "eigenvalue and exponent lists differ in length");
  if (k < 0 || k >= static_cast<int>(lambdas.size()))
    throw Error(Errc::usage, "eigenvalue position out of range");
  if (j < 0) throw Error(Errc::usage, "component order must be nonnegative");
  const int n = A.order();
  Matrix<S> B = shift_by_eigenvalue(A, lambdas[k]);
  Matrix<S> P = Matrix<S>::identity(n);
  for (size_t i = 0; i < lambdas.size(); ++i) {
    if (static_cast<int>(i) == k) continue;
    S gap = lambdas[i] - lambdas[k];
    if (field<S>::mag_approx(gap) == 0.0)
      throw Error(Errc::usage, "supplied eigenvalues are not distinct");
    Matrix<S> factor =
        Matrix<S>::identity(n) -
        mat_pow(B * (field<S>::one() / gap), u_bounds[static_cast<size_t>(k)]);
    P = P * mat_pow(factor, u_bounds[i]);
  }
  (void)tol;
  Matrix<S> W = Matrix<S>::identity(n);
  for (int t = 1; t <= j; ++t) W = (B * W) * (field<S>::one() / field<S>::from_int(t));
  return P * W;
}

template <class S>
Matrix<S> component_from_eigenvalues(const Matrix<S>& A, const Spectrum<S>& sp, int k, int j,
                                     const ToleranceConfig& tol) {
  return component_from_eigenvalues(A, sp.lambdas, sp.mults, k, j, tol);
}

// Consistency of eigenvalue indices under matrix powers, p >= 2: a nonzero
// eigenvalue keeps its index when A is raised to the p-th power (eigenvalues
// whose p-th powers coincide merge, taking the largest index), while the
// zero eigenvalue's index becomes ceil(nu / p).
template <class S>
CheckReport power_index_check(const Matrix<S>& A, const ComponentSet<S>& cs, int p,
                              const ToleranceConfig& tol) {
  if (p < 2) throw Error(Errc::usage, "power must be at least 2");
  CheckReport report;
  Matrix<S> Ap = mat_pow(A, p);
  for (int k = 0; k < cs.count(); ++k) {
    const S& lambda = cs.lambdas[k];
    std::string name = "eigenvalue " + detail::scalar_label(lambda) + " power " +
                       std::to_string(p);
    if (field<S>::mag_approx(lambda) == 0.0) {
      const int expected = index_power_check(cs.nus[k], p);
      const int measured = index_of(Ap, tol).nu;
      report.add(name, measured == expected,
                 "zero eigenvalue: expected " + std::to_string(expected) + ", measured " +
                     std::to_string(measured));
      continue;
    }
    S lp = lambda;
    for (int t = 1; t < p; ++t) lp = lp * lambda;
    // Eigenvalues whose p-th powers merge share the larger index.
    int expected = 0;
    for (int m = 0; m < cs.count(); ++m) {
      if (field<S>::mag_approx(cs.lambdas[m]) == 0.0) continue;
      S mp = cs.lambdas[m];
      for (int t = 1; t < p; ++t) mp = mp * cs.lambdas[m];
      bool same;
      if constexpr (field<S>::is_exact) {
        same = (mp == lp);
      } else {
        same = std::abs(to_complex(mp) - to_complex(lp)) <=
               tol.tau_cluster * std::max(1.0, field<S>::mag_approx(lp));
      }
      if (same) expected = std::max(expected, cs.nus[m]);
    }
    const int measured = eigenvalue_index(Ap, lp, tol);
    report.add(name, measured == expected,
               "expected " + std::to_string(expected) + ", measured " + std::to_string(measured));
  }
  return report;
}

}  // namespace eigenproj
