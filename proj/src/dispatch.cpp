#include "eigenproj/dispatch.hpp"

#include <iomanip>
#include <iostream>
#include <sstream>

#include <json.hpp>

#include "eigenproj/applications.hpp"
#include "eigenproj/charpoly.hpp"
#include "eigenproj/drazin.hpp"
#include "eigenproj/eigenprojection.hpp"
#include "eigenproj/spectral.hpp"

namespace eigenproj {

namespace {

using json = nlohmann::json;

void check_tau(const char* name, double v) {
  if (!(v >= 0.0) || v >= 1.0)
    throw Error(Errc::usage, std::string(name) + " must lie in [0, 1)");
}

template <class S>
ToleranceConfig resolve_tol(const RunConfig& cfg, std::ostream& err) {
  if constexpr (field<S>::is_exact) {
    if (cfg.tau_zero || cfg.tau_rank || cfg.tau_cluster)
      err << "note: tolerance flags are ignored under the exact backend\n";
    return ToleranceConfig::exact();
  } else {
    ToleranceConfig tol = ToleranceConfig::floating();
    if (cfg.tau_zero) tol.tau_zero = *cfg.tau_zero;
    if (cfg.tau_rank) tol.tau_rank = *cfg.tau_rank;
    if (cfg.tau_cluster) tol.tau_cluster = *cfg.tau_cluster;
    check_tau("--tau-zero", tol.tau_zero);
    check_tau("--tau-rank", tol.tau_rank);
    check_tau("--tau-cluster", tol.tau_cluster);
    return tol;
  }
}

template <class S>
S parse_scalar_arg(const std::string& text) {
  if constexpr (field<S>::is_exact)
    return parse_exact(text);
  else
    return parse_cx(text);
}

template <class S>
std::vector<S> parse_scalar_list_arg(const std::string& text) {
  if constexpr (field<S>::is_exact)
    return parse_exact_list(text);
  else
    return parse_cx_list(text);
}

template <class S>
Spectrum<S> resolve_spectrum(const Matrix<S>& A, const RunConfig& cfg,
                             const ToleranceConfig& tol) {
  if (cfg.eigenvalue_override)
    return spectrum_from_values(A, parse_scalar_list_arg<S>(*cfg.eigenvalue_override), tol);
  return eigenvalues(A, tol);
}

template <class S>
S resolve_alpha(const Matrix<S>& A, const RunConfig& cfg) {
  if (cfg.alpha) return parse_scalar_arg<S>(*cfg.alpha);
  return default_alpha(A);
}

std::string join_ints(const std::vector<int>& v) {
  std::ostringstream os;
  for (size_t i = 0; i < v.size(); ++i) os << (i ? "," : "") << v[i];
  return os.str();
}

// ---- individual commands ------------------------------------------------

template <class S>
void cmd_index(const Matrix<S>& A, const RunConfig& cfg, const ToleranceConfig& tol,
               std::ostream& out) {
  IndexInfo info = index_of(A, tol);
  if (cfg.format == OutputFormat::text) {
    out << "# command=index\n";
    out << "# ranks(A^0,A^1,...)=" << join_ints(info.rank_seq) << "\n";
    out << "index " << info.nu << "\n";
  } else {
    json j;
    j["command"] = "index";
    j["index"] = info.nu;
    j["ranks"] = info.rank_seq;
    out << j.dump(2) << "\n";
  }
}

template <class S>
void cmd_charpoly(const Matrix<S>& A, const RunConfig& cfg, const ToleranceConfig& tol,
                  std::ostream& out) {
  CharData<S> cd = faddeev(A, tol);
  NoteList notes{{"command", "charpoly"},
                 {"method", "faddeev-recurrence"},
                 {"zero_multiplicity", std::to_string(cd.v)}};
  out << format_poly(cd.char_poly(), cfg.format, notes);
}

template <class S>
void cmd_eigenprojection(const Matrix<S>& A, const RunConfig& cfg, const ToleranceConfig& tol,
                         std::ostream& out) {
  Eigenprojection<S> proj = cfg.u_override ? eigenprojection_with_u(A, *cfg.u_override, tol)
                                           : eigenprojection_default(A, tol);
  NoteList notes{{"command", "eigenprojection"},
                 {"method", to_string(proj.source)},
                 {"u", std::to_string(proj.u_used)},
                 {"phi", "charpoly(A^" + std::to_string(proj.u_used) + ")"}};
  out << format_matrix(proj.Z, cfg.format, notes);
}

template <class S>
void cmd_drazin(const Matrix<S>& A, const RunConfig& cfg, const ToleranceConfig& tol,
                std::ostream& out) {
  S alpha = resolve_alpha(A, cfg);
  if (field<S>::mag_approx(alpha) == 0.0) throw ZeroAlphaError("--alpha must be nonzero");
  Eigenprojection<S> proj = eigenprojection_default(A, tol);
  Matrix<S> D = drazin_shifted(A, proj.Z, alpha, tol);
  NoteList notes{{"command", "drazin"},
                 {"method", to_string(DrazinMethod::shifted_inverse)},
                 {"alpha", format_scalar(to_complex(alpha))},
                 {"index", std::to_string(index_of(A, tol).nu)}};
  if constexpr (field<S>::is_exact) notes[2].second = format_scalar(alpha);
  out << format_matrix(D, cfg.format, notes);
}

template <class S>
void cmd_group_inverse(const Matrix<S>& A, const RunConfig& cfg, const ToleranceConfig& tol,
                       std::ostream& out) {
  DrazinResult<S> res = group_inverse(A, tol);
  NoteList notes{{"command", "group-inverse"},
                 {"method", to_string(res.method)},
                 {"index", std::to_string(res.nu)}};
  out << format_matrix(res.D, cfg.format, notes);
}

template <class S>
void cmd_components(const Matrix<S>& A, const RunConfig& cfg, const ToleranceConfig& tol,
                    std::ostream& out) {
  Spectrum<S> sp = resolve_spectrum(A, cfg, tol);
  ComponentSet<S> cs = components(A, sp, tol);
  if (cfg.format == OutputFormat::text) {
    out << "# command=components\n# distinct_eigenvalues=" << cs.count() << "\n";
    for (int k = 0; k < cs.count(); ++k) {
      for (int j = 0; j < cs.nus[k]; ++j) {
        NoteList notes{{"eigenvalue", format_scalar(to_complex(cs.lambdas[k]))},
                       {"mult", std::to_string(cs.mults[k])},
                       {"nu", std::to_string(cs.nus[k])},
                       {"u", std::to_string(cs.us[k])},
                       {"j", std::to_string(j)}};
        if constexpr (field<S>::is_exact) notes[0].second = format_scalar(cs.lambdas[k]);
        out << "\n" << format_matrix(cs.Z[static_cast<size_t>(k)][static_cast<size_t>(j)],
                                     cfg.format, notes);
      }
    }
  } else {
    json j;
    j["command"] = "components";
    json evs = json::array();
    for (int k = 0; k < cs.count(); ++k) {
      json ev;
      Cx z = to_complex(cs.lambdas[k]);
      ev["lambda"] = json::array({z.real(), z.imag()});
      if constexpr (field<S>::is_exact) ev["lambda_exact"] = format_scalar(cs.lambdas[k]);
      ev["mult"] = cs.mults[k];
      ev["nu"] = cs.nus[k];
      ev["u"] = cs.us[k];
      json comps = json::array();
      for (int jj = 0; jj < cs.nus[k]; ++jj) {
        const Matrix<S>& m = cs.Z[static_cast<size_t>(k)][static_cast<size_t>(jj)];
        json es = json::array();
        for (int r = 0; r < m.order(); ++r)
          for (int c = 0; c < m.order(); ++c) {
            Cx e = to_complex(m(r, c));
            es.push_back(json::array({e.real(), e.imag()}));
          }
        comps.push_back(es);
      }
      ev["components"] = comps;
      evs.push_back(ev);
    }
    j["eigenvalues"] = evs;
    j["n"] = cs.order;
    out << j.dump(2) << "\n";
  }
}

template <class S>
void cmd_minpoly(const Matrix<S>& A, const RunConfig& cfg, const ToleranceConfig& tol,
                 std::ostream& out) {
  ComponentSet<S> cs = components(A, resolve_spectrum(A, cfg, tol), tol);
  Poly<S> p = minimal_polynomial(cs);
  std::ostringstream indices;
  for (int k = 0; k < cs.count(); ++k) {
    if (k) indices << " ";
    if constexpr (field<S>::is_exact)
      indices << format_scalar(cs.lambdas[k]);
    else
      indices << format_scalar(to_complex(cs.lambdas[k]));
    indices << ":" << cs.nus[k];
  }
  NoteList notes{{"command", "minpoly"}, {"eigenvalue_indices", indices.str()}};
  out << format_poly(p, cfg.format, notes);
}

template <class S>
ScalarDerivativeFn<S> resolve_function(const std::string& spec, const ToleranceConfig& tol) {
  if (spec == "exp") return exp_function<S>();
  if (spec == "identity") return identity_function<S>();
  if (spec.rfind("poly:", 0) == 0) {
    std::vector<S> coeffs = parse_scalar_list_arg<S>(spec.substr(5));
    return poly_function(Poly<S>{std::move(coeffs)});
  }
  if (spec.rfind("resolvent:", 0) == 0)
    return resolvent_function(parse_scalar_arg<S>(spec.substr(10)), tol);
  throw Error(Errc::usage,
              "unknown --fn '" + spec + "'; expected exp, identity, poly:c0,c1,..., or resolvent:z");
}

template <class S>
void cmd_matfunc(const Matrix<S>& A, const RunConfig& cfg, const ToleranceConfig& tol,
                 std::ostream& out) {
  if (!cfg.fn) throw Error(Errc::usage, "matfunc needs --fn");
  ScalarDerivativeFn<S> fn = resolve_function<S>(*cfg.fn, tol);
  ComponentSet<S> cs = components(A, resolve_spectrum(A, cfg, tol), tol);
  Matrix<S> F = matrix_function(cs, fn);
  NoteList notes{{"command", "matfunc"},
                 {"fn", *cfg.fn},
                 {"distinct_eigenvalues", std::to_string(cs.count())}};
  out << format_matrix(F, cfg.format, notes);
}

template <class S>
void cmd_markov(const Matrix<S>& A, const RunConfig& cfg, const ToleranceConfig& tol,
                std::ostream& out) {
  Matrix<S> Z = markov_limit(A, tol);
  NoteList notes{{"command", "markov"}, {"method", "eigenprojection-of-(I-P)"}};
  out << format_matrix(Z, cfg.format, notes);
}

template <class S>
void cmd_forest(const Matrix<S>& A, const RunConfig& cfg, const ToleranceConfig& tol,
                std::ostream& out) {
  Matrix<S> Z = laplacian_forest_projection(A, tol);
  NoteList notes{{"command", "forest"}, {"method", "eigenprojection-of-laplacian"}};
  out << format_matrix(Z, cfg.format, notes);
}

// ---- verify: every construction, cross-checked --------------------------

template <class S>
int cmd_verify(const Matrix<S>& A, const RunConfig& cfg, const ToleranceConfig& tol,
               std::ostream& out) {
  CheckReport report;
  IndexInfo info = index_of(A, tol);
  Eigenprojection<S> main_proj = eigenprojection_default(A, tol);
  const Matrix<S>& Z = main_proj.Z;
  const double agree_scale = std::max(1.0, inf_norm(Z));

  auto agrees = [&](const Matrix<S>& other, std::string& detail) {
    const double diff = max_abs_diff(other, Z);
    std::ostringstream os;
    os << "max diff " << diff;
    detail = os.str();
    if constexpr (field<S>::is_exact) return other == Z;
    return diff <= kVerifyAgreement * agree_scale;
  };

  auto run_construction = [&](const std::string& name, auto&& build) {
    try {
      Matrix<S> other = build();
      std::string detail;
      bool ok = agrees(other, detail);
      report.add(name, ok, detail);
    } catch (const IrrationalSpectrumError& e) {
      report.add(name, true, std::string("skipped: ") + e.what());
    } catch (const Error& e) {
      report.add(name, false, e.what());
    }
  };

  CharData<S> cd = faddeev(A, tol);
  const int u = std::max(info.nu, 1);
  if (cd.v >= 1) {
    run_construction("construction faddeev-ratio",
                     [&] { return eigenprojection_faddeev_ratio(A, u, cd, tol); });
  } else {
    report.add("construction faddeev-ratio", is_zero_matrix(Z, tol, 1.0),
               "nonsingular input: projection must be zero");
  }

  if constexpr (!field<S>::is_exact) {
    run_construction("construction limit", [&] { return eigenprojection_limit(A, u, tol); });
  }

  run_construction("construction nullspace-basis",
                   [&] { return eigenprojection_nullspace(A, info.nu, tol); });

  run_construction("construction eigenvalue-product", [&] {
    return eigenprojection_from_eigenvalues(A, resolve_spectrum(A, cfg, tol), tol);
  });

  run_construction("annihilator independence (shifted factor)", [&] {
    Matrix<S> Apow = mat_pow(A, main_proj.u_used);
    Poly<S> phi = faddeev(Apow, tol).char_poly();
    Poly<S> shifted{std::vector<S>{-field<S>::from_int(7), field<S>::one()}};
    return eigenprojection_from_annihilator(A, main_proj.u_used, poly_mul(phi, shifted), tol).Z;
  });

  run_construction("projection of A^2 matches",
                   [&] { return eigenprojection_default(mat_pow(A, 2), tol).Z; });
  run_construction("projection of A^3 matches",
                   [&] { return eigenprojection_default(mat_pow(A, 3), tol).Z; });

  CheckReport chars = verify_characterizations(A, Z, tol);
  for (auto& item : chars.items) report.add("property " + item.name, item.pass, item.detail);

  // Drazin inverse: primary construction, axioms, and method agreement.
  try {
    S alpha = resolve_alpha(A, cfg);
    Matrix<S> D = drazin_shifted(A, Z, alpha, tol);
    CheckReport axioms = verify_drazin_axioms(A, D, tol);
    for (auto& item : axioms.items) report.add("drazin " + item.name, item.pass, item.detail);

    const double d_scale = std::max(1.0, inf_norm(D));
    auto d_agrees = [&](const Matrix<S>& other, std::string& detail) {
      const double diff = max_abs_diff(other, D);
      detail = "max diff " + std::to_string(diff);
      if constexpr (field<S>::is_exact) return other == D;
      return diff <= kVerifyAgreement * d_scale;
    };
    std::string detail;
    Matrix<S> Dp = drazin_power_shift(A, Z, info.nu, tol);
    bool power_ok = d_agrees(Dp, detail);
    report.add("drazin power-shift agrees", power_ok, detail);
    if (info.nu <= 1) {
      Matrix<S> Dg = inverse(A + Z, tol) - Z;
      bool group_ok = d_agrees(Dg, detail);
      report.add("drazin group-shift agrees", group_ok, detail);
    }
  } catch (const Error& e) {
    report.add("drazin construction", false, e.what());
  }

  if (cfg.format == OutputFormat::text) {
    for (const auto& item : report.items) {
      out << (item.pass ? "ok   " : "FAIL ") << std::left << std::setw(44) << item.name;
      if (!item.detail.empty()) out << " " << item.detail;
      out << "\n";
    }
    out << (report.all_pass() ? "verify: all checks passed\n" : "verify: CHECKS FAILED\n");
  } else {
    json j;
    j["command"] = "verify";
    json checks = json::array();
    for (const auto& item : report.items)
      checks.push_back({{"name", item.name}, {"pass", item.pass}, {"detail", item.detail}});
    j["checks"] = checks;
    j["pass"] = report.all_pass();
    out << j.dump(2) << "\n";
  }
  return report.all_pass() ? 0 : static_cast<int>(Errc::verification_failed);
}

template <class S>
int dispatch_typed(const Matrix<S>& A, const RunConfig& cfg, std::ostream& out,
                   std::ostream& err) {
  ToleranceConfig tol = resolve_tol<S>(cfg, err);
  if (cfg.u_override && *cfg.u_override < 0) throw Error(Errc::usage, "--u must be nonnegative");

  const std::string& c = cfg.command;
  if (c == "index")
    cmd_index(A, cfg, tol, out);
  else if (c == "charpoly")
    cmd_charpoly(A, cfg, tol, out);
  else if (c == "eigenprojection")
    cmd_eigenprojection(A, cfg, tol, out);
  else if (c == "drazin")
    cmd_drazin(A, cfg, tol, out);
  else if (c == "group-inverse")
    cmd_group_inverse(A, cfg, tol, out);
  else if (c == "components")
    cmd_components(A, cfg, tol, out);
  else if (c == "minpoly")
    cmd_minpoly(A, cfg, tol, out);
  else if (c == "matfunc")
    cmd_matfunc(A, cfg, tol, out);
  else if (c == "markov")
    cmd_markov(A, cfg, tol, out);
  else if (c == "forest")
    cmd_forest(A, cfg, tol, out);
  else if (c == "verify")
    return cmd_verify(A, cfg, tol, out);
  else
    throw Error(Errc::usage, "unknown command: " + c);
  return 0;
}

}  // namespace

int run_command(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  try {
    AnyMatrix am = parse_matrix(slurp_input(cfg.input_path), cfg.backend);
    return std::visit([&](const auto& A) { return dispatch_typed(A, cfg, out, err); }, am);
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return e.exit_code();
  } catch (const std::exception& e) {
    err << "internal error: " << e.what() << "\n";
    return static_cast<int>(Errc::internal);
  }
}

std::string exit_code_table() {
  struct Row {
    Errc code;
    const char* meaning;
  };
  static const Row rows[] = {
      {Errc::ok, "success"},
      {Errc::internal, "internal error"},
      {Errc::usage, "bad command line or unusable flag value"},
      {Errc::parse_error, "input matrix could not be parsed"},
      {Errc::non_square, "input is not a square matrix of order >= 1"},
      {Errc::singular, "a matrix that must be inverted is singular"},
      {Errc::zero_alpha, "--alpha is zero"},
      {Errc::zero_polynomial, "annihilating polynomial is identically zero"},
      {Errc::not_annihilating, "polynomial does not annihilate the matrix power"},
      {Errc::invariant_violation, "a verified invariant failed (often: u below the index)"},
      {Errc::ill_conditioned, "trailing characteristic coefficient too small to use"},
      {Errc::no_convergence, "iterative construction did not stabilize"},
      {Errc::irrational_spectrum, "exact eigenvalue search failed; supply --eigenvalues"},
      {Errc::missing_derivative, "function value or derivative unavailable"},
      {Errc::non_termination, "component chain did not reach zero"},
      {Errc::index_too_high, "group inverse requested but the index exceeds 1"},
      {Errc::not_stochastic, "markov input is not row-stochastic"},
      {Errc::not_laplacian, "forest input is not a Laplacian"},
      {Errc::verification_failed, "verify found a disagreement"},
  };
  std::ostringstream os;
  for (const Row& r : rows)
    os << "  " << std::setw(2) << static_cast<int>(r.code) << "  " << r.meaning << "\n";
  return os.str();
}

}  // namespace eigenproj
