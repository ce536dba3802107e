#include <iostream>
#include <set>
#include <string>

#include <CLI11.hpp>

#include "eigenproj/dispatch.hpp"

namespace {

const std::set<std::string> kCommands = {
    "index",  "charpoly", "eigenprojection", "drazin", "group-inverse", "components",
    "minpoly", "matfunc",  "markov",          "forest", "verify"};

}  // namespace

int main(int argc, char** argv) {
  eigenproj::RunConfig cfg;
  std::string backend = "auto";
  std::string format = "text";

  CLI::App app{
      "eigenproj: eigenprojections, Drazin inverses, spectral components, and\n"
      "matrix functions of square complex matrices via annihilating polynomials"};
  app.footer(
      "Commands:\n"
      "  index            smallest k with rank A^(k+1) = rank A^k\n"
      "  charpoly         characteristic polynomial (Faddeev recurrence)\n"
      "  eigenprojection  projection onto the nilpotent part at eigenvalue 0\n"
      "  drazin           Drazin inverse via the shifted-inverse formula\n"
      "  group-inverse    group inverse (requires index <= 1)\n"
      "  components       spectral component matrices Z_kj for every eigenvalue\n"
      "  minpoly          minimal polynomial from component data\n"
      "  matfunc          f(A) from spectral components (--fn required)\n"
      "  markov           limiting matrix of a row-stochastic chain\n"
      "  forest           eigenprojection of a Laplacian at eigenvalue 0\n"
      "  verify           run every independent construction and cross-check\n"
      "\n"
      "Input: order n, then n*n entries (row major). Entries are real (1.5),\n"
      "complex (2+3i), or rational (3/4; forces the exact backend under auto).\n"
      "'#' starts a comment. JSON input {\"n\":..,\"entries\":[[re,im],..]} is\n"
      "detected automatically.\n"
      "\n"
      "Exit codes:\n" +
      eigenproj::exit_code_table());

  app.add_option("command", cfg.command, "operation to run (see list below)")
      ->required()
      ->check(CLI::IsMember(kCommands));
  app.add_option("input", cfg.input_path, "matrix file, or - for stdin")
      ->capture_default_str();
  app.add_option("--backend", backend, "auto, exact, or floating")
      ->check(CLI::IsMember({"auto", "exact", "floating"}))
      ->capture_default_str();
  app.add_option("--tau-zero", cfg.tau_zero, "negligibility threshold (floating backend)");
  app.add_option("--tau-rank", cfg.tau_rank, "pivot threshold for rank decisions");
  app.add_option("--tau-cluster", cfg.tau_cluster, "eigenvalue clustering radius");
  app.add_option("--u", cfg.u_override, "power of A used by eigenprojection");
  app.add_option("--alpha", cfg.alpha, "shift for the Drazin formula (nonzero scalar)");
  app.add_option("--eigenvalues", cfg.eigenvalue_override,
                 "comma-separated known eigenvalues (overrides extraction)");
  app.add_option("--fn", cfg.fn, "matfunc function: exp, identity, poly:c0,c1,..., resolvent:z");
  app.add_option("--format", format, "text or json")
      ->check(CLI::IsMember({"text", "json"}))
      ->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : static_cast<int>(eigenproj::Errc::usage);
  }

  cfg.backend = backend == "exact"      ? eigenproj::BackendChoice::exact
                : backend == "floating" ? eigenproj::BackendChoice::floating
                                        : eigenproj::BackendChoice::auto_detect;
  cfg.format = format == "json" ? eigenproj::OutputFormat::json : eigenproj::OutputFormat::text;

  return eigenproj::run_command(cfg, std::cout, std::cerr);
}
