#pragma once

#include <iosfwd>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "eigenproj/matrix.hpp"
#include "eigenproj/poly.hpp"
#include "eigenproj/scalar.hpp"

namespace eigenproj {

// Which arithmetic to parse into. auto_detect picks exact when any entry is
// written as a rational p/q, floating otherwise.
enum class BackendChoice { auto_detect, exact, floating };

enum class OutputFormat { text, json };

using AnyMatrix = std::variant<Matrix<Cx>, Matrix<ExactScalar>>;
using AnyScalar = std::variant<Cx, ExactScalar>;

inline Backend backend_of(const AnyMatrix& m) {
  return std::holds_alternative<Matrix<ExactScalar>>(m) ? Backend::exact : Backend::floating;
}

// Parse a matrix from either supported format, detected by the leading
// character: '{' starts the JSON document {"n": n, "entries": [[re, im],
// ...]}; anything else is the plain-text format (order n, then n*n entries,
// '#' starting a comment line). Entries in text form: decimal `a`, complex
// `a+bi`, rational `p/q` in any combination per part.
AnyMatrix parse_matrix(const std::string& content, BackendChoice choice);
AnyMatrix parse_matrix_stream(std::istream& in, BackendChoice choice);

// Scalar parsing for flag values (--alpha, --eigenvalues). Same grammar as a
// single text-format entry.
Cx parse_cx(const std::string& text);
ExactScalar parse_exact(const std::string& text);
std::vector<Cx> parse_cx_list(const std::string& comma_separated);
std::vector<ExactScalar> parse_exact_list(const std::string& comma_separated);

std::string format_scalar(const Cx& z);
std::string format_scalar(const ExactScalar& v);

using NoteList = std::vector<std::pair<std::string, std::string>>;

// Matrix output. Text: optional "# key=value" note lines, then the order,
// then the rows; re-parseable by parse_matrix. JSON: the document above with
// the notes as extra string fields.
std::string format_matrix(const Matrix<Cx>& m, OutputFormat fmt, const NoteList& notes = {});
std::string format_matrix(const Matrix<ExactScalar>& m, OutputFormat fmt,
                          const NoteList& notes = {});
std::string format_matrix(const AnyMatrix& m, OutputFormat fmt, const NoteList& notes = {});

// Polynomial output: human-readable expansion in lambda plus the ascending
// coefficient list.
std::string format_poly(const Poly<Cx>& p, OutputFormat fmt, const NoteList& notes = {});
std::string format_poly(const Poly<ExactScalar>& p, OutputFormat fmt, const NoteList& notes = {});

// Read a whole file, or standard input when the path is "-".
std::string slurp_input(const std::string& path);

}  // namespace eigenproj
