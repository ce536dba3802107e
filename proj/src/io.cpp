#include "eigenproj/io.hpp"

#include <boost/multiprecision/cpp_int.hpp>

#include <cctype>
#include <charconv>
#include <cmath>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string_view>

#include <json.hpp>

namespace eigenproj {

namespace {

using json = nlohmann::json;

constexpr int kMaxOrder = 1024;
constexpr long long kMaxExponent = 4096;

struct Token {
  std::string text;
  int line = 0;
  int col = 0;
};

std::string at(const Token& t) {
  return " at line " + std::to_string(t.line) + ", column " + std::to_string(t.col);
}

// Whitespace-separated tokens; '#' comments run to end of line.
std::vector<Token> tokenize(const std::string& s) {
  std::vector<Token> tokens;
  int line = 1, col = 1;
  size_t i = 0;
  while (i < s.size()) {
    char c = s[i];
    if (c == '\n') {
      ++line;
      col = 1;
      ++i;
      continue;
    }
    if (c == '#') {
      while (i < s.size() && s[i] != '\n') ++i;
      continue;
    }
    if (std::isspace(static_cast<unsigned char>(c))) {
      ++col;
      ++i;
      continue;
    }
    Token t;
    t.line = line;
    t.col = col;
    while (i < s.size() && !std::isspace(static_cast<unsigned char>(s[i])) && s[i] != '#') {
      t.text.push_back(s[i]);
      ++i;
      ++col;
    }
    tokens.push_back(std::move(t));
  }
  return tokens;
}

struct ParsedScalar {
  Rational re{0};
  Rational im{0};
  bool rational = false;  // entry was written with a '/',"forcing" exact
};

Rational pow10(long long e) {
  using boost::multiprecision::cpp_int;
  cpp_int p = boost::multiprecision::pow(cpp_int(10), static_cast<unsigned>(e < 0 ? -e : e));
  return e < 0 ? Rational(1) / Rational(p) : Rational(p);
}

// One entry token: `a`, `a+bi`, `p/q`, `bi`, `i`, with decimal or rational
// magnitudes and optional exponents. Decimals are read exactly in base 10.
class ScalarParser {
 public:
  ScalarParser(std::string_view text, std::string where) : s_(text), where_(std::move(where)) {}

  ParsedScalar parse() {
    ParsedScalar out;
    auto [v1, imag1] = signed_term();
    if (done()) {
      (imag1 ? out.im : out.re) = v1;
      out.rational = rational_;
      return out;
    }
    if (peek() != '+' && peek() != '-') fail("unexpected character '" + std::string(1, peek()) + "'");
    auto [v2, imag2] = signed_term();
    if (imag1 || !imag2) fail("expected the real part first, then the imaginary part");
    if (!done()) fail("trailing characters");
    out.re = v1;
    out.im = v2;
    out.rational = rational_;
    return out;
  }

 private:
  std::string_view s_;
  std::string where_;
  size_t i_ = 0;
  bool rational_ = false;

  [[noreturn]] void fail(const std::string& msg) const {
    throw ParseError("bad entry '" + std::string(s_) + "'" + where_ + ": " + msg);
  }
  bool done() const { return i_ >= s_.size(); }
  char peek() const { return s_[i_]; }
  bool is_digit() const { return !done() && std::isdigit(static_cast<unsigned char>(peek())); }

  std::pair<Rational, bool> signed_term() {
    Rational sign{1};
    if (!done() && (peek() == '+' || peek() == '-')) {
      if (peek() == '-') sign = -1;
      ++i_;
    }
    if (done()) fail("a term is missing");
    if (peek() == 'i') {
      ++i_;
      return {sign, true};
    }
    Rational mag = number();
    bool imag = false;
    if (!done() && peek() == 'i') {
      ++i_;
      imag = true;
    }
    return {sign * mag, imag};
  }

  Rational digits_as_int(const char* what) {
    if (!is_digit()) fail(std::string("expected digits for the ") + what);
    Rational v{0};
    while (is_digit()) {
      v = v * 10 + (peek() - '0');
      ++i_;
    }
    return v;
  }

  Rational number() {
    Rational intpart{0};
    bool any_digits = false;
    while (is_digit()) {
      intpart = intpart * 10 + (peek() - '0');
      ++i_;
      any_digits = true;
    }
    if (!done() && peek() == '/') {
      if (!any_digits) fail("missing numerator");
      ++i_;
      Rational den = digits_as_int("denominator");
      if (den == 0) fail("zero denominator");
      rational_ = true;
      return intpart / den;
    }
    Rational value = intpart;
    if (!done() && peek() == '.') {
      ++i_;
      Rational frac{0};
      long long places = 0;
      while (is_digit()) {
        frac = frac * 10 + (peek() - '0');
        ++i_;
        ++places;
        any_digits = true;
      }
      if (places > 0) value += frac / pow10(places);
    }
    if (!any_digits) fail("expected a number");
    if (!done() && (peek() == 'e' || peek() == 'E')) {
      ++i_;
      long long esign = 1;
      if (!done() && (peek() == '+' || peek() == '-')) {
        if (peek() == '-') esign = -1;
        ++i_;
      }
      if (!is_digit()) fail("expected digits in the exponent");
      long long e = 0;
      while (is_digit()) {
        e = e * 10 + (peek() - '0');
        ++i_;
        if (e > kMaxExponent) fail("exponent out of range");
      }
      value *= pow10(esign * e);
    }
    return value;
  }
};

int parse_order(const Token& t) {
  int n = 0;
  for (char c : t.text) {
    if (!std::isdigit(static_cast<unsigned char>(c)))
      throw ParseError("matrix order must be a positive integer" + at(t));
    n = n * 10 + (c - '0');
    if (n > kMaxOrder) throw ParseError("matrix order above the supported limit of " +
                                        std::to_string(kMaxOrder) + at(t));
  }
  if (t.text.empty() || n < 1)
    throw ParseError("matrix order must be a positive integer" + at(t));
  return n;
}

AnyMatrix build(int n, const std::vector<ParsedScalar>& entries, bool any_rational,
                BackendChoice choice) {
  const bool exact = choice == BackendChoice::exact ||
                     (choice == BackendChoice::auto_detect && any_rational);
  if (exact) {
    Matrix<ExactScalar> m(n);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) {
        const ParsedScalar& e = entries[static_cast<size_t>(i) * n + j];
        m(i, j) = ExactScalar(e.re, e.im);
      }
    return m;
  }
  Matrix<Cx> m(n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      const ParsedScalar& e = entries[static_cast<size_t>(i) * n + j];
      m(i, j) = Cx(static_cast<double>(e.re), static_cast<double>(e.im));
    }
  return m;
}

AnyMatrix parse_text_format(const std::string& content, BackendChoice choice) {
  std::vector<Token> tokens = tokenize(content);
  if (tokens.empty()) throw ParseError("empty input");
  const int n = parse_order(tokens[0]);
  const size_t need = static_cast<size_t>(n) * n;
  if (tokens.size() - 1 < need)
    throw ParseError("expected " + std::to_string(need) + " entries for order " +
                     std::to_string(n) + ", found " + std::to_string(tokens.size() - 1));
  if (tokens.size() - 1 > need)
    throw ParseError("unexpected extra input" + at(tokens[need + 1]));

  std::vector<ParsedScalar> entries;
  entries.reserve(need);
  bool any_rational = false;
  for (size_t k = 1; k < tokens.size(); ++k) {
    ScalarParser p(tokens[k].text, at(tokens[k]));
    entries.push_back(p.parse());
    any_rational = any_rational || entries.back().rational;
  }
  return build(n, entries, any_rational, choice);
}

AnyMatrix parse_json_format(const std::string& content, BackendChoice choice) {
  json j;
  try {
    j = json::parse(content);
  } catch (const json::parse_error& e) {
    throw ParseError(std::string("invalid JSON: ") + e.what());
  }
  if (!j.is_object() || !j.contains("n") || !j.contains("entries"))
    throw ParseError("JSON matrix needs the fields \"n\" and \"entries\"");
  if (!j["n"].is_number_integer() || j["n"].get<long long>() < 1 ||
      j["n"].get<long long>() > kMaxOrder)
    throw ParseError("\"n\" must be an integer between 1 and " + std::to_string(kMaxOrder));
  const int n = j["n"].get<int>();
  const json& es = j["entries"];
  const size_t need = static_cast<size_t>(n) * n;
  if (!es.is_array() || es.size() != need)
    throw ParseError("\"entries\" must be an array of " + std::to_string(need) +
                     " [re, im] pairs in row-major order");
  std::vector<ParsedScalar> entries;
  entries.reserve(need);
  for (size_t k = 0; k < need; ++k) {
    const json& e = es[k];
    if (!e.is_array() || e.size() != 2 || !e[0].is_number() || !e[1].is_number())
      throw ParseError("entry " + std::to_string(k) + " must be a [re, im] number pair");
    ParsedScalar p;
    p.re = rational_from_double(e[0].get<double>());
    p.im = rational_from_double(e[1].get<double>());
    entries.push_back(std::move(p));
  }
  return build(n, entries, false, choice);
}

std::string dtos(double v) {
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

std::string rational_str(const Rational& r) { return r.str(); }

json matrix_to_json(const Matrix<Cx>& m, const NoteList& notes) {
  json j;
  for (const auto& [k, v] : notes) j[k] = v;
  j["n"] = m.order();
  json es = json::array();
  for (int i = 0; i < m.order(); ++i)
    for (int jj = 0; jj < m.order(); ++jj)
      es.push_back(json::array({m(i, jj).real(), m(i, jj).imag()}));
  j["entries"] = es;
  return j;
}

template <class S>
std::string matrix_to_text(const Matrix<S>& m, const NoteList& notes) {
  std::ostringstream os;
  for (const auto& [k, v] : notes) os << "# " << k << "=" << v << "\n";
  os << m.order() << "\n";
  for (int i = 0; i < m.order(); ++i) {
    for (int j = 0; j < m.order(); ++j) {
      if (j) os << " ";
      os << format_scalar(m(i, j));
    }
    os << "\n";
  }
  return os.str();
}

template <class S>
Matrix<Cx> to_float_matrix(const Matrix<S>& m) {
  Matrix<Cx> f(m.order());
  for (int i = 0; i < m.order(); ++i)
    for (int j = 0; j < m.order(); ++j) f(i, j) = to_complex(m(i, j));
  return f;
}

// Human-readable polynomial in lambda, highest degree first.
template <class S>
std::string poly_pretty(const Poly<S>& p) {
  if (p.empty()) return "0";
  std::ostringstream os;
  bool first = true;
  for (int k = p.degree(); k >= 0; --k) {
    const S& c = p.c[static_cast<size_t>(k)];
    if (field<S>::mag_approx(c) == 0.0 && !(p.degree() == 0 && k == 0)) continue;
    std::string cs = format_scalar(c);
    bool neg = !cs.empty() && cs[0] == '-';
    if (first) {
      first = false;
    } else {
      os << (neg ? " - " : " + ");
      if (neg) cs = cs.substr(1);
    }
    const bool is_unit = (cs == "1");
    const bool needs_parens = cs.find_first_of("+-", 1) != std::string::npos;
    if (k == 0) {
      os << cs;
    } else {
      if (!is_unit) os << (needs_parens ? "(" + cs + ")" : cs) << " ";
      os << "lambda";
      if (k > 1) os << "^" << k;
    }
  }
  return os.str();
}

template <class S>
std::string poly_to_output(const Poly<S>& p, OutputFormat fmt, const NoteList& notes) {
  if (fmt == OutputFormat::text) {
    std::ostringstream os;
    for (const auto& [k, v] : notes) os << "# " << k << "=" << v << "\n";
    os << "# p(lambda) = " << poly_pretty(p) << "\n";
    os << "degree " << p.degree() << "\n";
    for (size_t k = 0; k < p.c.size(); ++k) {
      if (k) os << " ";
      os << format_scalar(p.c[k]);
    }
    os << "\n";
    return os.str();
  }
  json j;
  for (const auto& [k, v] : notes) j[k] = v;
  j["degree"] = p.degree();
  json cs = json::array();
  for (const S& c : p.c) {
    Cx z = to_complex(c);
    cs.push_back(json::array({z.real(), z.imag()}));
  }
  j["coefficients"] = cs;
  if constexpr (field<S>::is_exact) {
    json ex = json::array();
    for (const S& c : p.c) ex.push_back(format_scalar(c));
    j["coefficients_exact"] = ex;
  }
  j["pretty"] = poly_pretty(p);
  return j.dump(2) + "\n";
}

}  // namespace

AnyMatrix parse_matrix(const std::string& content, BackendChoice choice) {
  for (char c : content) {
    if (std::isspace(static_cast<unsigned char>(c))) continue;
    if (c == '{') return parse_json_format(content, choice);
    break;
  }
  return parse_text_format(content, choice);
}

AnyMatrix parse_matrix_stream(std::istream& in, BackendChoice choice) {
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_matrix(buf.str(), choice);
}

Cx parse_cx(const std::string& text) {
  ScalarParser p(text, "");
  ParsedScalar v = p.parse();
  return Cx(static_cast<double>(v.re), static_cast<double>(v.im));
}

ExactScalar parse_exact(const std::string& text) {
  ScalarParser p(text, "");
  ParsedScalar v = p.parse();
  return ExactScalar(v.re, v.im);
}

namespace {
std::vector<std::string> split_commas(const std::string& s) {
  std::vector<std::string> parts;
  std::string cur;
  for (char c : s) {
    if (c == ',') {
      parts.push_back(cur);
      cur.clear();
    } else if (!std::isspace(static_cast<unsigned char>(c))) {
      cur.push_back(c);
    }
  }
  parts.push_back(cur);
  return parts;
}
}  // namespace

std::vector<Cx> parse_cx_list(const std::string& s) {
  std::vector<Cx> out;
  for (const std::string& part : split_commas(s)) out.push_back(parse_cx(part));
  return out;
}

std::vector<ExactScalar> parse_exact_list(const std::string& s) {
  std::vector<ExactScalar> out;
  for (const std::string& part : split_commas(s)) out.push_back(parse_exact(part));
  return out;
}

std::string format_scalar(const Cx& z) {
  const double re = z.real(), im = z.imag();
  if (im == 0.0) return dtos(re);
  if (re == 0.0) return dtos(im) + "i";
  return dtos(re) + (im < 0 ? "-" : "+") + dtos(std::abs(im)) + "i";
}

std::string format_scalar(const ExactScalar& v) {
  if (v.im == 0) return rational_str(v.re);
  if (v.re == 0) return rational_str(v.im) + "i";
  return rational_str(v.re) + (v.im < 0 ? "-" : "+") + rational_str(abs(v.im)) + "i";
}

std::string format_matrix(const Matrix<Cx>& m, OutputFormat fmt, const NoteList& notes) {
  if (fmt == OutputFormat::text) return matrix_to_text(m, notes);
  return matrix_to_json(m, notes).dump(2) + "\n";
}

std::string format_matrix(const Matrix<ExactScalar>& m, OutputFormat fmt, const NoteList& notes) {
  if (fmt == OutputFormat::text) return matrix_to_text(m, notes);
  // JSON carries doubles; exact values are rounded to the nearest double.
  return matrix_to_json(to_float_matrix(m), notes).dump(2) + "\n";
}

std::string format_matrix(const AnyMatrix& m, OutputFormat fmt, const NoteList& notes) {
  return std::visit([&](const auto& mm) { return format_matrix(mm, fmt, notes); }, m);
}

std::string format_poly(const Poly<Cx>& p, OutputFormat fmt, const NoteList& notes) {
  return poly_to_output(p, fmt, notes);
}

std::string format_poly(const Poly<ExactScalar>& p, OutputFormat fmt, const NoteList& notes) {
  return poly_to_output(p, fmt, notes);
}

std::string slurp_input(const std::string& path) {
  if (path == "-") {
    std::ostringstream buf;
    buf << std::cin.rdbuf();
    return buf.str();
  }
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(Errc::usage, "cannot open input file: " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

}  // namespace eigenproj
