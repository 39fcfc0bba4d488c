#include "negafont/ketparse.hpp"

#include <cctype>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <utility>

namespace negafont {
namespace {

struct Cursor {
  std::string_view text;
  std::size_t pos = 0;

  void skip_ws() {
    while (pos < text.size() &&
           std::isspace(static_cast<unsigned char>(text[pos])))
      ++pos;
  }
  bool at_end() const { return pos >= text.size(); }
  char peek() const { return pos < text.size() ? text[pos] : '\0'; }
  bool consume(char c) {
    if (peek() != c) return false;
    ++pos;
    return true;
  }
  [[noreturn]] void fail(const std::string& what) const {
    throw ParseError(pos, what);
  }
  [[noreturn]] void fail_at(std::size_t at, const std::string& what) const {
    throw ParseError(at, what);
  }
};

bool digit(char c) { return c >= '0' && c <= '9'; }

// Unsigned decimal literal, optional fraction and exponent.
double parse_number(Cursor& cur) {
  const std::size_t start = cur.pos;
  std::size_t p = cur.pos;
  const std::string_view s = cur.text;
  while (p < s.size() && digit(s[p])) ++p;
  if (p < s.size() && s[p] == '.') {
    ++p;
    while (p < s.size() && digit(s[p])) ++p;
  }
  if (p == start || (p == start + 1 && s[start] == '.'))
    cur.fail("expected number");
  if (p < s.size() && (s[p] == 'e' || s[p] == 'E')) {
    std::size_t q = p + 1;
    if (q < s.size() && (s[q] == '+' || s[q] == '-')) ++q;
    if (q < s.size() && digit(s[q])) {
      while (q < s.size() && digit(s[q])) ++q;
      p = q;
    }
  }
  const std::string slice(s.substr(start, p - start));
  cur.pos = p;
  return std::strtod(slice.c_str(), nullptr);
}

unsigned long parse_uint(Cursor& cur) {
  const std::size_t start = cur.pos;
  while (!cur.at_end() && digit(cur.peek())) ++cur.pos;
  if (cur.pos == start) cur.fail("expected integer");
  return std::strtoul(std::string(cur.text.substr(start, cur.pos - start)).c_str(),
                      nullptr, 10);
}

// coeff := number | number 'i' | 'i' | '(' number (sign number 'i')? ')'
//        | number '/sqrt(' uint ')'
std::complex<double> parse_coeff(Cursor& cur) {
  if (cur.consume('i')) return {0.0, 1.0};
  if (cur.consume('(')) {
    cur.skip_ws();
    const double re = parse_number(cur);
    cur.skip_ws();
    double im = 0.0;
    if (cur.peek() == '+' || cur.peek() == '-') {
      const double sign = cur.peek() == '-' ? -1.0 : 1.0;
      ++cur.pos;
      cur.skip_ws();
      im = sign * parse_number(cur);
      cur.skip_ws();
      if (!cur.consume('i')) cur.fail("expected 'i' after imaginary part");
      cur.skip_ws();
    }
    if (!cur.consume(')')) cur.fail("expected ')'");
    return {re, im};
  }
  const double x = parse_number(cur);
  cur.skip_ws();
  if (cur.consume('i')) return {0.0, x};
  if (cur.peek() == '/') {
    ++cur.pos;
    cur.skip_ws();
    for (char c : {'s', 'q', 'r', 't'})
      if (!cur.consume(c)) cur.fail("expected 'sqrt'");
    cur.skip_ws();
    if (!cur.consume('(')) cur.fail("expected '(' after sqrt");
    cur.skip_ws();
    const std::size_t arg_at = cur.pos;
    const unsigned long arg = parse_uint(cur);
    cur.skip_ws();
    if (!cur.consume(')')) cur.fail("expected ')'");
    if (arg == 0) cur.fail_at(arg_at, "sqrt argument must be positive");
    return {x / std::sqrt(static_cast<double>(arg)), 0.0};
  }
  return {x, 0.0};
}

std::string parse_ket_body(Cursor& cur) {
  if (!cur.consume('|')) cur.fail("expected ket");
  const std::size_t start = cur.pos;
  while (cur.peek() == '0' || cur.peek() == '1') ++cur.pos;
  if (cur.pos == start) cur.fail("expected binary digits");
  std::string bits(cur.text.substr(start, cur.pos - start));
  if (!cur.consume('>')) cur.fail("expected '>'");
  return bits;
}

}  // namespace

KetExpression parse_ket(std::string_view text) {
  Cursor cur{text};
  cur.skip_ws();
  if (cur.at_end()) cur.fail("empty input");

  KetExpression expr;
  std::vector<std::size_t> ket_offsets;
  double sign = 1.0;
  if (cur.peek() == '+' || cur.peek() == '-') {
    if (cur.text[cur.pos] == '-') sign = -1.0;
    ++cur.pos;
  }
  for (;;) {
    cur.skip_ws();
    std::complex<double> coeff(1.0, 0.0);
    if (cur.peek() != '|') {
      coeff = parse_coeff(cur);
      cur.skip_ws();
      if (cur.consume('*')) cur.skip_ws();
    }
    const std::size_t ket_at = cur.pos;
    std::string bits = parse_ket_body(cur);
    coeff *= sign;

    bool merged = false;
    for (auto& term : expr.terms)
      if (term.bits == bits) {
        term.coeff += coeff;
        merged = true;
        break;
      }
    if (!merged) {
      expr.terms.push_back({coeff, std::move(bits)});
      ket_offsets.push_back(ket_at);
    }

    cur.skip_ws();
    if (cur.at_end()) break;
    if (cur.peek() == '+' || cur.peek() == '-') {
      sign = cur.text[cur.pos] == '-' ? -1.0 : 1.0;
      ++cur.pos;
    } else {
      cur.fail("expected '+' or '-'");
    }
  }

  expr.n = static_cast<int>(expr.terms.front().bits.size());
  for (std::size_t k = 0; k < expr.terms.size(); ++k) {
    if (static_cast<int>(expr.terms[k].bits.size()) != expr.n)
      throw ParseError(ket_offsets[k], "mixed ket lengths");
  }
  if (expr.n < 2)
    throw ParseError(ket_offsets.front(), "kets must have at least 2 qubits");
  return expr;
}

PureState<double> to_state(const KetExpression& expr, int max_qubits) {
  std::vector<std::pair<BasisIndex, std::complex<double>>> terms;
  terms.reserve(expr.terms.size());
  for (const auto& term : expr.terms)
    terms.emplace_back(BasisIndex::from_bits(term.bits), term.coeff);
  return make_state(expr.n, terms, max_qubits);
}

PureState<double> parse_state(std::string_view text, int max_qubits) {
  return to_state(parse_ket(text), max_qubits);
}

namespace {

std::string format_real(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

std::string format_coeff(std::complex<double> c) {
  if (c.real() == 0.0) c = {0.0, c.imag()};  // strip signed zeros
  if (c.imag() == 0.0) c = {c.real(), 0.0};
  if (c.imag() == 0.0) {
    if (c.real() == 1.0) return "";
    return format_real(c.real());
  }
  if (c.real() == 0.0) {
    if (c.imag() == 1.0) return "i";
    return format_real(c.imag()) + "i";
  }
  const char mid = c.imag() < 0.0 ? '-' : '+';
  return "(" + format_real(c.real()) + mid + format_real(std::abs(c.imag())) +
         "i)";
}

}  // namespace

std::string print_expression(const KetExpression& expr) {
  std::string out;
  bool first = true;
  for (const auto& term : expr.terms) {
    std::complex<double> c = term.coeff;
    const bool negate =
        c.real() < 0.0 || (c.real() == 0.0 && c.imag() < 0.0);
    if (negate) c = -c;
    if (first)
      out += negate ? "-" : "";
    else
      out += negate ? " - " : " + ";
    first = false;
    out += format_coeff(c);
    out += "|";
    out += term.bits;
    out += ">";
  }
  return out;
}

KetExpression to_expression(const PureState<double>& state, double drop_below) {
  KetExpression expr;
  expr.n = state.n;
  const double cut = drop_below * state.max_abs_amp();
  for (unsigned i = 0; i < static_cast<unsigned>(dim_of(state.n)); ++i) {
    const std::complex<double> a = state.amp(i);
    if (std::abs(a) <= cut) continue;
    expr.terms.push_back({a, BasisIndex(state.n, i).bits()});
  }
  if (expr.terms.empty())
    expr.terms.push_back({state.amp(0), BasisIndex(state.n, 0u).bits()});
  return expr;
}

std::string print_state(const PureState<double>& state) {
  return print_expression(to_expression(state));
}

std::optional<std::string_view> expression_line(std::string_view line) {
  const std::size_t hash = line.find('#');
  if (hash != std::string_view::npos) line = line.substr(0, hash);
  std::size_t begin = 0;
  while (begin < line.size() &&
         std::isspace(static_cast<unsigned char>(line[begin])))
    ++begin;
  std::size_t end = line.size();
  while (end > begin &&
         std::isspace(static_cast<unsigned char>(line[end - 1])))
    --end;
  if (begin == end) return std::nullopt;
  return line.substr(begin, end - begin);
}

}  // namespace negafont
