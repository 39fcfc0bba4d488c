// Ket-expression text format: "2|00> - (0.5+0.5i)|11> + 1/sqrt(2)|10>".
// Whitespace-insensitive; signs fold into coefficients; duplicate kets are
// summed at parse time. This grammar is the on-disk state format.
#pragma once

#include <complex>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "negafont/core.hpp"
#include "negafont/state.hpp"

namespace negafont {

struct KetTerm {
  std::complex<double> coeff;
  std::string bits;
};

struct KetExpression {
  std::vector<KetTerm> terms;  // unique bit strings, first-appearance order
  int n = 0;
};

// Errors carry the byte offset of the offending character.
KetExpression parse_ket(std::string_view text);

// Normalizes; zero-norm expressions are invalid states, not parse errors.
PureState<double> to_state(const KetExpression& expr,
                           int max_qubits = kDefaultMaxQubits);
PureState<double> parse_state(std::string_view text,
                              int max_qubits = kDefaultMaxQubits);

// Canonical printer; parse_ket(print_expression(e)) gives the same term list.
std::string print_expression(const KetExpression& expr);

// Amplitudes below drop_below * max|a| are omitted from the expression.
KetExpression to_expression(const PureState<double>& state,
                            double drop_below = 1e-15);
std::string print_state(const PureState<double>& state);

// Strips '#' comments and surrounding whitespace; nullopt for blank lines.
std::optional<std::string_view> expression_line(std::string_view line);

}  // namespace negafont
