// GPT coherence signatures, class labels for 3 and 4 qubits, the three-qubit
// tangle from named font determinants, and class-counting formulas.
#pragma once

#include <algorithm>
#include <bit>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "negafont/canonical.hpp"
#include "negafont/core.hpp"
#include "negafont/fonts.hpp"
#include "negafont/negativity.hpp"
#include "negafont/state.hpp"

namespace negafont {

// Orders K >= 2 for which some coherence pair across qubit p survives: I, J
// with i_p != j_p, hamming(I, J) = K and |a_I a_J| above threshold.
struct GptSignature {
  int p = 0;
  std::vector<int> ks;  // ascending
};

template <typename Scalar>
GptSignature gpt_signature(const PureState<Scalar>& state, int p,
                           Scalar tol = Scalar(kDefaultTol)) {
  const int n = state.n;
  if (p < 1 || p > n) throw std::domain_error("qubit index out of range");
  const Scalar scale = state.max_abs_amp();
  const Scalar cut = tol * scale * scale;
  std::vector<char> seen(static_cast<std::size_t>(n) + 1, 0);
  const unsigned dim = dim_of(n);
  for (unsigned i = 0; i + 1 < dim; ++i) {
    if (std::abs(state.amp(i)) <= tol * scale) continue;
    for (unsigned j = i + 1; j < dim; ++j) {
      if (bit_of(i, n, p) == bit_of(j, n, p)) continue;
      const int k = hamming(i, j);
      if (k < 2 || seen[static_cast<std::size_t>(k)]) continue;
      if (std::abs(state.amp(i)) * std::abs(state.amp(j)) > cut)
        seen[static_cast<std::size_t>(k)] = 1;
    }
  }
  GptSignature sig;
  sig.p = p;
  for (int k = 2; k <= n; ++k)
    if (seen[static_cast<std::size_t>(k)]) sig.ks.push_back(k);
  return sig;
}

// Strength order: compare order sets highest-first; a proper prefix loses.
// This realizes "max K, then set size" and totally orders the signatures.
inline bool signature_less(const std::vector<int>& a,
                           const std::vector<int>& b) {
  std::vector<int> da(a.rbegin(), a.rend());
  std::vector<int> db(b.rbegin(), b.rend());
  return std::lexicographical_compare(da.begin(), da.end(), db.begin(),
                                      db.end());
}

// tau3 = 4 |(D^{000} + D^{001})^2 - 4 D_{(A3)0}^{00} D_{(A3)1}^{00}| from the
// qubit-1 fonts; coincides with 4 |Det(a)| for the 2x2x2 hyperdeterminant.
template <typename Scalar>
Scalar three_tangle(const PureState<Scalar>& state) {
  if (state.n != 3)
    throw std::domain_error("three_tangle expects a 3-qubit state");
  const Complex<Scalar> d000 = font_det(state, 1, 0u, 3u);
  const Complex<Scalar> d001 = font_det(state, 1, 1u, 2u);
  const Complex<Scalar> ds0 = font_det(state, 1, 0u, 2u);
  const Complex<Scalar> ds1 = font_det(state, 1, 1u, 3u);
  const Complex<Scalar> sum = d000 + d001;
  return Scalar(4) * std::abs(sum * sum - Scalar(4) * ds0 * ds1);
}

template <typename Scalar>
struct QubitView {
  GptSignature signature;
  FontCensus<Scalar> census;
  Scalar negativity = Scalar(0);
  std::map<int, Scalar> kpt_negativity;
};

template <typename Scalar>
struct ClassReport {
  int n = 0;
  std::string class_label;
  std::vector<QubitView<Scalar>> per_qubit;  // of the canonical state
  int headline_qubit = 1;
  std::map<int, int> subclass;  // census counts at the headline qubit
  std::optional<Scalar> tau3;
  std::vector<int> separable_qubits;
  bool fully_separable = false;
  bool genuine = false;
  bool signatures_disagree = false;
  CanonicalForm<Scalar> canonical;
  std::string canonical_method;  // "exact", "heuristic" or "assumed"
  bool provisional = false;
};

namespace detail {

template <typename Scalar>
void fill_per_qubit(ClassReport<Scalar>& report, Scalar tol) {
  const PureState<Scalar>& s = report.canonical.state;
  const int n = s.n;
  report.per_qubit.clear();
  for (int p = 1; p <= n; ++p) {
    QubitView<Scalar> view;
    view.signature = gpt_signature(s, p, tol);
    view.census = font_census(s, p, tol);
    view.negativity = global_negativity(s, p, tol);
    for (int k = 2; k <= n; ++k)
      view.kpt_negativity[k] = kpt_negativity(s, p, k, tol);
    if (view.negativity < tol) report.separable_qubits.push_back(p);
    report.per_qubit.push_back(std::move(view));
  }
  report.fully_separable =
      static_cast<int>(report.separable_qubits.size()) == n;
  report.headline_qubit = 1;
  for (int p = 2; p <= n; ++p)
    if (signature_less(
            report.per_qubit[static_cast<std::size_t>(
                                 report.headline_qubit - 1)].signature.ks,
            report.per_qubit[static_cast<std::size_t>(p - 1)].signature.ks))
      report.headline_qubit = p;
  for (int p = 2; p <= n && !report.signatures_disagree; ++p)
    report.signatures_disagree =
        report.per_qubit[0].signature.ks !=
        report.per_qubit[static_cast<std::size_t>(p - 1)].signature.ks;
  const auto& counts =
      report.per_qubit[static_cast<std::size_t>(report.headline_qubit - 1)]
          .census.counts;
  for (int k = 2; k <= n; ++k) report.subclass[k] = counts.at(k);
}

template <typename Scalar>
CanonicalForm<Scalar> passthrough_form(const PureState<Scalar>& state,
                                       Scalar tol) {
  CanonicalForm<Scalar> form;
  form.state = state;
  form.objective = objective_of(state, tol);
  form.lbp_count = form.objective.lbp;
  return form;
}

}  // namespace detail

// Table lookup for three qubits after the exact reduction; the tau3 relation
// at the headline qubit must agree with the label or the tolerance regime is
// broken and we refuse to guess.
template <typename Scalar>
ClassReport<Scalar> classify3(const PureState<Scalar>& state,
                              Scalar tol = Scalar(kDefaultTol),
                              bool assume_canonical = false) {
  if (state.n != 3)
    throw std::domain_error("classify3 expects a 3-qubit state");
  ClassReport<Scalar> report;
  report.n = 3;
  if (assume_canonical) {
    report.canonical = detail::passthrough_form(state, tol);
    report.canonical_method = "assumed";
  } else {
    report.canonical = canonicalize3(state, tol);
    report.canonical_method = "exact";
  }
  detail::fill_per_qubit(report, tol);
  report.tau3 = three_tangle(report.canonical.state);

  if (report.fully_separable) {
    report.class_label = "separable";
    return report;
  }
  if (!report.separable_qubits.empty()) {
    report.class_label = "biseparable";
    return report;
  }

  const auto& ks =
      report.per_qubit[static_cast<std::size_t>(report.headline_qubit - 1)]
          .signature.ks;
  if (ks == std::vector<int>{2, 3})
    report.class_label = "CI";
  else if (ks == std::vector<int>{3})
    report.class_label = "CII";
  else if (ks == std::vector<int>{2})
    report.class_label = "CIII";
  else
    throw NumericError("entangled 3-qubit state with empty signature");

  const Scalar neg =
      report.per_qubit[static_cast<std::size_t>(report.headline_qubit - 1)]
          .negativity;
  const Scalar tau = *report.tau3;
  const Scalar gap = std::abs(tau - neg * neg);
  if (report.class_label == "CI" && gap <= Scalar(1e-9))
    throw NumericError("CI signature but tau3 matches squared negativity");
  if (report.class_label == "CII" && gap > Scalar(1e-9))
    throw NumericError("CII signature but tau3 differs from squared negativity");
  if (report.class_label == "CIII" && tau >= tol)
    throw NumericError("CIII signature but tau3 is not numerically zero");
  report.genuine = true;
  return report;
}

// Four-qubit labels from the canonical-state signature at the strongest
// qubit. The label follows the signature even for partially separable
// states; separability is reported alongside and CVI is never genuine.
template <typename Scalar>
ClassReport<Scalar> classify4(const PureState<Scalar>& state,
                              Scalar tol = Scalar(kDefaultTol),
                              bool assume_canonical = false,
                              int max_restarts = 32, std::uint64_t seed = 0) {
  if (state.n != 4)
    throw std::domain_error("classify4 expects a 4-qubit state");
  ClassReport<Scalar> report;
  report.n = 4;
  if (assume_canonical) {
    report.canonical = detail::passthrough_form(state, tol);
    report.canonical_method = "assumed";
  } else {
    report.canonical = canonicalize_heuristic(state, max_restarts, tol, seed);
    report.canonical_method = "heuristic";
    report.provisional = !report.canonical.converged;
  }
  detail::fill_per_qubit(report, tol);

  const auto& ks =
      report.per_qubit[static_cast<std::size_t>(report.headline_qubit - 1)]
          .signature.ks;
  if (report.fully_separable || ks.empty()) {
    report.class_label = "separable";
    return report;
  }
  static const std::vector<std::pair<std::vector<int>, const char*>> table = {
      {{2, 3, 4}, "CI"}, {{3, 4}, "CII"}, {{2, 4}, "CIII"}, {{2, 3}, "CIV"},
      {{4}, "CV"},       {{3}, "CVI"},    {{2}, "CVII"},
  };
  for (const auto& [sig, label] : table)
    if (ks == sig) {
      report.class_label = label;
      break;
    }
  report.genuine =
      report.separable_qubits.empty() && report.class_label != "CVI";
  return report;
}

// Closed-form class counts: 2^(n-1) - 1 major classes (nonempty subsets of
// {2..n}) and 2^(n-1) - n + 2 n-partite types (excluding singleton {K} with
// 2 < K < n).
inline std::pair<long long, long long> count_classes(int n) {
  if (n < 2) throw std::domain_error("count_classes expects n >= 2");
  const long long major = (1ll << (n - 1)) - 1;
  const long long types = (1ll << (n - 1)) - n + 2;
  return {major, types};
}

// Subset enumeration behind the closed forms, for cross-checking.
inline std::pair<long long, long long> count_classes_enumerated(int n) {
  if (n < 2) throw std::domain_error("count_classes expects n >= 2");
  long long major = 0, types = 0;
  const int size = n - 1;  // orders 2..n
  for (unsigned mask = 1; mask < (1u << size); ++mask) {
    ++major;
    if (std::popcount(mask) == 1) {
      const int k = std::countr_zero(mask) + 2;
      if (k > 2 && k < n) continue;
    }
    ++types;
  }
  return {major, types};
}

}  // namespace negafont
