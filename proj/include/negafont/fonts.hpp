// Negativity fonts: the 2x2 amplitude submatrices, one per unordered pair of
// columns of the 2 x 2^(n-1) amplitude matrix split by the transposed qubit.
#pragma once

#include <algorithm>
#include <map>
#include <tuple>
#include <vector>

#include "negafont/core.hpp"
#include "negafont/negativity.hpp"
#include "negafont/state.hpp"

namespace negafont {

namespace detail {

// Column labels run over the qubits other than p in ascending order, most
// significant first, so c1 < c2 numerically iff c1 is lexicographically
// smaller read in qubit order.
inline unsigned full_index(int n, int p, int row, unsigned column) {
  const unsigned low_mask = (1u << (n - p)) - 1u;
  const unsigned high = column >> (n - p);
  const unsigned low = column & low_mask;
  return (high << (n - p + 1)) | (static_cast<unsigned>(row) << (n - p)) | low;
}

// Qubit id carried by column bit position pos (0-based from the LSB).
inline int column_qubit(int n, int p, int pos) {
  const int k = n - 1 - pos;  // 1-based rank among the remaining qubits
  return k < p ? k : k + 1;
}

inline unsigned column_mask_of_qubit(int n, int p, int qubit) {
  const int k = qubit < p ? qubit : qubit - 1;
  return 1u << (n - 1 - k);
}

}  // namespace detail

template <typename Scalar>
struct NegativityFont {
  int p = 0;      // transposed qubit (row index)
  int order = 0;  // K: flip count including p
  std::vector<int> flips;                     // ascending, contains p
  std::vector<std::pair<int, int>> spectators;  // (qubit, bit), ascending
  unsigned base_column = 0;   // label of the left column
  unsigned other_column = 0;  // label of the right column
  Matrix2c<Scalar> entries;   // rows i_p = 0,1; columns base, complement
  Complex<Scalar> det;

  std::vector<int> base_bits() const {
    const int n = static_cast<int>(flips.size() + spectators.size());
    std::vector<int> bits;
    for (int q : flips)
      if (q != p)
        bits.push_back(
            (base_column & detail::column_mask_of_qubit(n, p, q)) ? 1 : 0);
    return bits;
  }
};

template <typename Scalar>
NegativityFont<Scalar> font_at(const PureState<Scalar>& state, int p,
                               unsigned c1, unsigned c2) {
  const int n = state.n;
  if (p < 1 || p > n) throw std::domain_error("qubit index out of range");
  const unsigned columns = 1u << (n - 1);
  if (c1 >= columns || c2 >= columns || c1 == c2)
    throw std::domain_error("font columns out of range");
  if (c1 > c2) std::swap(c1, c2);

  NegativityFont<Scalar> font;
  font.p = p;
  font.base_column = c1;
  font.other_column = c2;
  const unsigned diff = c1 ^ c2;
  font.order = std::popcount(diff) + 1;
  for (int pos = n - 2; pos >= 0; --pos) {
    const int q = detail::column_qubit(n, p, pos);
    if (diff & (1u << pos))
      font.flips.push_back(q);
    else
      font.spectators.emplace_back(q, (c1 & (1u << pos)) ? 1 : 0);
  }
  font.flips.push_back(p);
  std::sort(font.flips.begin(), font.flips.end());
  std::sort(font.spectators.begin(), font.spectators.end());

  font.entries(0, 0) = state.amp(detail::full_index(n, p, 0, c1));
  font.entries(0, 1) = state.amp(detail::full_index(n, p, 0, c2));
  font.entries(1, 0) = state.amp(detail::full_index(n, p, 1, c1));
  font.entries(1, 1) = state.amp(detail::full_index(n, p, 1, c2));
  font.det = font.entries(0, 0) * font.entries(1, 1) -
             font.entries(1, 0) * font.entries(0, 1);
  return font;
}

// Shorthand used by the named invariant combinations.
template <typename Scalar>
Complex<Scalar> font_det(const PureState<Scalar>& state, int p, unsigned c1,
                         unsigned c2) {
  return font_at(state, p, c1, c2).det;
}

// All fonts for transposed qubit p, optionally restricted to one order,
// sorted by flips, then spectator values, then base.
template <typename Scalar>
std::vector<NegativityFont<Scalar>> enumerate_fonts(
    const PureState<Scalar>& state, int p, int order = 0) {
  const int n = state.n;
  if (p < 1 || p > n) throw std::domain_error("qubit index out of range");
  if (order != 0 && (order < 2 || order > n))
    throw std::domain_error("font order out of range");
  const unsigned columns = 1u << (n - 1);
  std::vector<NegativityFont<Scalar>> fonts;
  for (unsigned c1 = 0; c1 + 1 < columns; ++c1)
    for (unsigned c2 = c1 + 1; c2 < columns; ++c2) {
      if (order != 0 && std::popcount(c1 ^ c2) + 1 != order) continue;
      fonts.push_back(font_at(state, p, c1, c2));
    }
  auto key = [](const NegativityFont<Scalar>& f) {
    std::vector<int> spect_bits;
    for (const auto& [q, b] : f.spectators) spect_bits.push_back(b);
    return std::make_tuple(f.flips, spect_bits, f.base_bits());
  };
  std::sort(fonts.begin(), fonts.end(),
            [&](const auto& a, const auto& b) { return key(a) < key(b); });
  return fonts;
}

template <typename Scalar>
struct FontCensus {
  int p = 0;
  std::map<int, int> counts;  // order K -> fonts with |det| above threshold
  Scalar total_sq = Scalar(0);

  int max_order() const {
    int best = 0;
    for (const auto& [k, c] : counts)
      if (c > 0) best = std::max(best, k);
    return best;
  }

  int total_count() const {
    int total = 0;
    for (const auto& [k, c] : counts) total += c;
    return total;
  }
};

template <typename Scalar>
FontCensus<Scalar> font_census(const PureState<Scalar>& state, int p,
                               Scalar tol = Scalar(kDefaultTol)) {
  FontCensus<Scalar> census;
  census.p = p;
  for (int k = 2; k <= state.n; ++k) census.counts[k] = 0;
  const Scalar scale = state.max_abs_amp();
  const Scalar cut = tol * scale * scale;
  const unsigned columns = 1u << (state.n - 1);
  for (unsigned c1 = 0; c1 + 1 < columns; ++c1)
    for (unsigned c2 = c1 + 1; c2 < columns; ++c2) {
      const int k = std::popcount(c1 ^ c2) + 1;
      const Complex<Scalar> d = font_det(state, p, c1, c2);
      census.total_sq += std::norm(d);
      if (std::abs(d) > cut) ++census.counts[k];
    }
  return census;
}

// Left: squared global negativity for qubit p. Right: four times the summed
// squared font determinants. Equal for every pure state.
template <typename Scalar>
std::pair<Scalar, Scalar> font_total_identity(const PureState<Scalar>& state,
                                              int p) {
  const Scalar ng = global_negativity(state, p);
  const FontCensus<Scalar> census = font_census(state, p);
  return {ng * ng, Scalar(4) * census.total_sq};
}

}  // namespace negafont
