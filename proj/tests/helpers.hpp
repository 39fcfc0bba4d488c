#pragma once

// Shared fixtures for the test suite: independently coded oracles (kept
// deliberately naive so they cannot share bugs with the library) plus frozen
// reference states.

#include <cmath>
#include <complex>
#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "negafont/ketparse.hpp"
#include "negafont/state.hpp"

namespace oracle {

using Cx = std::complex<double>;
using negafont::PureState;

// Rebuilds the 2 x 2^(n-1) amplitude matrix from scratch: row = bit of qubit
// p, column = remaining bits in qubit order with p removed. Qubit 1 is the
// most significant bit of the basis index.
inline Eigen::MatrixXcd amp_matrix(const PureState<double>& s, int p) {
  const int n = s.n;
  Eigen::MatrixXcd m(2, 1 << (n - 1));
  for (int i = 0; i < (1 << n); ++i) {
    const int row = (i >> (n - p)) & 1;
    int col = 0;
    for (int q = 1; q <= n; ++q) {
      if (q == p) continue;
      col = (col << 1) | ((i >> (n - q)) & 1);
    }
    m(row, col) = s.amps(i);
  }
  return m;
}

struct Minor {
  unsigned c1, c2;
  Cx det;
  int order;
};

// Every 2x2 minor of the amplitude matrix, by brute force.
inline std::vector<Minor> all_minors(const PureState<double>& s, int p) {
  const Eigen::MatrixXcd m = amp_matrix(s, p);
  std::vector<Minor> out;
  const unsigned cols = static_cast<unsigned>(m.cols());
  for (unsigned a = 0; a < cols; ++a) {
    for (unsigned b = a + 1; b < cols; ++b) {
      Minor mn;
      mn.c1 = a;
      mn.c2 = b;
      mn.det = m(0, a) * m(1, b) - m(1, a) * m(0, b);
      mn.order = 1;
      for (unsigned x = a ^ b; x; x >>= 1) mn.order += x & 1u;
      out.push_back(mn);
    }
  }
  return out;
}

// Cayley hyperdeterminant of the 2x2x2 array a_{ijk}, written out as the
// classical degree-4 polynomial in the eight amplitudes.
inline Cx hyperdet3(const PureState<double>& s) {
  auto a = [&](int i, int j, int k) { return s.amps((i << 2) | (j << 1) | k); };
  const Cx d1 = a(0, 0, 0) * a(1, 1, 1);
  const Cx d2 = a(0, 1, 1) * a(1, 0, 0);
  const Cx d3 = a(1, 0, 1) * a(0, 1, 0);
  const Cx d4 = a(1, 1, 0) * a(0, 0, 1);
  const Cx quads = d1 * d1 + d2 * d2 + d3 * d3 + d4 * d4;
  const Cx cross =
      d1 * d2 + d1 * d3 + d1 * d4 + d2 * d3 + d2 * d4 + d3 * d4;
  const Cx quartic = a(0, 0, 0) * a(1, 1, 0) * a(1, 0, 1) * a(0, 1, 1) +
                     a(1, 1, 1) * a(0, 0, 1) * a(0, 1, 0) * a(1, 0, 0);
  return quads - 2.0 * cross + 4.0 * quartic;
}

inline double tau3(const PureState<double>& s) {
  return 4.0 * std::abs(hyperdet3(s));
}

// Haar-ish random states via std::normal_distribution, independent of the
// library's own sampler.
inline PureState<double> random_state(int n, std::mt19937_64& gen,
                                      bool real_only = false) {
  std::normal_distribution<double> nd(0.0, 1.0);
  Eigen::VectorXcd amps(1 << n);
  for (int i = 0; i < amps.size(); ++i) {
    const double re = nd(gen);
    const double im = real_only ? 0.0 : nd(gen);
    amps(i) = Cx(re, im);
  }
  amps.normalize();
  return PureState<double>{n, amps};
}

inline Eigen::Matrix2cd random_unitary(std::mt19937_64& gen) {
  std::normal_distribution<double> nd(0.0, 1.0);
  Eigen::Vector2cd u(Cx(nd(gen), nd(gen)), Cx(nd(gen), nd(gen)));
  u.normalize();
  std::uniform_real_distribution<double> ud(-M_PI, M_PI);
  const Cx ph = std::polar(1.0, ud(gen));
  Eigen::Matrix2cd m;
  m << u(0), -std::conj(u(1)) * ph, u(1), std::conj(u(0)) * ph;
  return m;
}

// Determinant-one variant: local polynomial invariants pick up (det U)^k
// phases under general U(2), so invariance statements are tested in SU(2).
inline Eigen::Matrix2cd random_special_unitary(std::mt19937_64& gen) {
  Eigen::Matrix2cd m = random_unitary(gen);
  return m / std::sqrt(m.determinant());
}

}  // namespace oracle

namespace reps {

// Three-qubit class representatives (amplitudes normalize on parse).
inline constexpr const char* kThreeCI = "|000> + |111> + |110>";
inline constexpr const char* kThreeCII = "|000> + |111>";
inline constexpr const char* kThreeCIII = "|000> + |110> + |101>";
inline constexpr const char* kW3 = "|001> + |010> + |100>";

// Four-qubit class representatives.
inline constexpr const char* kFourCI = "|0000> + |1111> + |1110> + |1100>";
inline constexpr const char* kFourCII = "|0000> + |1111> + |1110>";
inline constexpr const char* kFourCIII = "|0000> + |1111> + |1100>";
inline constexpr const char* kFourCIV = "|0000> + |1110> + |1101>";
inline constexpr const char* kFourCV = "|0000> + |1111>";
inline constexpr const char* kFourCVI = "|0000> + |1110>";
inline constexpr const char* kFourCVII = "|0000> + |1100> + |1010> + |1001>";
inline constexpr const char* kCluster = "|0000> - |0011> + |1110> + |1101>";

// Printed with a self-cancelling pair; must still parse.
inline constexpr const char* kFourCIIIAsPrinted =
    "|0000> + |1111> + |0011> - |0011>";

inline negafont::PureState<double> state(const char* text) {
  return negafont::parse_state(text);
}

inline std::string ghz(int n) {
  std::string out = "|";
  out.append(static_cast<std::size_t>(n), '0');
  out += "> + |";
  out.append(static_cast<std::size_t>(n), '1');
  out += ">";
  return out;
}

}  // namespace reps
