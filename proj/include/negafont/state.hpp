// Pure states, single-qubit operators and density operators.
#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>
#include <random>
#include <utility>
#include <vector>

#include "negafont/core.hpp"

namespace negafont {

enum class OpKind { Unitary, Invertible };
enum class DensityKind { State, GlobalPT, KwayPT };

template <typename Scalar>
struct PureState {
  int n = 0;
  StateVector<Scalar> amps;  // size 2^n, unit norm

  int dim() const { return dim_of(n); }

  Complex<Scalar> amp(unsigned index) const {
    return amps(static_cast<Eigen::Index>(index));
  }

  Scalar max_abs_amp() const { return amps.cwiseAbs().maxCoeff(); }

  // Number of basis kets carrying weight above tol * max|a|.
  int lbp_count(Scalar tol = Scalar(kDefaultTol)) const {
    const Scalar cut = tol * max_abs_amp();
    int count = 0;
    for (Eigen::Index i = 0; i < amps.size(); ++i)
      if (std::abs(amps(i)) > cut) ++count;
    return count;
  }
};

template <typename Scalar>
struct LocalOperator {
  int qubit = 0;
  Matrix2c<Scalar> matrix = Matrix2c<Scalar>::Identity();
  OpKind kind = OpKind::Unitary;
};

template <typename Scalar>
LocalOperator<Scalar> unitary_op(int qubit, const Matrix2c<Scalar>& u) {
  const Scalar err =
      (u.adjoint() * u - Matrix2c<Scalar>::Identity()).cwiseAbs().maxCoeff();
  if (err > Scalar(1e-12))
    throw std::domain_error("local operator: matrix is not unitary");
  return LocalOperator<Scalar>{qubit, u, OpKind::Unitary};
}

template <typename Scalar>
LocalOperator<Scalar> invertible_op(int qubit, const Matrix2c<Scalar>& m) {
  if (std::abs(m.determinant()) <= Scalar(1e-12))
    throw std::domain_error("local operator: matrix is singular");
  return LocalOperator<Scalar>{qubit, m, OpKind::Invertible};
}

template <typename Scalar>
LocalOperator<Scalar> identity_op(int qubit) {
  return LocalOperator<Scalar>{qubit, Matrix2c<Scalar>::Identity(),
                               OpKind::Unitary};
}

namespace detail {

template <typename Scalar>
PureState<Scalar> normalized_state(int n, StateVector<Scalar> amps) {
  const Scalar norm = amps.norm();
  const Scalar scale = amps.cwiseAbs().maxCoeff();
  if (norm <= Scalar(1e-12) * std::max(scale, Scalar(1)))
    throw InvalidStateError("state has zero total norm");
  amps /= norm;
  return PureState<Scalar>{n, std::move(amps)};
}

// Applies op.matrix to the amplitude pairs split by op.qubit, without
// renormalizing. Exposed so the norm-preservation contract is testable.
template <typename Scalar>
StateVector<Scalar> transformed_amplitudes(const PureState<Scalar>& state,
                                           const LocalOperator<Scalar>& op) {
  const unsigned mask = 1u << (state.n - op.qubit);
  const auto& u = op.matrix;
  StateVector<Scalar> out(state.amps.size());
  for (unsigned i = 0; i < static_cast<unsigned>(state.amps.size()); ++i) {
    if (i & mask) continue;
    const unsigned j = i | mask;
    const Complex<Scalar> a0 = state.amps(i);
    const Complex<Scalar> a1 = state.amps(j);
    out(i) = u(0, 0) * a0 + u(0, 1) * a1;
    out(j) = u(1, 0) * a0 + u(1, 1) * a1;
  }
  return out;
}

}  // namespace detail

template <typename Scalar>
PureState<Scalar> make_state(
    int n, const std::vector<std::pair<BasisIndex, Complex<Scalar>>>& terms,
    int max_qubits = kDefaultMaxQubits) {
  if (n < 2 || n > max_qubits)
    throw InvalidStateError("qubit count " + std::to_string(n) +
                            " outside supported range [2, " +
                            std::to_string(max_qubits) + "]");
  StateVector<Scalar> amps = StateVector<Scalar>::Zero(dim_of(n));
  for (const auto& [index, coeff] : terms) {
    if (index.n != n)
      throw std::domain_error("basis index width does not match state");
    amps(static_cast<Eigen::Index>(index.value)) += coeff;
  }
  return detail::normalized_state(n, std::move(amps));
}

template <typename Scalar>
PureState<Scalar> state_from_vector(int n, StateVector<Scalar> amps,
                                    int max_qubits = kDefaultMaxQubits) {
  if (n < 2 || n > max_qubits)
    throw InvalidStateError("qubit count outside supported range");
  if (amps.size() != dim_of(n))
    throw std::domain_error("amplitude vector has wrong dimension");
  return detail::normalized_state(n, std::move(amps));
}

template <typename Scalar>
PureState<Scalar> apply_local(const PureState<Scalar>& state,
                              const LocalOperator<Scalar>& op) {
  if (op.qubit < 1 || op.qubit > state.n)
    throw std::domain_error("qubit index out of range");
  if (op.kind == OpKind::Invertible &&
      std::abs(op.matrix.determinant()) <= Scalar(1e-12))
    throw std::domain_error("local operator: matrix is singular");
  return detail::normalized_state(state.n,
                                  detail::transformed_amplitudes(state, op));
}

template <typename Scalar>
PureState<Scalar> apply_local(const PureState<Scalar>& state,
                              const std::vector<LocalOperator<Scalar>>& ops) {
  PureState<Scalar> out = state;
  for (const auto& op : ops) out = apply_local(out, op);
  return out;
}

// perm maps old qubit positions to new ones: bit m of the input lands on
// qubit perm[m-1] of the output.
template <typename Scalar>
PureState<Scalar> permute_qubits(const PureState<Scalar>& state,
                                 const std::vector<int>& perm) {
  const int n = state.n;
  if (static_cast<int>(perm.size()) != n)
    throw std::domain_error("permutation length does not match qubit count");
  std::vector<bool> seen(static_cast<std::size_t>(n), false);
  for (int image : perm) {
    if (image < 1 || image > n || seen[static_cast<std::size_t>(image - 1)])
      throw std::domain_error("permutation is not a bijection on 1..n");
    seen[static_cast<std::size_t>(image - 1)] = true;
  }
  StateVector<Scalar> out = StateVector<Scalar>::Zero(state.dim());
  for (unsigned i = 0; i < static_cast<unsigned>(state.dim()); ++i) {
    unsigned j = 0;
    for (int m = 1; m <= n; ++m)
      j = with_bit(j, n, perm[static_cast<std::size_t>(m - 1)],
                   bit_of(i, n, m));
    out(j) = state.amps(i);
  }
  return PureState<Scalar>{n, std::move(out)};
}

namespace detail {

// Uniform in (0, 1]; keeps log() finite below.
inline double uniform_unit(std::mt19937_64& rng) {
  return static_cast<double>((rng() >> 11) + 1) * 0x1.0p-53;
}

// Box-Muller pair. std::normal_distribution is implementation-defined, so the
// bit-identical-given-seed contract is pinned to mt19937_64 plus this map.
inline std::pair<double, double> gaussian_pair(std::mt19937_64& rng) {
  const double u1 = uniform_unit(rng);
  const double u2 = uniform_unit(rng);
  const double r = std::sqrt(-2.0 * std::log(u1));
  const double a = 2.0 * std::numbers::pi * u2;
  return {r * std::cos(a), r * std::sin(a)};
}

}  // namespace detail

template <typename Scalar = double>
PureState<Scalar> random_state(int n, std::uint64_t seed,
                               int max_qubits = kDefaultMaxQubits) {
  if (n < 2 || n > max_qubits)
    throw InvalidStateError("qubit count outside supported range");
  std::mt19937_64 rng(seed);
  StateVector<Scalar> amps(dim_of(n));
  for (Eigen::Index i = 0; i < amps.size(); ++i) {
    const auto [re, im] = detail::gaussian_pair(rng);
    amps(i) = Complex<Scalar>(static_cast<Scalar>(re), static_cast<Scalar>(im));
  }
  return detail::normalized_state(n, std::move(amps));
}

// Haar-ish single-qubit unitary from a seeded generator; used by the
// canonicalization search and by disguise-style tests.
template <typename Scalar = double>
LocalOperator<Scalar> random_local_unitary(int qubit, std::mt19937_64& rng) {
  Matrix2c<Scalar> g;
  for (int r = 0; r < 2; ++r)
    for (int c = 0; c < 2; ++c) {
      const auto [re, im] = detail::gaussian_pair(rng);
      g(r, c) = Complex<Scalar>(static_cast<Scalar>(re),
                                static_cast<Scalar>(im));
    }
  Eigen::HouseholderQR<Matrix2c<Scalar>> qr(g);
  Matrix2c<Scalar> q = qr.householderQ();
  Matrix2c<Scalar> r = qr.matrixQR().template triangularView<Eigen::Upper>();
  for (int c = 0; c < 2; ++c) {
    const Complex<Scalar> d = r(c, c);
    if (std::abs(d) > Scalar(0)) q.col(c) *= d / std::abs(d);
  }
  return unitary_op(qubit, q);
}

template <typename Scalar>
struct DensityOperator {
  int n = 0;
  OperatorMatrix<Scalar> mat;
  DensityKind kind = DensityKind::State;
  int transposed_qubit = 0;  // 0 when kind == State
  int kway = 0;              // 0 unless kind == KwayPT

  int dim() const { return dim_of(n); }
};

template <typename Scalar>
DensityOperator<Scalar> density(const PureState<Scalar>& state) {
  DensityOperator<Scalar> rho;
  rho.n = state.n;
  rho.mat = state.amps * state.amps.adjoint();
  rho.kind = DensityKind::State;
  return rho;
}

}  // namespace negafont
