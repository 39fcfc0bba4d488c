// Scalar aliases, tolerances, bit/index conventions and error types shared by
// every other header.
#pragma once

#include <Eigen/Dense>

#include <bit>
#include <complex>
#include <cstddef>
#include <cstdint>
#include <stdexcept>
#include <string>

namespace negafont {

template <typename Scalar>
using Complex = std::complex<Scalar>;

template <typename Scalar>
using StateVector = Eigen::Vector<Complex<Scalar>, Eigen::Dynamic>;

template <typename Scalar>
using OperatorMatrix = Eigen::Matrix<Complex<Scalar>, Eigen::Dynamic, Eigen::Dynamic>;

template <typename Scalar>
using Matrix2c = Eigen::Matrix<Complex<Scalar>, 2, 2>;

// Relative zero tolerance. Amplitudes are compared against tol * max|a|,
// determinant-scale quantities against tol * max|a|^2.
inline constexpr double kDefaultTol = 1e-10;

// Dense matrices grow as 4^n; the cap keeps a single operator under ~1 MB.
inline constexpr int kDefaultMaxQubits = 8;

class ParseError : public std::runtime_error {
 public:
  ParseError(std::size_t offset, const std::string& what)
      : std::runtime_error("parse error at offset " + std::to_string(offset) +
                           ": " + what),
        offset_(offset) {}

  std::size_t offset() const { return offset_; }

 private:
  std::size_t offset_;
};

class InvalidStateError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class NumericError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class DegenerateSlotError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

// Qubit 1 is the most significant bit: |i1 i2 ... in> has integer value
// sum_m i_m * 2^(n-m). Qubit indices are 1-based throughout.

inline int dim_of(int n) { return 1 << n; }

inline int bit_of(unsigned value, int n, int qubit) {
  return static_cast<int>((value >> (n - qubit)) & 1u);
}

inline unsigned with_bit(unsigned value, int n, int qubit, int bit) {
  const unsigned mask = 1u << (n - qubit);
  return bit ? (value | mask) : (value & ~mask);
}

inline unsigned flip_qubit(unsigned value, int n, int qubit) {
  return value ^ (1u << (n - qubit));
}

inline int hamming(unsigned a, unsigned b) {
  return std::popcount(a ^ b);
}

// A basis ket of an n-qubit register.
struct BasisIndex {
  int n = 0;
  unsigned value = 0;

  BasisIndex() = default;
  BasisIndex(int n_, unsigned value_) : n(n_), value(value_) {
    if (n < 1 || n > 31)
      throw std::domain_error("basis index: qubit count out of range");
    if (value >= (1u << n))
      throw std::domain_error("basis index: value out of range for " +
                              std::to_string(n) + " qubits");
  }

  static BasisIndex from_bits(const std::string& bits) {
    if (bits.empty()) throw std::domain_error("basis index: empty bit string");
    unsigned v = 0;
    for (char c : bits) {
      if (c != '0' && c != '1')
        throw std::domain_error("basis index: bit string must be 0/1");
      v = (v << 1) | static_cast<unsigned>(c - '0');
    }
    return BasisIndex(static_cast<int>(bits.size()), v);
  }

  std::string bits() const {
    std::string s(static_cast<std::size_t>(n), '0');
    for (int q = 1; q <= n; ++q)
      s[static_cast<std::size_t>(q - 1)] = bit_of(value, n, q) ? '1' : '0';
    return s;
  }

  friend bool operator==(const BasisIndex& a, const BasisIndex& b) {
    return a.n == b.n && a.value == b.value;
  }
};

}  // namespace negafont
