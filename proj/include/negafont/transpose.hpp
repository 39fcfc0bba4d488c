// Global and K-way partial transposes of a density operator, plus the
// decomposition residual linking them.
#pragma once

#include "negafont/core.hpp"
#include "negafont/state.hpp"

namespace negafont {

namespace detail {

template <typename Scalar>
void check_pt_args(const DensityOperator<Scalar>& rho, int p) {
  if (rho.kind != DensityKind::State)
    throw std::domain_error("partial transpose expects a density operator");
  if (p < 1 || p > rho.n) throw std::domain_error("qubit index out of range");
}

}  // namespace detail

// Element (I, J) becomes rho(I with j_p, J with i_p) whenever the pair
// differs at qubit p; all other elements are copied.
template <typename Scalar>
DensityOperator<Scalar> global_pt(const DensityOperator<Scalar>& rho, int p) {
  detail::check_pt_args(rho, p);
  const int n = rho.n;
  DensityOperator<Scalar> out;
  out.n = n;
  out.kind = DensityKind::GlobalPT;
  out.transposed_qubit = p;
  out.mat.resize(rho.dim(), rho.dim());
  for (unsigned i = 0; i < static_cast<unsigned>(rho.dim()); ++i)
    for (unsigned j = 0; j < static_cast<unsigned>(rho.dim()); ++j) {
      if (bit_of(i, n, p) != bit_of(j, n, p))
        out.mat(i, j) = rho.mat(flip_qubit(i, n, p), flip_qubit(j, n, p));
      else
        out.mat(i, j) = rho.mat(i, j);
    }
  return out;
}

// Transposes exactly the elements whose index pair has Hamming distance k and
// differs at qubit p; everything else is copied from rho.
template <typename Scalar>
DensityOperator<Scalar> kway_pt(const DensityOperator<Scalar>& rho, int p,
                                int k) {
  detail::check_pt_args(rho, p);
  if (k < 2 || k > rho.n) throw std::domain_error("order k out of range");
  const int n = rho.n;
  DensityOperator<Scalar> out;
  out.n = n;
  out.kind = DensityKind::KwayPT;
  out.transposed_qubit = p;
  out.kway = k;
  out.mat = rho.mat;
  for (unsigned i = 0; i < static_cast<unsigned>(rho.dim()); ++i)
    for (unsigned j = 0; j < static_cast<unsigned>(rho.dim()); ++j)
      if (bit_of(i, n, p) != bit_of(j, n, p) && hamming(i, j) == k)
        out.mat(i, j) = rho.mat(flip_qubit(i, n, p), flip_qubit(j, n, p));
  return out;
}

template <typename Scalar>
struct ResidualReport {
  OperatorMatrix<Scalar> residual;
  Scalar max_abs = Scalar(0);
};

// Residual of the expansion of the global transpose into K-way transposes:
//   R = GPT - sum_{K=2..n} KPT_K + (n-2) rho.
// R vanishes except on index pairs at Hamming distance 1 differing at qubit p,
// where R(I,J) = rho(J,I) - rho(I,J); in particular R = 0 whenever rho is
// real.
template <typename Scalar>
ResidualReport<Scalar> decomposition_residual(const DensityOperator<Scalar>& rho,
                                              int p) {
  detail::check_pt_args(rho, p);
  OperatorMatrix<Scalar> r = global_pt(rho, p).mat;
  for (int k = 2; k <= rho.n; ++k) r -= kway_pt(rho, p, k).mat;
  r += Scalar(rho.n - 2) * rho.mat;
  ResidualReport<Scalar> report;
  report.max_abs = r.cwiseAbs().maxCoeff();
  report.residual = std::move(r);
  return report;
}

}  // namespace negafont
