// Hermitian spectra and negativity measures of (partially transposed) density
// operators.
#pragma once

#include <Eigen/Eigenvalues>

#include <algorithm>

#include "negafont/core.hpp"
#include "negafont/state.hpp"
#include "negafont/transpose.hpp"

namespace negafont {

// Eigenvalues of a Hermitian matrix, sorted descending. The result is checked
// against the trace and the Frobenius norm; a violation indicates solver
// breakdown rather than bad input.
template <typename Scalar>
Eigen::Vector<Scalar, Eigen::Dynamic> eigvals_hermitian(
    const OperatorMatrix<Scalar>& mat, Scalar tol = Scalar(kDefaultTol)) {
  if (mat.rows() != mat.cols())
    throw std::domain_error("eigvals_hermitian: matrix is not square");
  const Scalar scale = std::max(Scalar(1), mat.cwiseAbs().maxCoeff());
  if ((mat - mat.adjoint()).cwiseAbs().maxCoeff() > tol * scale)
    throw std::domain_error("eigvals_hermitian: matrix is not Hermitian");

  Eigen::SelfAdjointEigenSolver<OperatorMatrix<Scalar>> solver(
      mat, Eigen::EigenvaluesOnly);
  if (solver.info() != Eigen::Success)
    throw NumericError("eigvals_hermitian: eigensolver did not converge");
  Eigen::Vector<Scalar, Eigen::Dynamic> vals = solver.eigenvalues().reverse();

  const Scalar tr = mat.trace().real();
  const Scalar frob2 = mat.squaredNorm();
  const Scalar check_scale = std::max(Scalar(1), frob2);
  if (std::abs(vals.sum() - tr) > tol * check_scale ||
      std::abs(vals.squaredNorm() - frob2) > tol * check_scale)
    throw NumericError("eigvals_hermitian: spectrum failed consistency checks");
  return vals;
}

// ||op||_1 - 1, i.e. twice the total weight of negative eigenvalues for a
// trace-one operator.
template <typename Scalar>
Scalar negativity_of(const DensityOperator<Scalar>& op,
                     Scalar tol = Scalar(kDefaultTol)) {
  if (std::abs(op.mat.trace().real() - Scalar(1)) > Scalar(1e-8))
    throw std::domain_error("negativity_of: operator trace is not 1");
  const auto vals = eigvals_hermitian(op.mat, tol);
  const Scalar sum_abs = vals.cwiseAbs().sum();
  return std::max(Scalar(0), sum_abs - Scalar(1));
}

template <typename Scalar>
Scalar global_negativity(const PureState<Scalar>& state, int p,
                         Scalar tol = Scalar(kDefaultTol)) {
  return negativity_of(global_pt(density(state), p), tol);
}

template <typename Scalar>
Scalar kpt_negativity(const PureState<Scalar>& state, int p, int k,
                      Scalar tol = Scalar(kDefaultTol)) {
  return negativity_of(kway_pt(density(state), p, k), tol);
}

}  // namespace negafont
