#pragma once

#include <algorithm>
#include <complex>
#include <numeric>
#include <vector>

#include <Eigen/Eigenvalues>

#include "quasiherm/fock.hpp"

namespace quasiherm {

struct SpectrumResult {
  std::vector<cplx> eigenvalues;  // sorted by real part, then imaginary part
  double max_residual = 0.0;      // max ||Mv - lv|| / ||v|| over returned pairs
};

inline constexpr double eigen_residual_limit = 1e-9;

/// Full dense spectrum with a residual certificate. The Hermitian path uses the
/// self-adjoint solver on the Hermitian part; the general path uses complex Schur.
template <typename Derived>
SpectrumResult eigenvalues(const Eigen::MatrixBase<Derived>& m, bool hermitian_hint) {
  if (m.rows() != m.cols()) fail(ErrorCode::invalid_parameter, "eigenvalues requires a square matrix");
  if (!m.allFinite()) fail(ErrorCode::invalid_parameter, "eigenvalues input has non-finite entries");
  const CMatrix a = m.template cast<cplx>();
  const Eigen::Index n = a.rows();

  std::vector<cplx> values(static_cast<std::size_t>(n));
  CMatrix vectors;
  if (hermitian_hint) {
    const Eigen::SelfAdjointEigenSolver<CMatrix> es(a);
    if (es.info() != Eigen::Success) fail(ErrorCode::eigensolver_failure, "self-adjoint solver did not converge");
    for (Eigen::Index k = 0; k < n; ++k) values[static_cast<std::size_t>(k)] = es.eigenvalues()(k);
    vectors = es.eigenvectors();
  } else {
    const Eigen::ComplexEigenSolver<CMatrix> es(a, true);
    if (es.info() != Eigen::Success) fail(ErrorCode::eigensolver_failure, "complex Schur solver did not converge");
    for (Eigen::Index k = 0; k < n; ++k) values[static_cast<std::size_t>(k)] = es.eigenvalues()(k);
    vectors = es.eigenvectors();
  }

  SpectrumResult out;
  for (Eigen::Index k = 0; k < n; ++k) {
    const auto v = vectors.col(k);
    const double r = (a * v - values[static_cast<std::size_t>(k)] * v).norm() / v.norm();
    out.max_residual = std::max(out.max_residual, r);
  }
  if (!(out.max_residual < eigen_residual_limit))
    fail(ErrorCode::eigensolver_failure, "residual certificate " + std::to_string(out.max_residual) + " exceeds 1e-9");

  std::sort(values.begin(), values.end(), [](cplx x, cplx y) {
    return x.real() != y.real() ? x.real() < y.real() : x.imag() < y.imag();
  });
  out.eigenvalues = std::move(values);
  return out;
}

inline SpectrumResult eigenvalues(const FockOperator& m, bool hermitian_hint) {
  return eigenvalues(m.matrix(), hermitian_hint);
}

/// E_n = (n + 1/2) sqrt(omega^2 + 4 alpha^2).
inline double exact_level(const ModelParams& params, int n) {
  return (n + 0.5) * std::sqrt(params.spacing_squared());
}

}  // namespace quasiherm
