#pragma once

#include <cmath>

#include <Eigen/Dense>

#include "quasiherm/error.hpp"

namespace quasiherm {

/// Matrix exponential by scaling and squaring with a truncated Taylor kernel.
///
/// The input is scaled by 2^-s until its 1-norm is at most 1/2, the Taylor
/// series is summed until the next term falls below unit roundoff relative to
/// the partial sum (at most 30 terms), and the result is squared s times.
/// For ||A|| <= 1/2 the truncation remainder after m terms is bounded by
/// 0.5^(m+1)/(m+1)! * e^0.5, far below the 1e-12 backward-error target.
/// Diagonal and nilpotent inputs are reproduced to series precision.
template <typename Derived>
typename Derived::PlainObject mat_exp(const Eigen::MatrixBase<Derived>& m) {
  using Plain = typename Derived::PlainObject;
  using Real = typename Eigen::NumTraits<typename Derived::Scalar>::Real;

  if (m.rows() != m.cols()) fail(ErrorCode::invalid_parameter, "mat_exp requires a square matrix");
  if (!m.allFinite()) fail(ErrorCode::invalid_parameter, "mat_exp input has non-finite entries");

  const Eigen::Index n = m.rows();
  const Real norm1 = m.cwiseAbs().colwise().sum().maxCoeff();

  int squarings = 0;
  if (norm1 > Real(0.5)) squarings = static_cast<int>(std::ceil(std::log2(norm1 / Real(0.5))));
  const Plain scaled = m / std::ldexp(Real(1), squarings);

  Plain result = Plain::Identity(n, n);
  Plain term = Plain::Identity(n, n);
  const Real tol = Eigen::NumTraits<Real>::epsilon() / 4;
  for (int k = 1; k <= 30; ++k) {
    term = (term * scaled) / Real(k);
    result += term;
    if (term.cwiseAbs().colwise().sum().maxCoeff() <= tol * result.cwiseAbs().colwise().sum().maxCoeff()) break;
  }

  for (int i = 0; i < squarings; ++i) {
    result = (result * result).eval();
    if (!result.allFinite()) fail(ErrorCode::numeric_overflow, "matrix exponential overflowed during squaring");
  }
  if (!result.allFinite()) fail(ErrorCode::numeric_overflow, "matrix exponential is not finite");
  return result;
}

}  // namespace quasiherm
