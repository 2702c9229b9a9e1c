#pragma once

#include <array>
#include <complex>

#include <Eigen/Dense>

#include "quasiherm/expm.hpp"
#include "quasiherm/fock.hpp"

namespace quasiherm {

/// Basis of the operator space closed under commutators with quadratic
/// generators: {1, a, a+, a+a, a^2, a+^2}.
enum class QBasis : int { identity = 0, a = 1, adag = 2, number = 3, a2 = 4, adag2 = 5 };

inline constexpr int quad_size = 6;
using QVector = Eigen::Matrix<cplx, quad_size, 1>;
using QMatrix = Eigen::Matrix<cplx, quad_size, quad_size>;

inline FockOperator basis_matrix(QBasis b, FockDim dim) {
  const int n = dim.n_levels();
  CMatrix m = CMatrix::Zero(n, n);
  switch (b) {
    case QBasis::identity: m.setIdentity(); break;
    case QBasis::number:
      for (int k = 0; k < n; ++k) m(k, k) = static_cast<double>(k);
      break;
    case QBasis::a:
      for (int k = 0; k + 1 < n; ++k) m(k, k + 1) = std::sqrt(static_cast<double>(k + 1));
      break;
    case QBasis::adag:
      for (int k = 0; k + 1 < n; ++k) m(k + 1, k) = std::sqrt(static_cast<double>(k + 1));
      break;
    case QBasis::a2:
      for (int k = 0; k + 2 < n; ++k) m(k, k + 2) = std::sqrt(static_cast<double>((k + 1) * (k + 2)));
      break;
    case QBasis::adag2:
      for (int k = 0; k + 2 < n; ++k) m(k + 2, k) = std::sqrt(static_cast<double>((k + 1) * (k + 2)));
      break;
  }
  return {dim, std::move(m)};
}

/// Element c0 + c1 a + c2 a+ + c3 a+a + c4 a^2 + c5 a+^2 of the quadratic algebra.
struct QuadraticOperator {
  QVector c = QVector::Zero();

  cplx& operator[](QBasis b) { return c(static_cast<int>(b)); }
  cplx operator[](QBasis b) const { return c(static_cast<int>(b)); }

  /// Formal adjoint: conjugate coefficients and swap a <-> a+, a^2 <-> a+^2.
  QuadraticOperator adjoint() const {
    QuadraticOperator out;
    out[QBasis::identity] = std::conj((*this)[QBasis::identity]);
    out[QBasis::number] = std::conj((*this)[QBasis::number]);
    out[QBasis::a] = std::conj((*this)[QBasis::adag]);
    out[QBasis::adag] = std::conj((*this)[QBasis::a]);
    out[QBasis::a2] = std::conj((*this)[QBasis::adag2]);
    out[QBasis::adag2] = std::conj((*this)[QBasis::a2]);
    return out;
  }

  FockOperator materialize(FockDim dim) const {
    CMatrix m = CMatrix::Zero(dim.n_levels(), dim.n_levels());
    for (int k = 0; k < quad_size; ++k)
      if (c(k) != cplx{}) m += c(k) * basis_matrix(static_cast<QBasis>(k), dim).matrix();
    return {dim, std::move(m)};
  }

  friend QuadraticOperator operator+(QuadraticOperator x, const QuadraticOperator& y) {
    x.c += y.c;
    return x;
  }
  friend QuadraticOperator operator-(QuadraticOperator x, const QuadraticOperator& y) {
    x.c -= y.c;
    return x;
  }
  friend QuadraticOperator operator*(cplx s, QuadraticOperator x) {
    x.c *= s;
    return x;
  }
};

inline QuadraticOperator quadratic_basis(QBasis b) {
  QuadraticOperator q;
  q[b] = 1.0;
  return q;
}

/// H = omega (a+a + 1/2) + alpha (a^2 - a+^2).
inline QuadraticOperator model_quadratic(const ModelParams& params) {
  params.validate();
  QuadraticOperator q;
  q[QBasis::identity] = params.omega / 2.0;
  q[QBasis::number] = params.omega;
  q[QBasis::a2] = params.alpha;
  q[QBasis::adag2] = -params.alpha;
  return q;
}

/// x = (a + a+)/sqrt(2 omega).
inline QuadraticOperator position_quadratic(double omega) {
  QuadraticOperator q;
  q[QBasis::a] = q[QBasis::adag] = 1.0 / std::sqrt(2.0 * omega);
  return q;
}

/// p = i sqrt(omega/2)(a+ - a).
inline QuadraticOperator momentum_quadratic(double omega) {
  QuadraticOperator q;
  q[QBasis::adag] = I_unit * std::sqrt(omega / 2.0);
  q[QBasis::a] = -I_unit * std::sqrt(omega / 2.0);
  return q;
}

struct Extraction {
  QuadraticOperator op;
  double residual = 0.0;  // relative Frobenius misfit on the interior block
};

/// Least-squares projection of the interior block of `m` onto the basis.
inline Extraction extract_quadratic(const FockOperator& m) {
  const FockDim dim = m.dim();
  const int k = dim.interior();
  std::array<CMatrix, quad_size> basis;
  for (int j = 0; j < quad_size; ++j) basis[j] = basis_matrix(static_cast<QBasis>(j), dim).interior();

  QMatrix gram;
  QVector rhs;
  const CMatrix target = m.interior();
  for (int i = 0; i < quad_size; ++i) {
    for (int j = 0; j < quad_size; ++j) gram(i, j) = basis[i].cwiseProduct(basis[j].conjugate()).sum();
    rhs(i) = target.cwiseProduct(basis[i].conjugate()).sum();
  }
  Extraction out;
  out.op.c = gram.transpose().ldlt().solve(rhs);
  CMatrix fit = CMatrix::Zero(k, k);
  for (int j = 0; j < quad_size; ++j) fit += out.op.c(j) * basis[j];
  const double norm = target.norm();
  out.residual = norm == 0.0 ? (fit.norm() == 0.0 ? 0.0 : 1.0) : (target - fit).norm() / norm;
  return out;
}

/// Matrix of B -> [G, B] on the quadratic basis; column j holds the
/// coefficients of [G, basis_j].
struct AdjointMatrix {
  QMatrix ad = QMatrix::Zero();
  double residual = 0.0;
};

inline constexpr double algebra_residual_limit = 1e-12;

/// Structure constants from truncated commutators, extracted on the buffered
/// interior where the truncation cannot reach.
inline AdjointMatrix adjoint_matrix(const QuadraticOperator& g, FockDim dim = FockDim(32, 8)) {
  if (dim.buffer() < 4) fail(ErrorCode::invalid_parameter, "structure constants need a buffer of at least 4");
  const CMatrix gm = g.materialize(dim).matrix();
  AdjointMatrix out;
  for (int j = 0; j < quad_size; ++j) {
    const CMatrix b = basis_matrix(static_cast<QBasis>(j), dim).matrix();
    const Extraction e = extract_quadratic(FockOperator(dim, gm * b - b * gm));
    out.ad.col(j) = e.op.c;
    out.residual = std::max(out.residual, e.residual);
  }
  if (!(out.residual < algebra_residual_limit))
    fail(ErrorCode::outside_algebra, "commutator left the quadratic algebra (residual " + std::to_string(out.residual) + ")");
  return out;
}

/// e^G B e^-G = e^{ad_G} B, evaluated on the 6-dimensional coefficient space.
inline QuadraticOperator conjugate_by_exp(const QMatrix& ad_g, const QuadraticOperator& b) {
  QuadraticOperator out;
  out.c = mat_exp(ad_g) * b.c;
  return out;
}

}  // namespace quasiherm
