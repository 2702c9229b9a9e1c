#pragma once

#include <cmath>
#include <complex>
#include <string>
#include <utility>

#include <Eigen/Dense>

#include "quasiherm/error.hpp"

namespace quasiherm {

using cplx = std::complex<double>;
using CMatrix = Eigen::MatrixXcd;
using CVector = Eigen::VectorXcd;

inline constexpr cplx I_unit{0.0, 1.0};

/// Truncation of the number basis. The trailing `buffer` rows and columns are
/// excluded from every defect norm because products of ladder operators are
/// wrong next to the truncation edge.
class FockDim {
 public:
  static constexpr int default_levels = 128;
  static constexpr int default_buffer = 8;

  explicit FockDim(int n_levels = default_levels, int buffer = default_buffer)
      : n_levels_(n_levels), buffer_(buffer) {
    if (n_levels < 2) fail(ErrorCode::invalid_parameter, "n_levels must be >= 2");
    if (buffer < 0 || (buffer > 0 && 2 * buffer >= n_levels))
      fail(ErrorCode::invalid_parameter, "buffer must satisfy 0 <= buffer < n_levels/2");
  }

  int n_levels() const noexcept { return n_levels_; }
  int buffer() const noexcept { return buffer_; }
  int interior() const noexcept { return n_levels_ - buffer_; }

  friend bool operator==(const FockDim&, const FockDim&) = default;

 private:
  int n_levels_;
  int buffer_;
};

/// Dense operator in the number basis, oscillator units (hbar = m = 1).
class FockOperator {
 public:
  FockOperator(FockDim dim, CMatrix entries) : dim_(dim), m_(std::move(entries)) {
    if (m_.rows() != dim_.n_levels() || m_.cols() != dim_.n_levels())
      fail(ErrorCode::invalid_parameter, "operator shape does not match its FockDim");
    if (!m_.allFinite()) fail(ErrorCode::invalid_parameter, "operator has non-finite entries");
  }

  static FockOperator zero(FockDim dim) { return {dim, CMatrix::Zero(dim.n_levels(), dim.n_levels())}; }
  static FockOperator identity(FockDim dim) { return {dim, CMatrix::Identity(dim.n_levels(), dim.n_levels())}; }

  const FockDim& dim() const noexcept { return dim_; }
  const CMatrix& matrix() const noexcept { return m_; }
  int size() const noexcept { return dim_.n_levels(); }
  cplx operator()(int row, int col) const { return m_(row, col); }

  /// Top-left (N - buffer) block.
  auto interior() const { return m_.topLeftCorner(dim_.interior(), dim_.interior()); }

  FockOperator adjoint() const { return {dim_, m_.adjoint()}; }

  friend FockOperator operator+(const FockOperator& x, const FockOperator& y) {
    check_same(x, y);
    return {x.dim_, x.m_ + y.m_};
  }
  friend FockOperator operator-(const FockOperator& x, const FockOperator& y) {
    check_same(x, y);
    return {x.dim_, x.m_ - y.m_};
  }
  friend FockOperator operator*(const FockOperator& x, const FockOperator& y) {
    check_same(x, y);
    return {x.dim_, x.m_ * y.m_};
  }
  friend FockOperator operator*(cplx s, const FockOperator& x) { return {x.dim_, s * x.m_}; }
  friend FockOperator operator*(double s, const FockOperator& x) { return {x.dim_, s * x.m_}; }

 private:
  static void check_same(const FockOperator& x, const FockOperator& y) {
    if (!(x.dim_ == y.dim_)) fail(ErrorCode::invalid_parameter, "operators live on different truncations");
  }

  FockDim dim_;
  CMatrix m_;
};

/// Oscillator pair (omega, alpha) of H = omega(a+a + 1/2) + alpha(a^2 - a+^2).
struct ModelParams {
  double omega = 1.0;
  double alpha = 0.0;

  void validate() const {
    if (!std::isfinite(omega) || !std::isfinite(alpha))
      fail(ErrorCode::invalid_parameter, "model parameters must be finite");
    if (omega <= 0.0) fail(ErrorCode::invalid_parameter, "omega must be positive");
  }

  /// omega^2 + 4 alpha^2, the squared level spacing of H.
  double spacing_squared() const { return omega * omega + 4.0 * alpha * alpha; }
};

/// (a, a+) with a[n, n+1] = sqrt(n+1).
inline std::pair<FockOperator, FockOperator> ladder_ops(FockDim dim) {
  const int n = dim.n_levels();
  CMatrix a = CMatrix::Zero(n, n);
  for (int k = 0; k + 1 < n; ++k) a(k, k + 1) = std::sqrt(static_cast<double>(k + 1));
  CMatrix adag = a.adjoint();
  return {FockOperator(dim, std::move(a)), FockOperator(dim, std::move(adag))};
}

inline FockOperator number_op(FockDim dim) {
  const int n = dim.n_levels();
  CMatrix m = CMatrix::Zero(n, n);
  for (int k = 0; k < n; ++k) m(k, k) = static_cast<double>(k);
  return {dim, std::move(m)};
}

/// a^2 - a+^2, assembled entrywise so it is exact up to the last row.
inline FockOperator squeeze_op(FockDim dim) {
  const int n = dim.n_levels();
  CMatrix m = CMatrix::Zero(n, n);
  for (int k = 0; k + 2 < n; ++k) {
    const double v = std::sqrt(static_cast<double>((k + 1) * (k + 2)));
    m(k, k + 2) = v;
    m(k + 2, k) = -v;
  }
  return {dim, std::move(m)};
}

/// Position and momentum: x = (a + a+)/sqrt(2 omega), p = i sqrt(omega/2)(a+ - a).
inline std::pair<FockOperator, FockOperator> canonical_pair(double omega, FockDim dim) {
  if (!(omega > 0.0) || !std::isfinite(omega)) fail(ErrorCode::invalid_parameter, "omega must be positive");
  const auto [a, adag] = ladder_ops(dim);
  FockOperator x = (1.0 / std::sqrt(2.0 * omega)) * (a + adag);
  FockOperator p = (I_unit * std::sqrt(omega / 2.0)) * (adag - a);
  return {std::move(x), std::move(p)};
}

inline FockOperator build_hamiltonian(const ModelParams& params, FockDim dim) {
  params.validate();
  const int n = dim.n_levels();
  CMatrix h = params.alpha * squeeze_op(dim).matrix();
  for (int k = 0; k < n; ++k) h(k, k) = params.omega * (k + 0.5);
  return {dim, std::move(h)};
}

/// theta = sqrt(eps^2 + 4 kappa^2), the rapidity of the metric generator.
inline double generator_theta(double eps_metric, double kappa) {
  return std::sqrt(eps_metric * eps_metric + 4.0 * kappa * kappa);
}

/// Metric generator T = eps a+a + kappa (a^2 - a+^2).
inline FockOperator build_T(double eps_metric, double kappa, FockDim dim) {
  if (!std::isfinite(eps_metric) || !std::isfinite(kappa))
    fail(ErrorCode::invalid_parameter, "generator parameters must be finite");
  return eps_metric * number_op(dim) + kappa * squeeze_op(dim);
}

/// S M S^-1, obtained from the linear solve X S = S M (no explicit inverse).
inline FockOperator similarity_transform(const FockOperator& s, const FockOperator& m) {
  const Eigen::PartialPivLU<CMatrix> lu(s.matrix().transpose());
  const double rcond = lu.rcond();
  if (!(rcond > Eigen::NumTraits<double>::epsilon()))
    fail(ErrorCode::singular_transform, "transform is numerically rank deficient (rcond=" + std::to_string(rcond) + ")");
  const CMatrix sm = s.matrix() * m.matrix();
  CMatrix x = lu.solve(sm.transpose()).transpose();
  return {m.dim(), std::move(x)};
}

/// ||M_int - M_int+||_F / (2 ||M_int||_F), in [0, 1].
inline double hermiticity_defect(const FockOperator& m) {
  const auto inner = m.interior();
  const double norm = inner.norm();
  if (norm == 0.0) fail(ErrorCode::undefined_defect, "hermiticity defect of a zero matrix");
  return (inner - inner.adjoint()).norm() / (2.0 * norm);
}

/// Relative Frobenius distance ||X_int - Y_int|| / ||Y_int|| on the interior block.
inline double relative_distance(const FockOperator& x, const FockOperator& y) {
  const double norm = y.interior().norm();
  if (norm == 0.0) return x.interior().norm() == 0.0 ? 0.0 : std::numeric_limits<double>::infinity();
  return (x.interior() - y.interior()).norm() / norm;
}

/// ||P conj(M) P - M||_F / ||M||_F with P = diag((-1)^n).
inline double pt_symmetry_defect(const FockOperator& m) {
  const int n = m.size();
  const double norm = m.matrix().norm();
  if (norm == 0.0) return 0.0;
  CMatrix t = m.matrix().conjugate();
  for (int r = 0; r < n; ++r)
    for (int c = 0; c < n; ++c)
      if ((r + c) % 2 != 0) t(r, c) = -t(r, c);
  return (t - m.matrix()).norm() / norm;
}

}  // namespace quasiherm
