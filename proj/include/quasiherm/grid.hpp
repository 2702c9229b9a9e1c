#pragma once

#include <cmath>
#include <complex>
#include <functional>
#include <optional>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/Sparse>

#include "quasiherm/error.hpp"
#include "quasiherm/fock.hpp"

namespace quasiherm {

using RVector = Eigen::VectorXd;
using SparseC = Eigen::SparseMatrix<cplx, Eigen::RowMajor>;

/// Uniform grid on [x_min, x_max]; `margin` points at each end are excluded from residual norms.
class Grid {
 public:
  static constexpr int min_points = 64;

  Grid(double x_min = -12.0, double x_max = 12.0, int n_points = 2048, int margin = 4)
      : x_min_(x_min), x_max_(x_max), n_(n_points), margin_(margin) {
    if (!std::isfinite(x_min) || !std::isfinite(x_max) || !(x_min < x_max))
      fail(ErrorCode::invalid_parameter, "grid needs finite x_min < x_max");
    if (n_points < min_points) fail(ErrorCode::invalid_parameter, "grid needs at least 64 points");
    if (margin < 4 || 2 * margin >= n_points) fail(ErrorCode::invalid_parameter, "grid margin must be >= 4");
  }

  double x_min() const noexcept { return x_min_; }
  double x_max() const noexcept { return x_max_; }
  int size() const noexcept { return n_; }
  int margin() const noexcept { return margin_; }
  double spacing() const noexcept { return (x_max_ - x_min_) / (n_ - 1); }
  double x(int i) const noexcept { return i == n_ - 1 ? x_max_ : x_min_ + i * spacing(); }

  RVector points() const {
    RVector v(n_);
    for (int i = 0; i < n_; ++i) v(i) = x(i);
    return v;
  }

  /// Same interval with the spacing halved.
  Grid refined() const { return Grid(x_min_, x_max_, 2 * n_ - 1, margin_); }
  Grid with_margin(int margin) const { return Grid(x_min_, x_max_, n_, margin); }

  friend bool operator==(const Grid&, const Grid&) = default;

 private:
  double x_min_, x_max_;
  int n_;
  int margin_;
};

template <typename F>
RVector sample(const Grid& g, F&& f) {
  RVector v(g.size());
  for (int i = 0; i < g.size(); ++i) v(i) = f(g.x(i));
  return v;
}

template <typename F>
CVector sample_complex(const Grid& g, F&& f) {
  CVector v(g.size());
  for (int i = 0; i < g.size(); ++i) v(i) = f(g.x(i));
  return v;
}

/// ||v|| over the points at least `margin` away from either end.
inline double interior_norm(const CVector& v, int margin) {
  const Eigen::Index n = v.size() - 2 * margin;
  return n > 0 ? v.segment(margin, n).norm() : 0.0;
}

/// Sparse operator on grid samples, 4th-order central stencils, zero Dirichlet data outside.
class GridOperator {
 public:
  GridOperator(Grid grid, SparseC m, int order = 4) : grid_(grid), m_(std::move(m)), order_(order) {
    if (m_.rows() != grid_.size() || m_.cols() != grid_.size())
      fail(ErrorCode::invalid_parameter, "grid operator shape does not match its grid");
  }

  const Grid& grid() const noexcept { return grid_; }
  const SparseC& matrix() const noexcept { return m_; }
  int order() const noexcept { return order_; }
  CMatrix dense() const { return CMatrix(m_); }

  CVector apply(const CVector& f) const {
    if (f.size() != grid_.size()) fail(ErrorCode::invalid_parameter, "sample vector does not match grid");
    return m_ * f;
  }

  friend GridOperator operator+(const GridOperator& x, const GridOperator& y) {
    same(x, y);
    return {x.grid_, SparseC(x.m_ + y.m_), x.order_};
  }
  friend GridOperator operator-(const GridOperator& x, const GridOperator& y) {
    same(x, y);
    return {x.grid_, SparseC(x.m_ - y.m_), x.order_};
  }
  /// Composition x after y.
  friend GridOperator operator*(const GridOperator& x, const GridOperator& y) {
    same(x, y);
    return {x.grid_, SparseC(x.m_ * y.m_), x.order_};
  }
  friend GridOperator operator*(cplx s, const GridOperator& x) { return {x.grid_, SparseC(s * x.m_), x.order_}; }

 private:
  static void same(const GridOperator& x, const GridOperator& y) {
    if (!(x.grid_ == y.grid_)) fail(ErrorCode::invalid_parameter, "operators live on different grids");
  }

  Grid grid_;
  SparseC m_;
  int order_;
};

namespace detail {

inline GridOperator stencil_op(const Grid& g, const std::array<double, 5>& w, double scale) {
  const int n = g.size();
  std::vector<Eigen::Triplet<cplx>> t;
  t.reserve(static_cast<std::size_t>(5 * n));
  for (int i = 0; i < n; ++i)
    for (int k = -2; k <= 2; ++k) {
      const int j = i + k;
      if (j >= 0 && j < n && w[k + 2] != 0.0) t.emplace_back(i, j, w[k + 2] * scale);
    }
  SparseC m(n, n);
  m.setFromTriplets(t.begin(), t.end());
  return {g, std::move(m)};
}

}  // namespace detail

/// d/dx: [1/12, -2/3, 0, 2/3, -1/12] / h.
inline GridOperator d1_op(const Grid& g) {
  return detail::stencil_op(g, {1.0 / 12.0, -2.0 / 3.0, 0.0, 2.0 / 3.0, -1.0 / 12.0}, 1.0 / g.spacing());
}

/// d^2/dx^2: [-1/12, 4/3, -5/2, 4/3, -1/12] / h^2.
inline GridOperator d2_op(const Grid& g) {
  const double h = g.spacing();
  return detail::stencil_op(g, {-1.0 / 12.0, 4.0 / 3.0, -5.0 / 2.0, 4.0 / 3.0, -1.0 / 12.0}, 1.0 / (h * h));
}

template <typename Vec>
GridOperator multiply_op(const Grid& g, const Vec& samples) {
  if (samples.size() != g.size()) fail(ErrorCode::invalid_parameter, "samples do not match grid");
  SparseC m(g.size(), g.size());
  m.reserve(Eigen::VectorXi::Constant(g.size(), 1));
  for (int i = 0; i < g.size(); ++i) m.insert(i, i) = cplx(samples(i));
  return {g, std::move(m)};
}

inline GridOperator identity_op(const Grid& g) { return multiply_op(g, RVector::Ones(g.size())); }

/// Hermite functions H_k(x/s) exp(-x^2/(2 s^2)), k = 0..3, used to probe operator identities.
inline std::vector<CVector> hermite_probes(const Grid& g, double scale = 2.0) {
  std::vector<CVector> out;
  for (int k = 0; k < 4; ++k)
    out.push_back(sample_complex(g, [&](double x) {
      const double u = x / scale;
      const double hk = k == 0 ? 1.0 : k == 1 ? 2.0 * u : k == 2 ? 4.0 * u * u - 2.0 : 8.0 * u * u * u - 12.0 * u;
      return cplx(hk * std::exp(-u * u / 2.0));
    }));
  return out;
}

/// max_k ||E f_k|| / ||R f_k|| over Hermite probes, on points `margin` away from the ends.
inline double probe_defect(const GridOperator& e, const GridOperator& reference, int margin) {
  double worst = 0.0;
  for (const CVector& f : hermite_probes(e.grid())) {
    const double den = interior_norm(reference.apply(f), margin);
    if (den == 0.0) fail(ErrorCode::undefined_defect, "reference operator annihilates a probe");
    worst = std::max(worst, interior_norm(e.apply(f), margin) / den);
  }
  return worst;
}

enum class GaugeTag { cosh_pair, custom };

/// Real A, B of a = A d/dx + B with analytic derivative samples.
struct GaugeFunctions {
  Grid grid;
  RVector A, dA, d2A, B, dB;
  GaugeTag tag = GaugeTag::custom;
  double delta = 0.0;  // cosh_pair only

  static GaugeFunctions cosh_pair(const Grid& g, double delta) {
    GaugeFunctions gf{g,
                      sample(g, [](double x) { return std::cosh(x); }),
                      sample(g, [](double x) { return std::sinh(x); }),
                      sample(g, [](double x) { return std::cosh(x); }),
                      sample(g, [&](double x) { return delta * std::cosh(x); }),
                      sample(g, [&](double x) { return delta * std::sinh(x); }),
                      GaugeTag::cosh_pair,
                      delta};
    gf.validate();
    return gf;
  }

  template <typename FA, typename FdA, typename Fd2A, typename FB, typename FdB>
  static GaugeFunctions custom(const Grid& g, FA&& a, FdA&& da, Fd2A&& d2a, FB&& b, FdB&& db) {
    GaugeFunctions gf{g, sample(g, a), sample(g, da), sample(g, d2a), sample(g, b), sample(g, db), GaugeTag::custom, 0.0};
    gf.validate();
    return gf;
  }

  void validate() const {
    for (const RVector* v : {&A, &dA, &d2A, &B, &dB})
      if (v->size() != grid.size() || !v->allFinite())
        fail(ErrorCode::invalid_parameter, "gauge samples must be finite and match the grid");
    if ((A.array() == 0.0).any()) fail(ErrorCode::gauge_singular, "A vanishes on the grid");
  }

  /// Largest interior mismatch between the supplied derivatives and 4th-order differences of the samples.
  double derivative_mismatch() const {
    const CVector a = A.cast<cplx>(), b = B.cast<cplx>();
    const CVector ea = d1_op(grid).apply(a) - dA.cast<cplx>();
    const CVector ea2 = d2_op(grid).apply(a) - d2A.cast<cplx>();
    const CVector eb = d1_op(grid).apply(b) - dB.cast<cplx>();
    const int m = grid.margin();
    const Eigen::Index n = grid.size() - 2 * m;
    return std::max({ea.segment(m, n).cwiseAbs().maxCoeff(), ea2.segment(m, n).cwiseAbs().maxCoeff(),
                     eb.segment(m, n).cwiseAbs().maxCoeff()});
  }
};

/// H = -w A^2 d^2 + (4 al A B - 2 w A A') d - (w - 2 al)(A B' + A' B) + w B^2 - al (A A'' + A'^2) + w/2.
inline GridOperator build_position_hamiltonian(const GaugeFunctions& gf, const ModelParams& params, const Grid& grid) {
  params.validate();
  if (!(gf.grid == grid)) fail(ErrorCode::invalid_parameter, "gauge samples live on a different grid");
  gf.validate();
  const double w = params.omega, al = params.alpha;
  const RVector A = gf.A, dA = gf.dA, d2A = gf.d2A, B = gf.B, dB = gf.dB;
  const RVector c2 = -w * A.cwiseProduct(A);
  const RVector c1 = (4.0 * al * A.cwiseProduct(B) - 2.0 * w * A.cwiseProduct(dA));
  const RVector c0 = (-(w - 2.0 * al) * (A.cwiseProduct(dB) + dA.cwiseProduct(B)) + w * B.cwiseProduct(B) -
                      al * (A.cwiseProduct(d2A) + dA.cwiseProduct(dA)))
                         .array() +
                     w / 2.0;
  return multiply_op(grid, c2) * d2_op(grid) + multiply_op(grid, c1) * d1_op(grid) + multiply_op(grid, c0);
}

/// The same operator composed directly from a = A d + B, a+ = -A d + B - A' on the grid:
/// w(a+ a + 1/2) + al(a^2 - a+^2). Differs from the printed form in the first-order term.
inline GridOperator compose_position_hamiltonian(const GaugeFunctions& gf, const ModelParams& params, const Grid& grid) {
  params.validate();
  const double w = params.omega, al = params.alpha;
  const GridOperator d = d1_op(grid), d2 = d2_op(grid);
  const RVector A = gf.A, dA = gf.dA, d2A = gf.d2A, B = gf.B, dB = gf.dB;
  // a f = A f' + B f; a^2 f = A^2 f'' + (A A' + 2 A B) f' + (A B' + B^2) f
  // a+ f = -A f' + (B - A') f; a+^2 f = A^2 f'' + (A A' - 2 A (B - A')) f' + (-A (B' - A'') + (B - A')^2) f
  // a+ a f = -A^2 f'' + (-A A' - A B + A (B - A')) ... assembled from the pieces below
  auto mul = [&](const RVector& v) { return multiply_op(grid, v); };
  // a+a f = -A^2 f'' - 2 A A' f' + (B^2 - A B' - A' B) f
  // a^2 f = A^2 f'' + (A A' + 2 A B) f' + (A B' + B^2) f
  // a+^2 f = A^2 f'' + (A A' - 2 A (B - A')) f' + (-A (B' - A'') + (B - A')^2) f
  const RVector AA = A.cwiseProduct(A);
  const RVector Bm = B - dA;
  const GridOperator num = mul(-AA) * d2 + mul(-2.0 * A.cwiseProduct(dA)) * d +
                           mul(B.cwiseProduct(B) - A.cwiseProduct(dB) - dA.cwiseProduct(B));
  const GridOperator a2 = mul(AA) * d2 + mul(A.cwiseProduct(dA) + 2.0 * A.cwiseProduct(B)) * d +
                          mul(A.cwiseProduct(dB) + B.cwiseProduct(B));
  const GridOperator adag2 = mul(AA) * d2 + mul(A.cwiseProduct(dA) - 2.0 * A.cwiseProduct(Bm)) * d +
                             mul(-A.cwiseProduct(dB - d2A) + Bm.cwiseProduct(Bm));
  return cplx(w) * num + cplx(w / 2.0) * identity_op(grid) + cplx(al) * (a2 - adag2);
}

/// rho = exp(-(2 al / w) int_0^x B/A), closed form for cosh_pair, 4th-order quadrature otherwise.
inline RVector rho_gauge(const GaugeFunctions& gf, const ModelParams& params, const Grid& grid) {
  params.validate();
  gf.validate();
  const double k = 2.0 * params.alpha / params.omega;
  if (gf.tag == GaugeTag::cosh_pair) return sample(grid, [&](double x) { return std::exp(-k * gf.delta * x); });

  const RVector f = gf.B.cwiseQuotient(gf.A);
  const int n = grid.size();
  const double h = grid.spacing();
  RVector cum(n);
  cum(0) = 0.0;
  for (int i = 0; i + 1 < n; ++i) {
    double seg;
    if (i == 0)
      seg = h / 24.0 * (9.0 * f(0) + 19.0 * f(1) - 5.0 * f(2) + f(3));
    else if (i == n - 2)
      seg = h / 24.0 * (9.0 * f(n - 1) + 19.0 * f(n - 2) - 5.0 * f(n - 3) + f(n - 4));
    else
      seg = h / 24.0 * (-f(i - 1) + 13.0 * f(i) + 13.0 * f(i + 1) - f(i + 2));
    cum(i + 1) = cum(i) + seg;
  }
  // cubic interpolation of the antiderivative at x = 0 (clamped to the grid)
  const double x0 = std::clamp(0.0, grid.x_min(), grid.x_max());
  int j = static_cast<int>(std::floor((x0 - grid.x_min()) / h)) - 1;
  j = std::clamp(j, 0, n - 4);
  double anchor = 0.0;
  for (int p = 0; p < 4; ++p) {
    double lp = 1.0;
    for (int q = 0; q < 4; ++q)
      if (q != p) lp *= (x0 - grid.x(j + q)) / (grid.x(j + p) - grid.x(j + q));
    anchor += lp * cum(j + p);
  }
  return (-k * (cum.array() - anchor)).exp().matrix();
}

/// U_eff = w/2 - w (A B)' - al (A'^2 + A A'') + (w + 4 al^2 / w) B^2.
inline RVector u_eff(const GaugeFunctions& gf, const ModelParams& params, const Grid& grid) {
  params.validate();
  (void)grid;
  const double w = params.omega, al = params.alpha;
  const RVector AB1 = gf.dA.cwiseProduct(gf.B) + gf.A.cwiseProduct(gf.dB);
  return ((w / 2.0 - w * AB1.array() - al * (gf.dA.array().square() + gf.A.array() * gf.d2A.array())) +
          (w + 4.0 * al * al / w) * gf.B.array().square())
      .matrix();
}

/// h = -w d A^2 d + U_eff in the gauge rho (symmetric form).
inline GridOperator symmetric_hamiltonian(const GaugeFunctions& gf, const ModelParams& params, const Grid& grid) {
  const GridOperator d = d1_op(grid);
  const RVector AA = gf.A.cwiseProduct(gf.A);
  const RVector dAA = 2.0 * gf.A.cwiseProduct(gf.dA);
  return cplx(-params.omega) * (multiply_op(grid, AA) * d2_op(grid) + multiply_op(grid, dAA) * d) +
         multiply_op(grid, u_eff(gf, params, grid));
}

struct SchrodingerInputs {
  ModelParams params;
  double delta = 0.0;
  double eps_energy = 0.0;
};

struct SchrodingerModel {
  RVector V;
  double lambda_fixed = 0.0;  // 2 alpha / omega
  double eps_energy = 0.0;
};

/// V = d^2 (w^2 + 4 al^2)/w^2 - (eps - 1/2 - al/w) sech^2 x + 2 d tanh x, with lambda = 2 al / w.
inline SchrodingerModel schrodinger_potential(const SchrodingerInputs& in, const Grid& grid) {
  in.params.validate();
  const double w = in.params.omega, al = in.params.alpha, d = in.delta;
  const double c = d * d * in.params.spacing_squared() / (w * w);
  const double depth = in.eps_energy - 0.5 - al / w;
  RVector v = sample(grid, [&](double x) {
    const double s = 1.0 / std::cosh(x);
    return c - depth * s * s + 2.0 * d * std::tanh(x);
  });
  return {std::move(v), 2.0 * al / w, in.eps_energy};
}

/// General reduced potential before the cosh_pair substitution; the reduced equation is -Phi'' + V36 Phi = 0.
inline RVector reduced_potential(const GaugeFunctions& gf, const ModelParams& params, double eps_energy) {
  const double w = params.omega, al = params.alpha;
  const Eigen::ArrayXd A = gf.A.array(), dA = gf.dA.array(), d2A = gf.d2A.array(), B = gf.B.array(), dB = gf.dB.array();
  const Eigen::ArrayXd A2 = A * A;
  return ((w / 2.0 - eps_energy) / (w * A2) - (dA * B + A * dB) / A2 + params.spacing_squared() / (w * w) * B * B / A2 +
          (w - al) / w * d2A / A - al / w * dA * dA / A2)
      .matrix();
}

/// ||H Psi - eps Psi|| / ||Psi|| on the interior, Psi = rho^-1 Phi / A, H the printed position form.
inline double gauge_chain_residual(const CVector& phi, double eps_energy, const SchrodingerInputs& in, const Grid& grid) {
  if (phi.size() != grid.size() || !phi.allFinite()) fail(ErrorCode::invalid_parameter, "Phi must be finite grid samples");
  const GaugeFunctions gf = GaugeFunctions::cosh_pair(grid, in.delta);
  const RVector rho = rho_gauge(gf, in.params, grid);
  if ((rho.array() == 0.0).any() || !rho.allFinite()) fail(ErrorCode::gauge_singular, "rho underflows on the grid");
  const CVector psi = phi.cwiseQuotient(rho.cwiseProduct(gf.A).cast<cplx>());
  if (!psi.allFinite()) fail(ErrorCode::gauge_singular, "Psi overflows on the grid");
  const double norm = interior_norm(psi, grid.margin());
  if (norm == 0.0) fail(ErrorCode::zero_norm, "Psi vanishes on the interior");
  const GridOperator h = build_position_hamiltonian(gf, in.params, grid);
  return interior_norm(h.apply(psi) - eps_energy * psi, grid.margin()) / norm;
}

}  // namespace quasiherm
