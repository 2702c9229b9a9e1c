#pragma once

#include <cmath>
#include <complex>
#include <optional>
#include <string>
#include <utility>

#include <Eigen/Eigenvalues>

#include "quasiherm/grid.hpp"
#include "quasiherm/jacobi.hpp"
#include "quasiherm/metric.hpp"

namespace quasiherm {

/// How (eq 37) and W = a tanh x + b line up: 2ab against 2 delta, a(a+1) against the
/// sech^2 depth eps - 1/2 - alpha/omega, and a^2 + b^2 against the constant term.
struct CoefficientMatch {
  double tilt_residual = 0.0;
  double depth_residual = 0.0;
  double constant_residual = 0.0;
};

/// Superpotential parameters; susy_a * susy_b = delta by construction.
struct SusyParams {
  double susy_a = 0.0;
  double susy_b = 0.0;
  double delta = 0.0;
  double eps_energy = 0.0;
  Branch branch = Branch::plus;
  bool complexified = false;
  CoefficientMatch match;

  SusyParams complexify() const {
    SusyParams out = *this;
    out.complexified = true;
    return out;
  }
};

inline CoefficientMatch coefficient_match(double a, double b, const ModelParams& params, double delta, double eps_energy) {
  const double w = params.omega, al = params.alpha;
  return {std::abs(2.0 * a * b - 2.0 * delta), std::abs(a * (a + 1.0) - (eps_energy - 0.5 - al / w)),
          std::abs(a * a + b * b - delta * delta * params.spacing_squared() / (w * w))};
}

namespace detail {

inline SusyParams finish_susy(double a, const ModelParams& params, double delta, double eps_energy, Branch branch) {
  if (a == 0.0) fail(ErrorCode::degenerate_superpotential, "superpotential amplitude a vanishes");
  SusyParams sp;
  sp.susy_a = a;
  sp.susy_b = delta / a;
  sp.delta = delta;
  sp.eps_energy = eps_energy;
  sp.branch = branch;
  sp.match = coefficient_match(a, sp.susy_b, params, delta, eps_energy);
  return sp;
}

}  // namespace detail

/// a = -(4 al^2 d^2 + 2 al w + w^2 (1 + d^2 - 2 eps)) / (2 w^2)
///     +- d sqrt((d^2 - 4) w^4 + 8 al^2 d^2 w^2 + 16 al^4 d^2) / (2 w^2),  b = d / a.
inline SusyParams susy_params_from_model(const ModelParams& params, double delta, double eps_energy,
                                         Branch branch = Branch::plus) {
  params.validate();
  const double w = params.omega, al = params.alpha, d = delta;
  const double w2 = w * w, w4 = w2 * w2, d2 = d * d;
  const double disc = (d2 - 4.0) * w4 + 8.0 * al * al * d2 * w2 + 16.0 * al * al * al * al * d2;
  if (disc < 0.0) fail(ErrorCode::complex_susy_a, "discriminant is negative, a would be complex");
  const double base = -(4.0 * al * al * d2 + 2.0 * al * w + w2 * (1.0 + d2 - 2.0 * eps_energy)) / (2.0 * w2);
  const double root = d * std::sqrt(disc) / (2.0 * w2);
  return detail::finish_susy(branch == Branch::plus ? base + root : base - root, params, delta, eps_energy, branch);
}

/// Alternative constructor: a solves a(a+1) = eps - 1/2 - alpha/omega exactly, b = delta / a.
inline SusyParams susy_params_matching(const ModelParams& params, double delta, double eps_energy,
                                       Branch branch = Branch::plus) {
  params.validate();
  const double depth = eps_energy - 0.5 - params.alpha / params.omega;
  const double disc = 1.0 + 4.0 * depth;
  if (disc < 0.0) fail(ErrorCode::complex_susy_a, "sech^2 depth below -1/4 gives complex a");
  const double s = std::sqrt(disc);
  return detail::finish_susy(branch == Branch::plus ? (-1.0 + s) / 2.0 : (-1.0 - s) / 2.0, params, delta, eps_energy,
                             branch);
}

inline SusyParams susy_params_direct(double a, double b, bool complexified = false) {
  if (a == 0.0) fail(ErrorCode::degenerate_superpotential, "superpotential amplitude a vanishes");
  SusyParams sp;
  sp.susy_a = a;
  sp.susy_b = b;
  sp.delta = a * b;
  sp.complexified = complexified;
  return sp;
}

/// W = a tanh x + b, or a tanh x + i b once complexified.
struct Superpotential {
  double susy_a = 0.0;
  double susy_b = 0.0;
  bool complexified = false;

  explicit Superpotential(const SusyParams& sp) : susy_a(sp.susy_a), susy_b(sp.susy_b), complexified(sp.complexified) {}
  Superpotential(double a, double b, bool cx) : susy_a(a), susy_b(b), complexified(cx) {}

  cplx shift() const { return complexified ? cplx(0.0, susy_b) : cplx(susy_b, 0.0); }
  cplx operator()(double x) const { return susy_a * std::tanh(x) + shift(); }
  double derivative(double x) const {
    const double s = 1.0 / std::cosh(x);
    return susy_a * s * s;
  }
};

/// Closed forms: V = b^2 + a^2 - a(a+1) sech^2 + 2ab tanh, Vbar = b^2 + a^2 + a(1-a) sech^2 + 2ab tanh,
/// with b^2 -> -b^2 and 2ab -> 2iab once complexified.
inline cplx partner_potential(const Superpotential& w, double x, bool susy_side) {
  const double a = w.susy_a, b = w.susy_b, s = 1.0 / std::cosh(x), t = std::tanh(x);
  const double depth = susy_side ? a * (1.0 - a) : -a * (a + 1.0);
  if (w.complexified) return cplx(a * a - b * b + depth * s * s, 2.0 * a * b * t);
  return a * a + b * b + depth * s * s + 2.0 * a * b * t;
}

/// The adjoint of H_p as printed: -b^2 + a^2 + a(a+1) sech^2 - 2iab tanh.
inline cplx printed_adjoint_potential(const Superpotential& w, double x) {
  const double a = w.susy_a, b = w.susy_b, s = 1.0 / std::cosh(x);
  return cplx(a * a - b * b + a * (a + 1.0) * s * s, -2.0 * a * b * std::tanh(x));
}

inline GridOperator schrodinger_op(const Grid& g, const CVector& v) { return multiply_op(g, v) - d2_op(g); }

struct PartnerPair {
  GridOperator H_p;     // -d^2 + W^2 - W'
  GridOperator H_susy;  // -d^2 + W^2 + W'
};

inline PartnerPair superpotential_partners(const Superpotential& w, const Grid& grid) {
  const CVector w2 = sample_complex(grid, [&](double x) { return w(x) * w(x); });
  const CVector dw = sample_complex(grid, [&](double x) { return cplx(w.derivative(x)); });
  return {schrodinger_op(grid, w2 - dw), schrodinger_op(grid, w2 + dw)};
}

/// L = d + W and L- = -d + W.
inline std::pair<GridOperator, GridOperator> ladder_pair(const Superpotential& w, const Grid& grid) {
  const GridOperator wm = multiply_op(grid, sample_complex(grid, w));
  const GridOperator d = d1_op(grid);
  return {d + wm, wm - d};
}

inline constexpr int composed_margin = 8;

struct FactorizationDefect {
  double lower = 0.0;  // L- L against H_p
  double upper = 0.0;  // L L- against H_susy
};

inline FactorizationDefect factorization_defect(const Superpotential& w, const Grid& grid) {
  const PartnerPair pp = superpotential_partners(w, grid);
  const auto [l, lm] = ladder_pair(w, grid);
  const int m = std::max(composed_margin, grid.margin());
  return {probe_defect(lm * l - pp.H_p, pp.H_p, m), probe_defect(l * lm - pp.H_susy, pp.H_susy, m)};
}

enum class IntertwinerKind { eta1, eta1_printed, eta2, eta_composite };

struct IntertwinerOp {
  IntertwinerKind kind;
  GridOperator op;
};

/// eta1 = d - W (the factorization form; the printed constant +ib is eta1_printed),
/// eta2 = d - i (a+1)/(2b) sech^2, eta = eta2 eta1.
inline IntertwinerOp build_intertwiner(IntertwinerKind kind, const SusyParams& sp, const Grid& grid) {
  const Superpotential w(sp);
  const GridOperator d = d1_op(grid);
  const double a = sp.susy_a, b = sp.susy_b;
  auto eta1 = [&] { return d - multiply_op(grid, sample_complex(grid, w)); };
  auto eta2 = [&] {
    if (b == 0.0) fail(ErrorCode::intertwiner_singular, "eta2 needs a nonzero b");
    const cplx c = I_unit * (a + 1.0) / (2.0 * b);
    return d - multiply_op(grid, sample_complex(grid, [&](double x) {
             const double s = 1.0 / std::cosh(x);
             return c * s * s;
           }));
  };
  switch (kind) {
    case IntertwinerKind::eta1: return {kind, eta1()};
    case IntertwinerKind::eta1_printed: {
      const cplx shift = sp.complexified ? cplx(0.0, b) : cplx(b, 0.0);
      return {kind, d - multiply_op(grid, sample_complex(grid, [&](double x) { return a * std::tanh(x) - shift; }))};
    }
    case IntertwinerKind::eta2: return {kind, eta2()};
    case IntertwinerKind::eta_composite: return {kind, eta2() * eta1()};
  }
  fail(ErrorCode::invalid_parameter, "unknown intertwiner kind");
}

/// Mechanical adjoint (conjugate transpose of the grid matrix).
inline GridOperator adjoint_op(const GridOperator& op) { return {op.grid(), SparseC(op.matrix().adjoint()), op.order()}; }

/// max over Hermite probes of ||(op H_left - H_right op) f|| / ||H_left f||, margin 8.
inline double intertwiner_residual(const IntertwinerOp& op, const GridOperator& h_left, const GridOperator& h_right,
                                   const Grid& grid) {
  const int m = std::max(composed_margin, grid.margin());
  return probe_defect(op.op * h_left - h_right * op.op, h_left, m);
}

/// lambda_n = -(a-n)^2 + (ab)^2/(a-n)^2.
inline double rm_spectrum(const SusyParams& sp, int n) {
  if (n < 0) fail(ErrorCode::invalid_parameter, "level index must be non-negative");
  const double k = sp.susy_a - n;
  if (k == 0.0) fail(ErrorCode::spectrum_pole, "a = n puts a pole in the spectrum");
  const double ab = sp.susy_a * sp.susy_b;
  return -k * k + ab * ab / (k * k);
}

enum class LambdaChoice { delta, two_alpha_over_omega };
enum class PotentialSide { partner, susy };

inline constexpr std::string_view to_string(LambdaChoice c) {
  return c == LambdaChoice::delta ? "delta" : "2alpha/omega";
}
inline constexpr std::string_view to_string(PotentialSide s) { return s == PotentialSide::partner ? "V" : "Vbar"; }

struct RMEigenstate {
  int n = 0;
  cplx c1n, c2n;
  double lambda_n = 0.0;
  CVector Phi;
  double norm_constant = 1.0;
  bool normalizable = false;
  double ode_residual = 0.0;
  PotentialSide side = PotentialSide::partner;
  std::string warning;
};

/// log(1 - tanh x) and log(1 + tanh x) without cancellation.
inline double log_one_minus_tanh(double x) {
  const double u = 2.0 * x;
  return std::log(2.0) - (u > 0 ? u + std::log1p(std::exp(-u)) : std::log1p(std::exp(u)));
}
inline double log_one_plus_tanh(double x) { return log_one_minus_tanh(-x); }

/// Potential with constants removed: -a(a+1) sech^2 + 2iab tanh (V) or a(1-a) sech^2 + 2iab tanh (Vbar).
inline CVector reduced_rm_potential(const SusyParams& sp, const Grid& grid, PotentialSide side) {
  const double a = sp.susy_a, ab = sp.susy_a * sp.susy_b;
  const double depth = side == PotentialSide::partner ? -a * (a + 1.0) : a * (1.0 - a);
  return sample_complex(grid, [&](double x) {
    const double s = 1.0 / std::cosh(x);
    return cplx(depth * s * s, 2.0 * ab * std::tanh(x));
  });
}

inline double trapezoid(const RVector& f, double h) {
  if (f.size() < 2) return 0.0;
  return h * (f.sum() - 0.5 * (f(0) + f(f.size() - 1)));
}

inline double ode_residual(const CVector& phi, const CVector& v, double lambda, const Grid& grid) {
  const CVector r = schrodinger_op(grid, v).apply(phi) - lambda * phi;
  return interior_norm(r, grid.margin()) / interior_norm(phi, grid.margin());
}

namespace detail {

inline CVector sample_rm(int n, cplx c1, cplx c2, const Grid& grid) {
  return sample_complex(grid, [&](double x) {
    const cplx env = std::exp(0.5 * c1 * log_one_minus_tanh(x) + 0.5 * c2 * log_one_plus_tanh(x));
    return env == cplx{} ? cplx{} : env * jacobi_complex(n, c1, c2, std::tanh(x));
  });
}

inline std::pair<cplx, cplx> rm_exponents(const SusyParams& sp, int n, double lambda) {
  const double k = sp.susy_a - n;
  if (k == 0.0) fail(ErrorCode::spectrum_pole, "a = n puts a pole in the spectrum");
  return {cplx(k, lambda / k), cplx(k, -lambda / k)};
}

}  // namespace detail

/// ODE residuals at one reference point that settle which lambda enters c1n, c2n.
struct LambdaAdjudication {
  LambdaChoice choice = LambdaChoice::delta;
  double residual_delta = 0.0;
  double residual_two_alpha_over_omega = 0.0;
};

inline LambdaAdjudication adjudicate_lambda_at(const ModelParams& params, double delta, double eps_energy,
                                               const Grid& grid) {
  const SusyParams sp = susy_params_from_model(params, delta, eps_energy).complexify();
  const double lam0 = rm_spectrum(sp, 0);
  auto best = [&](double lam) {
    const auto [c1, c2] = detail::rm_exponents(sp, 0, lam);
    const CVector phi = detail::sample_rm(0, c1, c2, grid);
    return std::min(ode_residual(phi, reduced_rm_potential(sp, grid, PotentialSide::partner), lam0, grid),
                    ode_residual(phi, reduced_rm_potential(sp, grid, PotentialSide::susy), lam0, grid));
  };
  LambdaAdjudication out;
  out.residual_delta = best(delta);
  out.residual_two_alpha_over_omega = best(2.0 * params.alpha / params.omega);
  out.choice = out.residual_delta <= out.residual_two_alpha_over_omega ? LambdaChoice::delta
                                                                       : LambdaChoice::two_alpha_over_omega;
  return out;
}

/// One-time decision at the reference point (omega 3, alpha 2, delta 10, eps 5) on [-12, 12] x 4096.
inline const LambdaAdjudication& lambda_adjudication() {
  static const LambdaAdjudication decided = adjudicate_lambda_at({3.0, 2.0}, 10.0, 5.0, Grid(-12.0, 12.0, 4096));
  return decided;
}

/// Phi_n = N (1 - tanh)^{c1/2} (1 + tanh)^{c2/2} P_n^{(c1,c2)}(tanh), L2-normalized when Re c1, Re c2 > 0.
/// `two_alpha_over_omega` is only consulted when the adjudication picked that lambda.
inline RMEigenstate rm_wavefunction(const SusyParams& sp, int n, const Grid& grid, double two_alpha_over_omega = 0.0) {
  RMEigenstate st;
  st.n = n;
  st.lambda_n = rm_spectrum(sp, n);
  const double lam = lambda_adjudication().choice == LambdaChoice::delta ? sp.susy_a * sp.susy_b : two_alpha_over_omega;
  std::tie(st.c1n, st.c2n) = detail::rm_exponents(sp, n, lam);
  st.normalizable = st.c1n.real() > 0.0 && st.c2n.real() > 0.0;
  st.Phi = detail::sample_rm(n, st.c1n, st.c2n, grid);
  if (!st.Phi.allFinite()) {
    st.warning = "wavefunction overflows on the grid";
    st.Phi = st.Phi.unaryExpr([](cplx v) { return std::isfinite(std::abs(v)) ? v : cplx{}; });
  }

  if (st.normalizable) {
    const double mass = trapezoid(st.Phi.cwiseAbs2(), grid.spacing());
    if (!(mass > 0.0)) fail(ErrorCode::zero_norm, "wavefunction has zero norm on the grid");
    st.norm_constant = 1.0 / std::sqrt(mass);
    st.Phi *= st.norm_constant;
  } else if (st.warning.empty()) {
    st.warning = "non-normalizable: Re(c1) or Re(c2) <= 0 (n >= a)";
  }

  const double rp = ode_residual(st.Phi, reduced_rm_potential(sp, grid, PotentialSide::partner), st.lambda_n, grid);
  const double rs = ode_residual(st.Phi, reduced_rm_potential(sp, grid, PotentialSide::susy), st.lambda_n, grid);
  st.side = rp <= rs ? PotentialSide::partner : PotentialSide::susy;
  st.ode_residual = std::min(rp, rs);
  return st;
}

/// Re <Phi, (-d^2 + V) Phi> / <Phi, Phi> on the interior with the state's selected potential.
inline double rayleigh_quotient(const RMEigenstate& st, const SusyParams& sp, const Grid& grid) {
  const CVector hphi = schrodinger_op(grid, reduced_rm_potential(sp, grid, st.side)).apply(st.Phi);
  const int m = grid.margin();
  const Eigen::Index k = grid.size() - 2 * m;
  const cplx num = st.Phi.segment(m, k).dot(hphi.segment(m, k));
  const double den = st.Phi.segment(m, k).squaredNorm();
  if (den == 0.0) fail(ErrorCode::zero_norm, "wavefunction vanishes on the interior");
  return (num / den).real();
}

inline RVector density_profile(const RMEigenstate& st, const Grid& grid) {
  if (st.Phi.size() != grid.size()) fail(ErrorCode::invalid_parameter, "state was sampled on a different grid");
  return st.Phi.cwiseAbs2();
}

struct SpectrumPairing {
  std::vector<double> partner_levels;  // bound levels of H_p below the continuum a^2
  std::vector<double> susy_levels;     // bound levels of H_susy below the continuum
  double max_mismatch = 0.0;           // partner level k+1 against susy level k
};

/// Real a > 1, b = 0: H_p carries the extra zero mode, the rest of the bound spectra coincide.
inline SpectrumPairing spectrum_pairing(double a, const Grid& grid) {
  if (!(a > 1.0)) fail(ErrorCode::invalid_parameter, "pairing check needs real a > 1");
  const PartnerPair pp = superpotential_partners(Superpotential(a, 0.0, false), grid);
  const double threshold = a * a - 1e-6;
  auto bound = [&](const GridOperator& op) {
    const Eigen::MatrixXd m = op.dense().real();
    const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(m, Eigen::EigenvaluesOnly);
    if (es.info() != Eigen::Success) fail(ErrorCode::eigensolver_failure, "grid eigensolve failed");
    std::vector<double> out;
    for (Eigen::Index k = 0; k < es.eigenvalues().size(); ++k)
      if (es.eigenvalues()(k) < threshold) out.push_back(es.eigenvalues()(k));
    return out;
  };
  SpectrumPairing sp{bound(pp.H_p), bound(pp.H_susy), 0.0};
  const std::size_t common = std::min(sp.susy_levels.size(), sp.partner_levels.empty() ? 0 : sp.partner_levels.size() - 1);
  for (std::size_t k = 0; k < common; ++k)
    sp.max_mismatch = std::max(sp.max_mismatch, std::abs(sp.partner_levels[k + 1] - sp.susy_levels[k]));
  if (sp.partner_levels.size() != sp.susy_levels.size() + 1) sp.max_mismatch = std::numeric_limits<double>::infinity();
  return sp;
}

}  // namespace quasiherm
