#pragma once

#include <cmath>
#include <complex>
#include <optional>
#include <string>

#include <Eigen/SVD>

#include "quasiherm/expm.hpp"
#include "quasiherm/fock.hpp"
#include "quasiherm/quadratic.hpp"

namespace quasiherm {

enum class Branch { plus, minus };

inline constexpr std::string_view to_string(Branch b) { return b == Branch::plus ? "plus" : "minus"; }

/// (eps, kappa) of T = eps a+a + kappa(a^2 - a+^2) with theta and z = 2 kappa/eps.
struct MetricParams {
  double eps_metric = 0.0;
  double kappa = 0.0;
  double theta = 0.0;
  double z = 0.0;

  static MetricParams from_eps_kappa(double eps_metric, double kappa) {
    if (!std::isfinite(eps_metric) || !std::isfinite(kappa))
      fail(ErrorCode::invalid_parameter, "metric parameters must be finite");
    return {eps_metric, kappa, generator_theta(eps_metric, kappa), eps_metric != 0.0 ? 2.0 * kappa / eps_metric : 0.0};
  }

  static MetricParams from_eps_z(double eps_metric, double z) {
    if (!std::isfinite(eps_metric) || !std::isfinite(z))
      fail(ErrorCode::invalid_parameter, "metric parameters must be finite");
    const double kappa = z * eps_metric / 2.0;
    return {eps_metric, kappa, generator_theta(eps_metric, kappa), z};
  }

  QuadraticOperator generator() const {
    QuadraticOperator t;
    t[QBasis::number] = eps_metric;
    t[QBasis::a2] = kappa;
    t[QBasis::adag2] = -kappa;
    return t;
  }
};

/// sinh(t)/t with a series below 1e-4.
inline double sinhc(double t) {
  const double t2 = t * t;
  return std::abs(t) < 1e-4 ? 1.0 + t2 / 6.0 + t2 * t2 / 120.0 : std::sinh(t) / t;
}

/// tanh(t)^2 / t^2 with a series below 1e-4.
inline double tanh2c(double t) {
  const double t2 = t * t;
  if (std::abs(t) < 1e-4) return 1.0 - 2.0 * t2 / 3.0 + 17.0 * t2 * t2 / 45.0;
  const double r = std::tanh(t) / t;
  return r * r;
}

/// Adjoint action of metric generators. T is linear in (eps, kappa), so
/// ad_T = eps ad_N + kappa ad_S with both structure matrices extracted once.
class MetricAlgebra {
 public:
  explicit MetricAlgebra(FockDim reference = FockDim(32, 8)) {
    const AdjointMatrix n = adjoint_matrix(quadratic_basis(QBasis::number), reference);
    const AdjointMatrix s = adjoint_matrix(quadratic_basis(QBasis::a2) - quadratic_basis(QBasis::adag2), reference);
    ad_number_ = n.ad;
    ad_squeeze_ = s.ad;
    residual_ = std::max(n.residual, s.residual);
  }

  QMatrix ad(const MetricParams& mp) const { return mp.eps_metric * ad_number_ + mp.kappa * ad_squeeze_; }

  /// Theta B Theta^-1 (inverse = false) or Theta^-1 B Theta (inverse = true).
  QuadraticOperator conjugate(const MetricParams& mp, const QuadraticOperator& b, bool inverse = false) const {
    return conjugate_by_exp(inverse ? QMatrix(-ad(mp)) : ad(mp), b);
  }

  /// eta B eta^-1 with eta = Theta+ Theta. Theta+ = exp(T^T) and T^T flips the sign of kappa.
  QuadraticOperator eta_conjugate(const MetricParams& mp, const QuadraticOperator& b) const {
    const MetricParams transposed = MetricParams::from_eps_kappa(mp.eps_metric, -mp.kappa);
    return conjugate(transposed, conjugate(mp, b));
  }

  double structure_residual() const noexcept { return residual_; }

 private:
  QMatrix ad_number_;
  QMatrix ad_squeeze_;
  double residual_ = 0.0;
};

enum class CoefficientSource { printed_formula, oracle_extraction, closed_form };

inline constexpr std::string_view to_string(CoefficientSource s) {
  switch (s) {
    case CoefficientSource::printed_formula: return "printed_formula";
    case CoefficientSource::oracle_extraction: return "oracle_extraction";
    case CoefficientSource::closed_form: return "closed_form";
  }
  return "unknown";
}

/// h = f1 (a+a + 1/2) + f2 a^2 - f3 a+^2.
struct FCoefficients {
  double f1 = 0.0;
  double f2 = 0.0;
  double f3 = 0.0;
  double L_minus = 0.0;
  double L_plus = 0.0;
  CoefficientSource source = CoefficientSource::oracle_extraction;
};

/// f-coefficients exactly as printed (missing sinh factors included).
inline FCoefficients printed_coefficients(const MetricParams& mp, const ModelParams& params) {
  const double th = mp.theta, eps = mp.eps_metric, k = mp.kappa, w = params.omega, al = params.alpha;
  FCoefficients f;
  f.source = CoefficientSource::printed_formula;
  if (th == 0.0) {
    f.f1 = w;
    f.f2 = f.f3 = al;
    f.L_minus = f.L_plus = 1.0;
    return f;
  }
  const double c = std::cosh(th), s = std::sinh(th);
  f.L_minus = c - eps / th;
  f.L_plus = c + eps / th;
  f.f1 = w * c * c - (w * (eps * eps - 4.0 * k * k) + 8.0 * k * eps * al) / (th * th) * s * s;
  f.f2 = 2.0 * k * w / th * f.L_minus * s + al * f.L_minus * f.L_minus - 4.0 * k * k * al / (th * th) * s;
  f.f3 = -2.0 * k * w / th * f.L_plus * s + al * f.L_plus * f.L_plus - 4.0 * k * k * al / (th * th) * s;
  return f;
}

/// Closed form from the Bogoliubov maps: with p = c - eps s/theta, r = c + eps s/theta
/// and q = 2 kappa s/theta, f1 = w(rp + q^2) + 2 al q(p - r), f2 = w pq + al(p^2 - q^2),
/// f3 = -w rq + al(r^2 - q^2). L_minus, L_plus carry p and r.
inline FCoefficients closed_form_coefficients(const MetricParams& mp, const ModelParams& params) {
  const double sc = sinhc(mp.theta), c = std::cosh(mp.theta);
  const double p = c - mp.eps_metric * sc, r = c + mp.eps_metric * sc, q = 2.0 * mp.kappa * sc;
  const double w = params.omega, al = params.alpha;
  FCoefficients f;
  f.source = CoefficientSource::closed_form;
  f.f1 = w * (r * p + q * q) + 2.0 * al * q * (p - r);
  f.f2 = w * p * q + al * (p * p - q * q);
  f.f3 = -w * r * q + al * (r * r - q * q);
  f.L_minus = p;
  f.L_plus = r;
  return f;
}

/// Coefficients of Theta H Theta^-1 from the adjoint-action oracle.
inline FCoefficients oracle_coefficients(const MetricParams& mp, const ModelParams& params, const MetricAlgebra& alg) {
  const QuadraticOperator h = alg.conjugate(mp, model_quadratic(params));
  const QuadraticOperator a = alg.conjugate(mp, quadratic_basis(QBasis::a));
  const QuadraticOperator ad = alg.conjugate(mp, quadratic_basis(QBasis::adag));
  FCoefficients f;
  f.source = CoefficientSource::oracle_extraction;
  f.f1 = h[QBasis::number].real();
  f.f2 = h[QBasis::a2].real();
  f.f3 = -h[QBasis::adag2].real();
  f.L_minus = a[QBasis::a].real();
  f.L_plus = ad[QBasis::adag].real();
  return f;
}

/// g = tanh^2(theta)/theta^2 - alpha / (alpha(4 kappa^2 - eps^2) + 2 kappa omega eps).
inline double hermiticity_condition_residual(const MetricParams& mp, const ModelParams& params) {
  params.validate();
  const double e = mp.eps_metric, k = mp.kappa;
  const double den = params.alpha * (4.0 * k * k - e * e) + 2.0 * k * params.omega * e;
  const double scale = params.alpha * params.alpha * (4.0 * k * k + e * e) + std::abs(2.0 * k * params.omega * e);
  if (den == 0.0 || std::abs(den) <= 1e-300 + 64.0 * std::numeric_limits<double>::epsilon() * scale)
    fail(ErrorCode::condition_singular, "Hermiticity condition denominator vanishes");
  return tanh2c(mp.theta) - params.alpha / den;
}

/// Root of tanh^2(theta) = alpha(1+z^2)/(omega z - alpha(1-z^2)), the condition rewritten with
/// theta^2 = eps^2 (1+z^2). Returns the positive eps or nullopt when no real root exists.
inline std::optional<double> derived_eps_closed_form(double z, const ModelParams& params) {
  const double den = params.omega * z - params.alpha * (1.0 - z * z);
  if (den <= 0.0) return std::nullopt;
  const double t2 = params.alpha * (1.0 + z * z) / den;
  if (t2 < 0.0 || t2 >= 1.0) return std::nullopt;
  return std::atanh(std::sqrt(t2)) / std::sqrt(1.0 + z * z);
}

/// The printed closed form for eps(z), evaluated in complex arithmetic (plus sign).
inline cplx printed_eps_closed_form(double z, const ModelParams& params) {
  const cplx one_minus = 1.0 - z * z;
  // artanh(u)/sqrt(1-z^2) -> sqrt(alpha/(omega z - alpha(1-z^2))) as z -> 1
  if (std::abs(one_minus) < 1e-12) return std::sqrt(cplx(params.alpha / (params.omega * z)));
  const cplx ratio = params.alpha * one_minus / (params.omega * z - params.alpha * one_minus);
  return std::atanh(std::sqrt(ratio)) / std::sqrt(one_minus);
}

namespace detail {

/// f2 + f3 along the ray kappa = z eps / 2, evaluated on the algebra oracle.
inline double hermiticity_scalar(double eps, double z, const ModelParams& params, const MetricAlgebra& alg) {
  const FCoefficients f = oracle_coefficients(MetricParams::from_eps_z(eps, z), params, alg);
  return f.f2 + f.f3;
}

}  // namespace detail

/// Finds eps with f2 + f3 = 0 at fixed z. The bracket starts below the derived
/// closed-form root, grows geometrically up to theta = 20, then bisection runs to
/// adjacent doubles. The minus branch mirrors the search to negative eps.
inline MetricParams solve_eps(double z, const ModelParams& params, Branch branch, const MetricAlgebra& alg) {
  params.validate();
  if (!std::isfinite(z)) fail(ErrorCode::invalid_parameter, "z must be finite");
  if (params.alpha == 0.0) return MetricParams::from_eps_z(0.0, z);
  if (z == 0.0) fail(ErrorCode::no_real_metric, "z = 0 with alpha != 0 admits no real metric");

  const double sign = branch == Branch::plus ? 1.0 : -1.0;
  const double eps_max = 20.0 / std::sqrt(1.0 + z * z);
  auto g = [&](double e) { return detail::hermiticity_scalar(sign * e, z, params, alg); };

  const std::optional<double> seed = derived_eps_closed_form(z, params);
  double lo = 0.0, hi = seed ? 0.5 * *seed : 1e-3 * eps_max;
  double g_lo = 2.0 * params.alpha, g_hi = g(hi);
  while (std::signbit(g_hi) == std::signbit(g_lo)) {
    lo = hi;
    g_lo = g_hi;
    if (hi >= eps_max)
      fail(ErrorCode::no_real_metric, "Hermiticity condition has no real root for z = " + std::to_string(z));
    hi = std::min(2.0 * hi, eps_max);
    g_hi = g(hi);
  }
  for (int it = 0; it < 200; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    const double g_mid = g(mid);
    if (g_mid == 0.0) {
      lo = hi = mid;
      break;
    }
    if (std::signbit(g_mid) == std::signbit(g_lo)) {
      lo = mid;
      g_lo = g_mid;
    } else {
      hi = mid;
      g_hi = g_mid;
    }
  }
  const double root = std::abs(g_lo) <= std::abs(g_hi) ? lo : hi;
  return MetricParams::from_eps_z(sign * root, z);
}

inline MetricParams solve_eps(double z, const ModelParams& params, Branch branch = Branch::plus) {
  return solve_eps(z, params, branch, MetricAlgebra());
}

struct MetricPair {
  FockOperator Theta;
  FockOperator eta;
  double eta_min_eigenvalue = 0.0;  // 1 / sigma_max(Theta^-1)^2
  double theta_condition = 0.0;     // sigma_max / sigma_min of Theta
};

/// Theta = exp(T) and eta = Theta+ Theta. The smallest eigenvalue of eta is taken
/// from the singular values of exp(-T), since eta itself is far too ill-conditioned
/// for a direct eigensolve at production truncations.
inline MetricPair build_metric_pair(const MetricParams& mp, FockDim dim) {
  const FockOperator t = build_T(mp.eps_metric, mp.kappa, dim);
  FockOperator theta(dim, mat_exp(t.matrix()));
  const CMatrix prod = theta.matrix().adjoint() * theta.matrix();
  FockOperator eta(dim, 0.5 * (prod + prod.adjoint()));

  const CMatrix inv = mat_exp((-1.0 * t).matrix());
  const Eigen::JacobiSVD<CMatrix> svd_inv(inv);
  const Eigen::JacobiSVD<CMatrix> svd(theta.matrix());
  const double smax_inv = svd_inv.singularValues()(0);
  MetricPair out{std::move(theta), std::move(eta), 1.0 / (smax_inv * smax_inv), 0.0};
  out.theta_condition = svd.singularValues()(0) * smax_inv;
  return out;
}

/// Theta B Theta^-1 materialized: the adjoint-algebra result written out as an N x N matrix.
inline FockOperator conjugated_matrix(const MetricParams& mp, const QuadraticOperator& b, FockDim dim,
                                      const MetricAlgebra& alg, bool inverse = false) {
  return alg.conjugate(mp, b, inverse).materialize(dim);
}

/// ||eta O eta^-1 - O+|| / ||O+|| on the interior block, with a linear solve against eta.
inline double observable_defect(const FockOperator& o, const FockOperator& eta) {
  const FockOperator conj = similarity_transform(eta, o);
  return relative_distance(conj, o.adjoint());
}

/// Same measure with the conjugation by eta = Theta+ Theta done in the algebra.
inline double observable_defect(const QuadraticOperator& o, const MetricParams& mp, FockDim dim,
                                const MetricAlgebra& alg) {
  const FockOperator lhs = alg.eta_conjugate(mp, o).materialize(dim);
  return relative_distance(lhs, o.adjoint().materialize(dim));
}

struct BogoliubovDefect {
  double defect_a = 0.0;
  double defect_adag = 0.0;
};

/// Distance between Theta a Theta^-1 (resp. a+) and the printed linear maps.
inline BogoliubovDefect bogoliubov_defect(const MetricParams& mp, FockDim dim, const MetricAlgebra& alg) {
  const double sc = sinhc(mp.theta), c = std::cosh(mp.theta);
  QuadraticOperator expect_a, expect_adag;
  expect_a[QBasis::a] = c - mp.eps_metric * sc;
  expect_a[QBasis::adag] = 2.0 * mp.kappa * sc;
  expect_adag[QBasis::adag] = c + mp.eps_metric * sc;
  expect_adag[QBasis::a] = 2.0 * mp.kappa * sc;
  const FockOperator got_a = conjugated_matrix(mp, quadratic_basis(QBasis::a), dim, alg);
  const FockOperator got_adag = conjugated_matrix(mp, quadratic_basis(QBasis::adag), dim, alg);
  return {relative_distance(got_a, expect_a.materialize(dim)), relative_distance(got_adag, expect_adag.materialize(dim))};
}

inline BogoliubovDefect bogoliubov_defect(const MetricParams& mp, FockDim dim) {
  return bogoliubov_defect(mp, dim, MetricAlgebra());
}

struct MetricDefects {
  double hermiticity_of_h = 0.0;
  double pseudo_hermiticity_of_eta = 0.0;
  double bogoliubov = 0.0;
  double condition_residual = 0.0;
};

struct MetricSolution {
  MetricParams params;
  Branch branch = Branch::plus;
  FockOperator Theta;
  FockOperator eta;
  FockOperator h;
  MetricDefects defects;
  double eta_min_eigenvalue = 0.0;
  double eta_hermiticity = 0.0;  // ||eta - eta+|| / (2||eta||)
};

inline MetricSolution solve_metric(double z, const ModelParams& params, FockDim dim, Branch branch,
                                   const MetricAlgebra& alg) {
  const MetricParams mp = solve_eps(z, params, branch, alg);
  MetricPair pair = build_metric_pair(mp, dim);
  FockOperator h = conjugated_matrix(mp, model_quadratic(params), dim, alg);

  MetricDefects d;
  d.hermiticity_of_h = hermiticity_defect(h);
  d.pseudo_hermiticity_of_eta = observable_defect(model_quadratic(params), mp, dim, alg);
  const BogoliubovDefect b = bogoliubov_defect(mp, dim, alg);
  d.bogoliubov = std::max(b.defect_a, b.defect_adag);
  d.condition_residual = params.alpha == 0.0 ? 0.0 : std::abs(hermiticity_condition_residual(mp, params));

  const double eta_herm = (pair.eta.matrix() - pair.eta.matrix().adjoint()).norm() / (2.0 * pair.eta.matrix().norm());
  return {mp, branch, std::move(pair.Theta), std::move(pair.eta), std::move(h), d, pair.eta_min_eigenvalue, eta_herm};
}

inline MetricSolution solve_metric(double z, const ModelParams& params, FockDim dim, Branch branch = Branch::plus) {
  return solve_metric(z, params, dim, branch, MetricAlgebra());
}

struct HermitianEquivalent {
  FockOperator h;
  FCoefficients oracle;  // from matrix elements of h
  FCoefficients printed;   // printed formulas at the same (eps, kappa)
  MetricParams params;
};

/// h = Theta H Theta^-1 at the solved point with f1 = 2 h[0,0], f2 = h[0,2]/sqrt2, f3 = -h[2,0]/sqrt2.
inline HermitianEquivalent hermitian_equivalent_at(const MetricParams& mp, const ModelParams& params, FockDim dim,
                                                   const MetricAlgebra& alg) {
  if (dim.n_levels() < 3) fail(ErrorCode::invalid_parameter, "coefficient extraction needs at least 3 levels");
  FockOperator h = conjugated_matrix(mp, model_quadratic(params), dim, alg);
  FCoefficients f = oracle_coefficients(mp, params, alg);
  f.f1 = 2.0 * h(0, 0).real();
  f.f2 = h(0, 2).real() / std::sqrt(2.0);
  f.f3 = -h(2, 0).real() / std::sqrt(2.0);
  return {std::move(h), f, printed_coefficients(mp, params), mp};
}

inline HermitianEquivalent hermitian_equivalent(double z, const ModelParams& params, FockDim dim,
                                                const MetricAlgebra& alg) {
  return hermitian_equivalent_at(solve_eps(z, params, Branch::plus, alg), params, dim, alg);
}

inline HermitianEquivalent hermitian_equivalent(double z, const ModelParams& params, FockDim dim) {
  return hermitian_equivalent(z, params, dim, MetricAlgebra());
}

/// sigma(z), U, V and lambda1, lambda2 as printed; complex because the radicand of sigma
/// is negative for most physical inputs.
struct PrintedLambda {
  cplx sigma, U, V, lambda1, lambda2;
};

inline PrintedLambda printed_lambda(double z, const ModelParams& params) {
  const double w = params.omega, al = params.alpha;
  const cplx sa = std::sqrt(cplx(al));
  const cplx d = z * w - 2.0 * al * (1.0 - z * z);
  PrintedLambda p;
  if (z == 0.0) {
    p.lambda1 = w / 2.0 * (w - 2.0 * al);
    p.lambda2 = (w - 2.0 * al) / (2.0 * w);
    p.sigma = 0.0;
    p.U = w + 2.0 * al;
    p.V = 0.0;
    return p;
  }
  p.sigma = z * std::sqrt(cplx(al * (1.0 - z * z) - z * w)) / d;
  p.U = w - 4.0 * al * al / d;
  p.V = z * w * (1.0 - al) / d + (w / 2.0 - al / z) * sa * p.sigma;
  p.lambda1 = w / 2.0 * (p.U * (1.0 + p.sigma) + p.V * (2.0 * z * (w + al * z) / d + 2.0 * sa * p.sigma));
  p.lambda2 = 1.0 / (2.0 * w) * (p.U * (1.0 - sa * p.sigma) + p.V * (-4.0 * al * z / d + 2.0 * sa * p.sigma / z));
  return p;
}

struct LambdaReport {
  cplx lambda1_printed, lambda2_printed, product_printed;
  PrintedLambda printed_terms;
  std::optional<double> lambda1_oracle, lambda2_oracle, product_oracle, fit_residual;
  std::optional<ErrorCode> oracle_error;
};

/// Least-squares fit of h onto {p^2, x^2} over the interior block.
inline void fit_lambdas(const FockOperator& h, double omega, LambdaReport& out) {
  const FockDim dim = h.dim();
  const auto [x, p] = canonical_pair(omega, dim);
  const FockOperator x2 = x * x, p2 = p * p;
  const CMatrix bp = p2.interior(), bx = x2.interior(), t = h.interior();
  Eigen::Matrix2cd gram;
  Eigen::Vector2cd rhs;
  gram << bp.cwiseProduct(bp.conjugate()).sum(), bx.cwiseProduct(bp.conjugate()).sum(),
      bp.cwiseProduct(bx.conjugate()).sum(), bx.cwiseProduct(bx.conjugate()).sum();
  rhs << t.cwiseProduct(bp.conjugate()).sum(), t.cwiseProduct(bx.conjugate()).sum();
  const Eigen::JacobiSVD<Eigen::Matrix2cd> svd(gram);
  const auto sv = svd.singularValues();
  if (!(sv(1) > 1e-12 * sv(0))) fail(ErrorCode::fit_failure, "p^2, x^2 fit is ill-conditioned");
  const Eigen::Vector2cd lam = gram.fullPivLu().solve(rhs);
  const CMatrix fit = lam(0) * bp + lam(1) * bx;
  out.lambda1_oracle = lam(0).real();
  out.lambda2_oracle = lam(1).real();
  out.product_oracle = 4.0 * lam(0).real() * lam(1).real();
  out.fit_residual = (t - fit).norm() / t.norm();
}

inline LambdaReport lambda_report(double z, const ModelParams& params, FockDim dim, const MetricAlgebra& alg) {
  params.validate();
  LambdaReport r;
  r.printed_terms = printed_lambda(z, params);
  r.lambda1_printed = r.printed_terms.lambda1;
  r.lambda2_printed = r.printed_terms.lambda2;
  r.product_printed = 4.0 * r.lambda1_printed * r.lambda2_printed;
  try {
    const MetricParams mp = solve_eps(z, params, Branch::plus, alg);
    fit_lambdas(conjugated_matrix(mp, model_quadratic(params), dim, alg), params.omega, r);
  } catch (const Error& e) {
    if (e.code() != ErrorCode::no_real_metric) throw;
    r.oracle_error = e.code();
  }
  return r;
}

inline LambdaReport lambda_report(double z, const ModelParams& params, FockDim dim) {
  return lambda_report(z, params, dim, MetricAlgebra());
}

/// exp(ln(base) M) with base = (1+t)/(1-t) and M = (a+a + (z/2)(a^2 - a+^2)) / (2 sqrt(1-z^2)),
/// compared against Theta at the solver's root. Real arithmetic only.
inline double theta_closed_form_defect(double z, const ModelParams& params, FockDim dim, const MetricAlgebra& alg) {
  params.validate();
  if (std::abs(z) == 1.0) fail(ErrorCode::closed_form_singular, "closed-form Theta has a pole at |z| = 1");
  if (params.alpha == 0.0) return 0.0;
  const double one_minus = 1.0 - z * z;
  const double den = params.omega * z - params.alpha * one_minus;
  const double radicand = params.alpha * one_minus / den;
  if (one_minus < 0.0 || !(radicand >= 0.0)) fail(ErrorCode::closed_form_domain, "closed-form Theta needs real square roots");
  const double t = std::sqrt(radicand);
  if (t >= 1.0) fail(ErrorCode::closed_form_domain, "closed-form Theta base is not positive");
  const double log_base = 2.0 * std::atanh(t);
  const double scale = log_base / (2.0 * std::sqrt(one_minus));
  const FockOperator theta27(dim, mat_exp(build_T(scale, scale * z / 2.0, dim).matrix()));
  const MetricParams mp = solve_eps(z, params, Branch::plus, alg);
  const FockOperator theta(dim, mat_exp(build_T(mp.eps_metric, mp.kappa, dim).matrix()));
  return relative_distance(theta27, theta);
}

struct XPTransformDefect {
  double defect_x = 0.0;           // Theta^-1 x Theta vs printed x map
  double defect_p = 0.0;           // Theta^-1 p Theta vs printed p map
  double defect_x_reversed = 0.0;  // Theta x Theta^-1 vs printed x map
  double defect_p_reversed = 0.0;  // Theta p Theta^-1 vs printed p map
};

/// Printed maps: x -> (c + 2k s/th) x - i (eps s/(w th)) p and p -> (c - 2k s/th) p + i (eps w s/th) x.
inline XPTransformDefect xp_transform_defect(const MetricParams& mp, const ModelParams& params, FockDim dim,
                                             const MetricAlgebra& alg) {
  params.validate();
  const double w = params.omega, sc = sinhc(mp.theta), c = std::cosh(mp.theta);
  const QuadraticOperator x = position_quadratic(w), p = momentum_quadratic(w);
  const QuadraticOperator px = (c + 2.0 * mp.kappa * sc) * x - (I_unit * (mp.eps_metric * sc / w)) * p;
  const QuadraticOperator pp = (c - 2.0 * mp.kappa * sc) * p + (I_unit * (mp.eps_metric * w * sc)) * x;
  const FockOperator px_m = px.materialize(dim), pp_m = pp.materialize(dim);
  XPTransformDefect d;
  d.defect_x = relative_distance(conjugated_matrix(mp, x, dim, alg, true), px_m);
  d.defect_p = relative_distance(conjugated_matrix(mp, p, dim, alg, true), pp_m);
  d.defect_x_reversed = relative_distance(conjugated_matrix(mp, x, dim, alg, false), px_m);
  d.defect_p_reversed = relative_distance(conjugated_matrix(mp, p, dim, alg, false), pp_m);
  return d;
}

}  // namespace quasiherm
