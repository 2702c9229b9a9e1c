#pragma once

#include <array>
#include <cmath>
#include <functional>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "quasiherm/grid.hpp"
#include "quasiherm/io.hpp"
#include "quasiherm/metric.hpp"
#include "quasiherm/rosen_morse.hpp"

namespace quasiherm {

inline constexpr std::string_view library_version = "1.0.0";

enum class OutputFormat { json, csv };

struct RunConfig {
  ModelParams model{3.0, 1.0};
  double z = 1.0;
  FockDim dim{128, 8};
  Grid grid{-12.0, 12.0, 2048};
  double delta = 10.0;
  double eps_energy = 5.0;
  int n = 1;
  Branch branch = Branch::plus;
  std::string out;
  OutputFormat format = OutputFormat::json;

  void validate() const {
    model.validate();
    if (!std::isfinite(z) || !std::isfinite(delta) || !std::isfinite(eps_energy))
      fail(ErrorCode::invalid_parameter, "z, delta and eps_energy must be finite");
    if (n < 0) fail(ErrorCode::invalid_parameter, "n must be non-negative");
  }
};

/// Grid used for the gauge-map entries. The cosh^2 x coefficient of the position form
/// amplifies rounding like e^{2|x|}, so these checks run on [-6, 6].
inline Grid gauge_grid() { return Grid(-6.0, 6.0, 1024, 8); }

enum class AuditStatus { pass, flag, info };

inline constexpr std::string_view to_string(AuditStatus s) {
  switch (s) {
    case AuditStatus::pass: return "pass";
    case AuditStatus::flag: return "flag";
    case AuditStatus::info: return "info";
  }
  return "unknown";
}

struct AuditEntry {
  std::string equation_id;
  std::string description;
  double residual = std::numeric_limits<double>::quiet_NaN();
  std::optional<double> threshold;
  AuditStatus status = AuditStatus::info;
};

struct AuditReport {
  std::vector<std::pair<std::string, std::string>> environment;  // key, JSON literal
  std::vector<AuditEntry> entries;

  const AuditEntry* find(std::string_view id) const {
    for (const auto& e : entries)
      if (e.equation_id == id) return &e;
    return nullptr;
  }

  std::string to_json() const {
    auto num = [](double v) { return std::isfinite(v) ? format_double(v) : std::string("null"); };
    std::string out = "{\n  \"environment\": {\n";
    for (std::size_t i = 0; i < environment.size(); ++i)
      out += "    " + nlohmann::json(environment[i].first).dump() + ": " + environment[i].second +
             (i + 1 < environment.size() ? ",\n" : "\n");
    out += "  },\n  \"entries\": [\n";
    for (std::size_t i = 0; i < entries.size(); ++i) {
      const AuditEntry& e = entries[i];
      out += "    {\"equation_id\": " + nlohmann::json(e.equation_id).dump() +
             ", \"description\": " + nlohmann::json(e.description).dump() + ", \"residual\": " + num(e.residual) +
             ", \"threshold\": " + (e.threshold ? num(*e.threshold) : std::string("null")) + ", \"status\": \"" +
             std::string(to_string(e.status)) + "\"}" + (i + 1 < entries.size() ? ",\n" : "\n");
    }
    out += "  ]\n}\n";
    return out;
  }

  std::string to_csv() const {
    std::string out = "equation_id,residual,threshold,status,description\n";
    for (const auto& e : entries) {
      std::string desc = e.description;
      for (char& c : desc)
        if (c == '"') c = '\'';
      out += e.equation_id + "," + (std::isfinite(e.residual) ? format_double(e.residual) : "") + "," +
             (e.threshold ? format_double(*e.threshold) : "") + "," + std::string(to_string(e.status)) + ",\"" + desc +
             "\"\n";
    }
    return out;
  }
};

/// The equation ids every report must carry, in order.
inline std::vector<std::string> audit_equation_ids() {
  std::vector<std::string> ids;
  for (int k = 1; k <= 55; ++k) ids.push_back("Eq" + std::to_string(k));
  return ids;
}

namespace detail {

inline std::string json_num(double v) { return std::isfinite(v) ? format_double(v) : "null"; }

/// Real RM-II bound state of -Phi'' + [C - s(s+1) sech^2 - 2 d tanh + 1 - 2 al/w] Phi = 0, the reduced
/// equation that the position form actually produces for A = cosh x, B = d cosh x. Returns (eps, Phi).
inline std::pair<double, CVector> consistent_chain_state(const ModelParams& m, double d, const Grid& g) {
  const double w = m.omega, al = m.alpha;
  const double rhs = d * d * m.spacing_squared() / (w * w) + 1.0 - 2.0 * al / w;
  const double disc = rhs * rhs - 4.0 * d * d;
  if (rhs <= 0.0 || disc < 0.0) fail(ErrorCode::complex_susy_a, "no real bound state for the chain check");
  const double s = std::sqrt((rhs + std::sqrt(disc)) / 2.0);
  const double eps = w * (s * (s + 1.0) + 0.5 + al / w);
  const cplx c1 = s - d / s, c2 = s + d / s;
  if (c1.real() <= 0.0) fail(ErrorCode::zero_norm, "chain check state is not normalizable");
  CVector phi = sample_complex(g, [&](double x) {
    return std::exp(0.5 * c1 * log_one_minus_tanh(x) + 0.5 * c2 * log_one_plus_tanh(x));
  });
  return {eps, std::move(phi)};
}

/// Hermite probe symmetry: max |<f_j, h f_k> - <h f_j, f_k>| / max |<f_j, h f_k>|.
/// Probes must vanish at the ends well below the cosh^2 growth of h, or the
/// truncated sums pick up boundary terms.
/// First delta in a fixed list for which the chain check has a real normalizable state.
inline std::optional<double> chain_delta(const ModelParams& m) {
  for (double d : {1.0, 2.0, 0.1, 4.0}) {
    const double rhs = d * d * m.spacing_squared() / (m.omega * m.omega) + 1.0 - 2.0 * m.alpha / m.omega;
    const double disc = rhs * rhs - 4.0 * d * d;
    if (rhs > 0.0 && disc >= 0.0) {
      const double s = std::sqrt((rhs + std::sqrt(disc)) / 2.0);
      if (s - d / s > 0.0) return d;
    }
  }
  return std::nullopt;
}

inline double probe_symmetry(const GridOperator& h, int margin, double scale = 0.75) {
  const auto probes = hermite_probes(h.grid(), scale);
  const Eigen::Index n = h.grid().size() - 2 * margin;
  double num = 0.0, den = 0.0;
  for (const auto& fj : probes)
    for (const auto& fk : probes) {
      const cplx l = fj.segment(margin, n).dot(h.apply(fk).segment(margin, n));
      const cplx r = h.apply(fj).segment(margin, n).dot(fk.segment(margin, n));
      num = std::max(num, std::abs(l - r));
      den = std::max(den, std::abs(l));
    }
  return den == 0.0 ? 0.0 : num / den;
}

inline double max_rel(const CVector& got, const CVector& want) {
  const double scale = want.cwiseAbs().maxCoeff();
  return (got - want).cwiseAbs().maxCoeff() / (scale == 0.0 ? 1.0 : scale);
}

}  // namespace detail

/// Runs every verification and collects one entry per equation id. Scientific failures
/// (infeasible metric, complex a, poles) become flag entries; invalid input throws.
inline AuditReport run_audit(const RunConfig& cfg) {
  cfg.validate();
  const ModelParams& m = cfg.model;
  const double w = m.omega, al = m.alpha;
  const FockDim dim = cfg.dim;
  const MetricAlgebra alg;

  AuditReport rep;
  auto add = [&](std::string id, std::string desc, std::optional<double> threshold, const std::function<double()>& fn) {
    AuditEntry e;
    e.equation_id = std::move(id);
    e.description = std::move(desc);
    e.threshold = threshold;
    try {
      e.residual = fn();
      if (threshold)
        e.status = (std::isfinite(e.residual) && e.residual < *threshold) ? AuditStatus::pass : AuditStatus::flag;
      else
        e.status = AuditStatus::info;
    } catch (const Error& err) {
      if (err.code() == ErrorCode::invalid_parameter) throw;
      e.residual = std::numeric_limits<double>::quiet_NaN();
      e.status = AuditStatus::flag;
      e.description += " [" + std::string(err.what()) + "]";
    }
    rep.entries.push_back(std::move(e));
  };

  std::optional<MetricParams> mp;
  std::string metric_error;
  try {
    mp = solve_eps(cfg.z, m, cfg.branch, alg);
  } catch (const Error& e) {
    if (e.code() != ErrorCode::no_real_metric) throw;
    metric_error = e.what();
  }
  auto need = [&]() -> const MetricParams& {
    if (!mp) fail(ErrorCode::no_real_metric, metric_error.substr(metric_error.find(": ") + 2));
    return *mp;
  };
  const QuadraticOperator hq = model_quadratic(m);
  auto oracle = [&] { return oracle_coefficients(need(), m, alg); };
  auto printed = [&] { return printed_coefficients(need(), m); };
  std::optional<LambdaReport> lam;
  auto lambdas = [&]() -> const LambdaReport& {
    if (!lam) lam = lambda_report(cfg.z, m, dim, alg);
    return *lam;
  };
  auto require_oracle = [&](const LambdaReport& r) {
    if (!r.lambda1_oracle) fail(ErrorCode::no_real_metric, "no oracle lambdas at this z");
  };

  // Metric of the oscillator.
  add("Eq1", "eta-pseudo-Hermiticity of H: ||eta H eta^-1 - H+|| / ||H+||, eta = Theta+ Theta", 1e-8,
      [&] { return observable_defect(hq, need(), dim, alg); });
  add("Eq2", "observable test for O = Theta^-1 x Theta: ||eta O eta^-1 - O+|| / ||O+||", 1e-8, [&] {
    const QuadraticOperator o = alg.conjugate(need(), position_quadratic(w), true);
    return observable_defect(o, need(), dim, alg);
  });
  add("Eq3", "Hermiticity defect of h = Theta H Theta^-1 (Theta = sqrt(eta) holds only when kappa = 0)", 1e-8,
      [&] { return hermiticity_defect(conjugated_matrix(need(), hq, dim, alg)); });
  add("Eq4", "PT-symmetry defect of H", 1e-14, [&] { return pt_symmetry_defect(build_hamiltonian(m, dim)); });
  add("Eq5", "reassembly sqrt(w/2) x + i p / sqrt(2w) = a", 1e-14, [&] {
    const auto [x, p] = canonical_pair(w, dim);
    const FockOperator re = std::sqrt(w / 2.0) * x + (I_unit / std::sqrt(2.0 * w)) * p;
    return relative_distance(re, ladder_ops(dim).first);
  });
  add("Eq6", "Theta = exp T: exp(ad_T) exp(-ad_T) = 1 on the quadratic algebra", 1e-10, [&] {
    const QMatrix a = alg.ad(need());
    return (mat_exp(a) * mat_exp(QMatrix(-a)) - QMatrix::Identity()).norm();
  });
  add("Eq7", "generator: |theta^2 - eps^2 - 4 kappa^2| plus PT defect of T", 1e-14, [&] {
    const MetricParams& p = need();
    return std::abs(p.theta * p.theta - p.eps_metric * p.eps_metric - 4.0 * p.kappa * p.kappa) +
           pt_symmetry_defect(build_T(p.eps_metric, p.kappa, dim));
  });
  add("Eq8", "Bogoliubov map of a", 1e-8, [&] { return bogoliubov_defect(need(), dim, alg).defect_a; });
  add("Eq9", "Bogoliubov map of a+", 1e-8, [&] { return bogoliubov_defect(need(), dim, alg).defect_adag; });
  add("Eq10", "Hermiticity statement f2 = -f3 on oracle coefficients: |f2 + f3|", 1e-9, [&] {
    const FCoefficients f = oracle();
    return std::abs(f.f2 + f.f3);
  });
  add("Eq11", "Theta a+a Theta^-1 against (Theta a+ Theta^-1)(Theta a Theta^-1)", 1e-10, [&] {
    const FockOperator n = conjugated_matrix(need(), quadratic_basis(QBasis::number), dim, alg);
    const FockOperator ad = conjugated_matrix(need(), quadratic_basis(QBasis::adag), dim, alg);
    const FockOperator a = conjugated_matrix(need(), quadratic_basis(QBasis::a), dim, alg);
    return relative_distance(ad * a, n);
  });
  add("Eq12", "printed f1 against oracle f1 (relative)", 1e-9, [&] {
    const double o = oracle().f1;
    return std::abs(printed().f1 - o) / std::abs(o);
  });
  add("Eq13", "printed-vs-oracle delta |f2_printed - f2_oracle|", std::nullopt,
      [&] { return std::abs(printed().f2 - oracle().f2); });
  add("Eq14", "printed-vs-oracle delta |f3_printed - f3_oracle|", std::nullopt,
      [&] { return std::abs(printed().f3 - oracle().f3); });
  add("Eq15", "printed-vs-oracle delta |L_minus - (cosh - eps sinh/theta)|", std::nullopt,
      [&] { return std::abs(printed().L_minus - oracle().L_minus); });
  add("Eq16", "printed-vs-oracle delta |L_plus - (cosh + eps sinh/theta)|", std::nullopt,
      [&] { return std::abs(printed().L_plus - oracle().L_plus); });
  add("Eq17", "Hermiticity condition residual at the solved root", 1e-12,
      [&] { return al == 0.0 ? std::abs(need().eps_metric) : std::abs(hermiticity_condition_residual(need(), m)); });
  {
    const cplx e18 = printed_eps_closed_form(cfg.z, m);
    add("Eq18",
        "printed-vs-oracle delta |eps_printed - eps_root|; printed eps = " + format_double(e18.real()) + " + " +
            format_double(e18.imag()) + "i",
        std::nullopt, [&] { return std::abs(e18 - std::abs(need().eps_metric)); });
  }
  add("Eq19", "printed x map against Theta^-1 x Theta", std::nullopt, [&] {
    const XPTransformDefect d = xp_transform_defect(need(), m, dim, alg);
    return d.defect_x;
  });
  add("Eq20", "printed p map against Theta^-1 p Theta (left side read as p)", std::nullopt, [&] {
    const XPTransformDefect d = xp_transform_defect(need(), m, dim, alg);
    return d.defect_p;
  });
  add("Eq21", "fit residual of h onto lambda1 p^2 + lambda2 x^2", 1e-8, [&] {
    const LambdaReport& r = lambdas();
    require_oracle(r);
    return *r.fit_residual;
  });
  add("Eq22", "printed-vs-oracle delta |lambda1_printed - lambda1_oracle|", std::nullopt, [&] {
    const LambdaReport& r = lambdas();
    require_oracle(r);
    return std::abs(r.lambda1_printed - *r.lambda1_oracle);
  });
  add("Eq23", "printed-vs-oracle delta |lambda2_printed - lambda2_oracle|", std::nullopt, [&] {
    const LambdaReport& r = lambdas();
    require_oracle(r);
    return std::abs(r.lambda2_printed - *r.lambda2_oracle);
  });
  add("Eq24", "printed-vs-oracle delta |4 lambda1 lambda2| through sigma(z)", std::nullopt, [&] {
    const LambdaReport& r = lambdas();
    require_oracle(r);
    return std::abs(r.product_printed - *r.product_oracle);
  });
  // U and V that would reproduce the oracle lambdas given the printed sigma.
  auto implied_uv = [&]() -> std::pair<cplx, cplx> {
    const LambdaReport& r = lambdas();
    require_oracle(r);
    const double z = cfg.z;
    const cplx s = r.printed_terms.sigma, sa = std::sqrt(cplx(al));
    const cplx d = z * w - 2.0 * al * (1.0 - z * z);
    Eigen::Matrix2cd mtx;
    mtx << w / 2.0 * (1.0 + s), w / 2.0 * (2.0 * z * (w + al * z) / d + 2.0 * sa * s), (1.0 - sa * s) / (2.0 * w),
        (-4.0 * al * z / d + 2.0 * sa * s / z) / (2.0 * w);
    const Eigen::Vector2cd uv = mtx.fullPivLu().solve(Eigen::Vector2cd(*r.lambda1_oracle, *r.lambda2_oracle));
    return {uv(0), uv(1)};
  };
  add("Eq25", "printed-vs-oracle delta |U - U_implied|", std::nullopt,
      [&] { return std::abs(lambdas().printed_terms.U - implied_uv().first); });
  add("Eq26", "printed-vs-oracle delta |V - V_implied|", std::nullopt,
      [&] { return std::abs(lambdas().printed_terms.V - implied_uv().second); });
  {
    std::string where = "config z";
    double value = std::numeric_limits<double>::quiet_NaN();
    try {
      value = theta_closed_form_defect(cfg.z, m, dim, alg);
    } catch (const Error& e) {
      if (e.code() == ErrorCode::invalid_parameter) throw;
      where = std::string(to_string(e.code())) + " at config z; evaluated at z=0.5, omega=3, alpha=0.5";
      value = theta_closed_form_defect(0.5, {3.0, 0.5}, dim, alg);
    }
    add("Eq27", "printed-vs-oracle distance of closed-form Theta(z) to Theta at the root (" + where + ")", std::nullopt,
        [&] { return value; });
  }
  add("Eq28", "z = 0 limit: |4 lambda1 lambda2 - (w^2 + 4 al^2)| = |(w - 2 al)^2 - (w^2 + 4 al^2)|", std::nullopt, [&] {
    const PrintedLambda p = printed_lambda(0.0, m);
    return std::abs(4.0 * p.lambda1 * p.lambda2 - m.spacing_squared());
  });

  // Position representation with A = cosh x, B = delta cosh x.
  const Grid gg = gauge_grid();
  const int gm = gg.margin();
  const GaugeFunctions gf = GaugeFunctions::cosh_pair(gg, cfg.delta);
  add("Eq29", "differential ladder pair: ||([a, a+] - 1) f|| / ||f|| over probes", std::nullopt, [&] {
    const GridOperator d = d1_op(gg);
    const GridOperator a = multiply_op(gg, gf.A) * d + multiply_op(gg, gf.B);
    const GridOperator ad = multiply_op(gg, RVector(-gf.A)) * d + multiply_op(gg, RVector(gf.B - gf.dA));
    return probe_defect(a * ad - ad * a - identity_op(gg), identity_op(gg), gm);
  });
  add("Eq30", "printed position form against the form composed from the ladder pair", std::nullopt, [&] {
    const GridOperator printed = build_position_hamiltonian(gf, m, gg);
    return probe_defect(printed - compose_position_hamiltonian(gf, m, gg), printed, gm);
  });
  // rho H rho^-1 replaces d by d + S' with S' = (2 al / w) B / A.
  const RVector s1 = (2.0 * al / w) * gf.B.cwiseQuotient(gf.A);
  const RVector s2 =
      (2.0 * al / w) * (gf.dB.cwiseProduct(gf.A) - gf.B.cwiseProduct(gf.dA)).cwiseQuotient(gf.A.cwiseProduct(gf.A));
  const RVector c2 = -w * gf.A.cwiseProduct(gf.A);
  const RVector c1 = 4.0 * al * gf.A.cwiseProduct(gf.B) - 2.0 * w * gf.A.cwiseProduct(gf.dA);
  const RVector c0 = (-(w - 2.0 * al) * (gf.A.cwiseProduct(gf.dB) + gf.dA.cwiseProduct(gf.B)) +
                      w * gf.B.cwiseProduct(gf.B) - al * (gf.A.cwiseProduct(gf.d2A) + gf.dA.cwiseProduct(gf.dA)))
                         .array() +
                     w / 2.0;
  add("Eq31", "rho H rho^-1 first-order coefficient against the symmetric -2 w A A'", 1e-10, [&] {
    const RVector want = -2.0 * w * gf.A.cwiseProduct(gf.dA);
    return detail::max_rel((c1 + 2.0 * c2.cwiseProduct(s1)).cast<cplx>(), want.cast<cplx>());
  });
  add("Eq32", "rho by 4th-order quadrature against the closed form exp(-2 al delta x / w)", 1e-10, [&] {
    GaugeFunctions custom = gf;
    custom.tag = GaugeTag::custom;
    const RVector q = rho_gauge(custom, m, gg), c = rho_gauge(gf, m, gg);
    return (q.cwiseQuotient(c).array() - 1.0).abs().maxCoeff();
  });
  add("Eq33", "probe symmetry of h = -w d A^2 d + U_eff", 1e-6,
      [&] { return detail::probe_symmetry(symmetric_hamiltonian(gf, m, gg), gm); });
  add("Eq34", "rho H rho^-1 zeroth-order coefficient against U_eff", 1e-10, [&] {
    const RVector got = c2.cwiseProduct(s2 + s1.cwiseProduct(s1)) + c1.cwiseProduct(s1) + c0;
    return detail::max_rel(got.cast<cplx>(), u_eff(gf, m, gg).cast<cplx>());
  });
  add("Eq35", "(h - eps)(Phi / A) against w A (-Phi'' + V36 Phi) over probes", 1e-6, [&] {
    const GridOperator h = symmetric_hamiltonian(gf, m, gg);
    const GridOperator lhs = (h - cplx(cfg.eps_energy) * identity_op(gg)) * multiply_op(gg, gf.A.cwiseInverse());
    const RVector v36 = reduced_potential(gf, m, cfg.eps_energy);
    const GridOperator rhs = multiply_op(gg, RVector(w * gf.A)) * (multiply_op(gg, v36) - d2_op(gg));
    return probe_defect(lhs - rhs, lhs, gm);
  });
  {
    const std::optional<double> dc = detail::chain_delta(m);
    add("Eq36",
        "whole-chain residual ||H Psi - eps Psi|| / ||Psi|| for an exact state of the reduced equation (delta = " +
            (dc ? format_double(*dc) : std::string("none")) + ")",
        1e-5, [&] {
          if (!dc) fail(ErrorCode::complex_susy_a, "no real bound state for the chain check");
          const auto [eps, phi] = detail::consistent_chain_state(m, *dc, gg);
          return gauge_chain_residual(phi, eps, {m, *dc, eps}, gg);
        });
  }
  add("Eq37", "printed V - 2 al/w against the reduced potential at A = cosh x, B = delta cosh x", std::nullopt, [&] {
    const SchrodingerModel sm = schrodinger_potential({m, cfg.delta, cfg.eps_energy}, gg);
    const RVector v36 = reduced_potential(gf, m, cfg.eps_energy);
    return detail::max_rel((sm.V.array() - sm.lambda_fixed).matrix().cast<cplx>(), v36.cast<cplx>());
  });

  // Pseudo-supersymmetry at (delta, eps_energy, n).
  std::optional<SusyParams> sp;
  std::string susy_error;
  try {
    sp = susy_params_from_model(m, cfg.delta, cfg.eps_energy, cfg.branch);
  } catch (const Error& e) {
    if (e.code() == ErrorCode::invalid_parameter) throw;
    susy_error = e.what();
  }
  auto susy = [&]() -> const SusyParams& {
    if (!sp) fail(ErrorCode::complex_susy_a, susy_error);
    return *sp;
  };
  auto cx = [&] { return susy().complexify(); };
  const Grid& g = cfg.grid;
  const Grid ge = g.refined();
  auto partners = [&] { return superpotential_partners(Superpotential(cx()), g); };

  add("Eq38", "factorization ||L- L - H_p|| over probes (complexified W)", 1e-8,
      [&] { return factorization_defect(Superpotential(cx()), g).lower; });
  add("Eq39", "factorization ||L L- - H|| over probes (complexified W)", 1e-8,
      [&] { return factorization_defect(Superpotential(cx()), g).upper; });
  add("Eq40", "eta H - H_p+ eta with eta = eta2 eta1, H_p+ the mechanical adjoint", std::nullopt, [&] {
    const PartnerPair pp = partners();
    return intertwiner_residual(build_intertwiner(IntertwinerKind::eta_composite, cx(), g), pp.H_susy,
                                adjoint_op(pp.H_p), g);
  });
  add("Eq41", "asymptotes |W(+-inf)| = |a +- i b|", 1e-12, [&] {
    const Superpotential wsp(cx());
    const double a = wsp.susy_a, b = wsp.susy_b;
    return std::abs(std::abs(wsp(40.0)) - std::hypot(a, b)) + std::abs(std::abs(wsp(-40.0)) - std::hypot(a, b));
  });
  auto closed_form_check = [&](bool complexified, bool susy_side) {
    SusyParams p = susy();
    p.complexified = complexified;
    const Superpotential wsp(p);
    const CVector want = sample_complex(g, [&](double x) { return partner_potential(wsp, x, susy_side); });
    const CVector got = sample_complex(g, [&](double x) {
      return wsp(x) * wsp(x) + (susy_side ? 1.0 : -1.0) * wsp.derivative(x);
    });
    return detail::max_rel(got, want);
  };
  add("Eq42", "V = W^2 - W' closed form, real b", 1e-10, [&] { return closed_form_check(false, false); });
  add("Eq43", "Vbar = W^2 + W' closed form, real b", 1e-10, [&] { return closed_form_check(false, true); });
  {
    std::string alt;
    try {
      const SusyParams a2 = susy_params_matching(m, cfg.delta, cfg.eps_energy, cfg.branch);
      alt = "; matching-condition constructor gives a = " + format_double(a2.susy_a) +
            ", constant mismatch " + format_double(a2.match.constant_residual);
    } catch (const Error& e) {
      if (e.code() == ErrorCode::invalid_parameter) throw;
      alt = "; matching-condition constructor: " + std::string(e.what());
    }
    add("Eq44", "coefficient match of printed a: |a(a+1) - (eps - 1/2 - al/w)|" + alt, std::nullopt,
        [&] { return susy().match.depth_residual; });
  }
  add("Eq45", "|a b - delta| with b = delta / a", 1e-12, [&] {
    const SusyParams& p = susy();
    return std::abs(p.susy_a * p.susy_b - p.delta);
  });
  add("Eq46", "complexified V = W^2 - W' closed form", 1e-10, [&] { return closed_form_check(true, false); });
  add("Eq47", "complexified Vbar = W^2 + W' closed form", 1e-10, [&] { return closed_form_check(true, true); });
  add("Eq48", "printed adjoint potential against the entrywise conjugate of V", std::nullopt, [&] {
    const Superpotential wsp(cx());
    const CVector printed = sample_complex(g, [&](double x) { return printed_adjoint_potential(wsp, x); });
    const CVector mech = sample_complex(g, [&](double x) { return std::conj(partner_potential(wsp, x, false)); });
    return detail::max_rel(printed, mech);
  });
  {
    std::string note;
    try {
      const PartnerPair pp = partners();
      note = "; d - W form gives " +
             format_double(intertwiner_residual(build_intertwiner(IntertwinerKind::eta1, cx(), g), pp.H_susy, pp.H_p, g));
    } catch (const Error& e) {
      if (e.code() == ErrorCode::invalid_parameter) throw;
    }
    add("Eq49", "printed eta1 = d - a tanh + ib in eta1 H = H_p eta1" + note, std::nullopt, [&] {
      const PartnerPair pp = partners();
      return intertwiner_residual(build_intertwiner(IntertwinerKind::eta1_printed, cx(), g), pp.H_susy, pp.H_p, g);
    });
  }
  add("Eq50", "printed eta2 in eta2 H_p = H_p+ eta2", std::nullopt, [&] {
    const PartnerPair pp = partners();
    return intertwiner_residual(build_intertwiner(IntertwinerKind::eta2, cx(), g), pp.H_p, adjoint_op(pp.H_p), g);
  });
  add("Eq51", "best achievable eta2 = d - c sech^2 over complex c (least squares)", std::nullopt, [&] {
    const PartnerPair pp = partners();
    const GridOperator d = d1_op(g);
    const GridOperator s2 = multiply_op(g, sample(g, [](double x) { return 1.0 / (std::cosh(x) * std::cosh(x)); }));
    const GridOperator hpa = adjoint_op(pp.H_p);
    const GridOperator e0 = d * pp.H_p - hpa * d, e1 = hpa * s2 - s2 * pp.H_p;
    const int mg = std::max(composed_margin, g.margin());
    double worst = 0.0;
    // one c for all probes: stack the probe responses
    std::vector<CVector> r0, r1;
    std::vector<double> den;
    for (const auto& f : hermite_probes(g)) {
      r0.push_back(e0.apply(f).segment(mg, g.size() - 2 * mg));
      r1.push_back(e1.apply(f).segment(mg, g.size() - 2 * mg));
      den.push_back(interior_norm(pp.H_p.apply(f), mg));
    }
    cplx num = 0.0;
    double nrm = 0.0;
    for (std::size_t k = 0; k < r0.size(); ++k) {
      num += r1[k].dot(r0[k]) / (den[k] * den[k]);
      nrm += r1[k].squaredNorm() / (den[k] * den[k]);
    }
    const cplx c = -num / nrm;
    for (std::size_t k = 0; k < r0.size(); ++k) worst = std::max(worst, (r0[k] + c * r1[k]).norm() / den[k]);
    return worst;
  });
  add("Eq52", "eta2 eta1 against the expanded operator d^2 - (W + g) d + (g W - W')", 1e-6, [&] {
    const SusyParams p = cx();
    const Superpotential wsp(p);
    const cplx gc = I_unit * (p.susy_a + 1.0) / (2.0 * p.susy_b);
    const CVector gs = sample_complex(g, [&](double x) { return gc / (std::cosh(x) * std::cosh(x)); });
    const CVector ws = sample_complex(g, wsp);
    const CVector dws = sample_complex(g, [&](double x) { return cplx(wsp.derivative(x)); });
    const GridOperator expanded = d2_op(g) - multiply_op(g, CVector(ws + gs)) * d1_op(g) +
                                  multiply_op(g, CVector(gs.cwiseProduct(ws) - dws));
    const GridOperator composite = build_intertwiner(IntertwinerKind::eta_composite, p, g).op;
    return probe_defect(composite - expanded, composite, std::max(composed_margin, g.margin()));
  });
  std::optional<RMEigenstate> st;
  auto state = [&]() -> const RMEigenstate& {
    if (!st) st = rm_wavefunction(cx(), cfg.n, ge, 2.0 * al / w);
    return *st;
  };
  add("Eq53", "lambda_n against the Rayleigh quotient of Phi_n (n = " + std::to_string(cfg.n) + ")", 1e-4, [&] {
    const RMEigenstate& s = state();
    if (!s.normalizable) fail(ErrorCode::zero_norm, "state is non-normalizable (n >= a)");
    return std::abs(s.lambda_n - rayleigh_quotient(s, cx(), ge));
  });
  add("Eq54", "ODE certificate ||-Phi'' + V Phi - lambda_n Phi|| / ||Phi|| (n = " + std::to_string(cfg.n) + ")", 1e-6,
      [&] { return state().ode_residual; });
  {
    const LambdaAdjudication& adj = lambda_adjudication();
    add("Eq55",
        "c1 + c2 = 2(a - n) and c2 = conj(c1); lambda in c1n, c2n adjudicated as " + std::string(to_string(adj.choice)) +
            " (residuals " + format_double(adj.residual_delta) + " vs " +
            format_double(adj.residual_two_alpha_over_omega) + ")",
        1e-12, [&] {
          const RMEigenstate& s = state();
          return std::abs(s.c1n + s.c2n - 2.0 * (cx().susy_a - s.n)) + std::abs(s.c2n - std::conj(s.c1n));
        });
  }

  auto str = [](std::string_view v) { return nlohmann::json(std::string(v)).dump(); };
  rep.environment = {
      {"version", str(library_version)},
      {"model", "{\"omega\": " + detail::json_num(w) + ", \"alpha\": " + detail::json_num(al) + "}"},
      {"z", detail::json_num(cfg.z)},
      {"branch", str(to_string(cfg.branch))},
      {"dim", "{\"n_levels\": " + std::to_string(dim.n_levels()) + ", \"buffer\": " + std::to_string(dim.buffer()) + "}"},
      {"grid", "{\"x_min\": " + detail::json_num(g.x_min()) + ", \"x_max\": " + detail::json_num(g.x_max()) +
                   ", \"n_points\": " + std::to_string(g.size()) + "}"},
      {"eigenstate_grid_points", std::to_string(ge.size())},
      {"gauge_grid", "{\"x_min\": " + detail::json_num(gg.x_min()) + ", \"x_max\": " + detail::json_num(gg.x_max()) +
                         ", \"n_points\": " + std::to_string(gg.size()) + "}"},
      {"delta", detail::json_num(cfg.delta)},
      {"eps_energy", detail::json_num(cfg.eps_energy)},
      {"n", std::to_string(cfg.n)},
      {"normalization", str("L2 (standard); the pseudo-norm constant is not used")},
      {"tolerances",
       "{\"hermiticity\": 1e-08, \"condition\": 1e-12, \"factorization\": 1e-08, \"intertwiner\": 1e-06, "
       "\"ode\": 1e-06, \"rayleigh\": 0.0001}"},
  };
  return rep;
}

}  // namespace quasiherm
