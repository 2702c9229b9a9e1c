#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <set>
#include <sstream>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "quasiherm/quasiherm.hpp"

namespace qh = quasiherm;
using nlohmann::json;

namespace {

// Raw flag values; a --config file fills whichever ones were not given on the command line.
struct Flags {
  double omega = 3.0, alpha = 1.0, z = 1.0;
  int dim = 128, buffer = 8;
  double grid_min = -12.0, grid_max = 12.0;
  int grid_n = 2048;
  double delta = 10.0, eps_energy = 5.0;
  int n = 1;
  std::string branch = "plus", out, format = "json", config;
  int levels = 8;
};

void apply_config(CLI::App& app, Flags& f) {
  if (f.config.empty()) return;
  std::ifstream in(f.config);
  if (!in) qh::fail(qh::ErrorCode::invalid_parameter, "cannot read config " + f.config);
  json j;
  try {
    j = json::parse(in);
  } catch (const json::exception& e) {
    qh::fail(qh::ErrorCode::invalid_parameter, std::string("bad config: ") + e.what());
  }
  if (!j.is_object()) qh::fail(qh::ErrorCode::invalid_parameter, "config must be a JSON object");
  auto set = [&](const char* key, auto& target) {
    if (!j.contains(key)) return;
    if (app.get_option(std::string("--") + key)->count() > 0) return;  // flags win
    try {
      j.at(key).get_to(target);
    } catch (const json::exception&) {
      qh::fail(qh::ErrorCode::invalid_parameter, std::string("config field '") + key + "' has the wrong type");
    }
  };
  static const std::set<std::string> known = {"omega",    "alpha", "z",          "dim", "buffer", "grid-min", "grid-max",
                                              "grid-n",   "delta", "eps-energy", "n",   "branch", "out",      "format"};
  for (const auto& [k, v] : j.items())
    if (!known.count(k)) qh::fail(qh::ErrorCode::invalid_parameter, "unknown config field '" + k + "'");
  set("omega", f.omega);
  set("alpha", f.alpha);
  set("z", f.z);
  set("dim", f.dim);
  set("buffer", f.buffer);
  set("grid-min", f.grid_min);
  set("grid-max", f.grid_max);
  set("grid-n", f.grid_n);
  set("delta", f.delta);
  set("eps-energy", f.eps_energy);
  set("n", f.n);
  set("branch", f.branch);
  set("out", f.out);
  set("format", f.format);
}

qh::RunConfig to_run_config(const Flags& f) {
  qh::RunConfig c;
  c.model = {f.omega, f.alpha};
  c.z = f.z;
  c.dim = qh::FockDim(f.dim, f.buffer);
  c.grid = qh::Grid(f.grid_min, f.grid_max, f.grid_n);
  c.delta = f.delta;
  c.eps_energy = f.eps_energy;
  c.n = f.n;
  if (f.branch == "plus") c.branch = qh::Branch::plus;
  else if (f.branch == "minus") c.branch = qh::Branch::minus;
  else qh::fail(qh::ErrorCode::invalid_parameter, "--branch must be plus or minus");
  if (f.format == "json") c.format = qh::OutputFormat::json;
  else if (f.format == "csv") c.format = qh::OutputFormat::csv;
  else qh::fail(qh::ErrorCode::invalid_parameter, "--format must be json or csv");
  c.out = f.out;
  c.validate();
  return c;
}

void emit(const qh::RunConfig& c, const std::string& text) {
  if (c.out.empty()) std::cout << text;
  else qh::write_atomically(c.out, text);
}

std::string num(double v) { return std::isfinite(v) ? qh::format_double(v) : "null"; }

int cmd_audit(const qh::RunConfig& c) {
  const qh::AuditReport rep = qh::run_audit(c);
  emit(c, c.format == qh::OutputFormat::json ? rep.to_json() : rep.to_csv());
  return 0;
}

int cmd_spectrum(const qh::RunConfig& c, int levels) {
  if (levels < 1 || levels > c.dim.n_levels() / 2)
    qh::fail(qh::ErrorCode::invalid_parameter, "--levels must lie in [1, dim/2]");
  const qh::FockOperator h = qh::build_hamiltonian(c.model, c.dim);
  const qh::SpectrumResult sr = qh::eigenvalues(h, c.model.alpha == 0.0);
  std::vector<double> n, exact, numeric, im, err;
  for (int k = 0; k < levels; ++k) {
    const qh::cplx e = sr.eigenvalues[static_cast<std::size_t>(k)];
    n.push_back(k);
    exact.push_back(qh::exact_level(c.model, k));
    numeric.push_back(e.real());
    im.push_back(e.imag());
    err.push_back(std::abs(e - exact.back()));
  }
  if (c.format == qh::OutputFormat::csv) {
    qh::CsvTable t{{"omega=" + qh::format_double(c.model.omega), "alpha=" + qh::format_double(c.model.alpha),
                    "dim=" + std::to_string(c.dim.n_levels()), "max_residual=" + qh::format_double(sr.max_residual)},
                   {"n", "E_exact", "E_numeric", "abs_err"},
                   {n, exact, numeric, err}};
    emit(c, t.str());
  } else {
    std::string s = "{\"dim\": " + std::to_string(c.dim.n_levels()) + ", \"max_residual\": " + num(sr.max_residual) +
                    ", \"levels\": [\n";
    for (int k = 0; k < levels; ++k)
      s += "  {\"n\": " + std::to_string(k) + ", \"E_exact\": " + num(exact[k]) + ", \"E_numeric\": " + num(numeric[k]) +
           ", \"E_numeric_imag\": " + num(im[k]) + ", \"abs_err\": " + num(err[k]) + "}" +
           (k + 1 < levels ? ",\n" : "\n");
    emit(c, s + "]}\n");
  }
  return 0;
}

std::string infeasible_json(const qh::Error& e) {
  return "{\"status\": \"flag\", \"error\": " + json(std::string(qh::to_string(e.code()))).dump() +
         ", \"message\": " + json(std::string(e.what())).dump() + "}\n";
}

int cmd_metric_solve(const qh::RunConfig& c) {
  try {
    const qh::MetricAlgebra alg;
    const qh::MetricParams mp = qh::solve_eps(c.z, c.model, c.branch, alg);
    const qh::HermitianEquivalent he = qh::hermitian_equivalent_at(mp, c.model, c.dim, alg);
    const qh::LambdaReport lr = qh::lambda_report(c.z, c.model, c.dim, alg);
    std::ostringstream s;
    s << "{\"z\": " << num(c.z) << ", \"eps_metric\": " << num(mp.eps_metric) << ", \"kappa\": " << num(mp.kappa)
      << ", \"theta\": " << num(mp.theta) << ",\n \"oracle\": {\"f1\": " << num(he.oracle.f1)
      << ", \"f2\": " << num(he.oracle.f2) << ", \"f3\": " << num(he.oracle.f3) << "},\n \"printed\": {\"f1\": "
      << num(he.printed.f1) << ", \"f2\": " << num(he.printed.f2) << ", \"f3\": " << num(he.printed.f3)
      << "},\n \"lambda1\": " << num(lr.lambda1_oracle.value_or(NAN)) << ", \"lambda2\": "
      << num(lr.lambda2_oracle.value_or(NAN)) << ", \"fit_residual\": " << num(lr.fit_residual.value_or(NAN)) << "}\n";
    emit(c, s.str());
  } catch (const qh::Error& e) {
    if (e.code() != qh::ErrorCode::no_real_metric) throw;
    emit(c, infeasible_json(e));
  }
  return 0;
}

int cmd_metric_verify(const qh::RunConfig& c) {
  try {
    const qh::MetricSolution sol = qh::solve_metric(c.z, c.model, c.dim, c.branch);
    const auto& d = sol.defects;
    auto st = [](double r, double t) { return r < t ? "\"pass\"" : "\"flag\""; };
    std::ostringstream s;
    s << "{\"eps_metric\": " << num(sol.params.eps_metric) << ",\n \"hermiticity_of_h\": {\"residual\": "
      << num(d.hermiticity_of_h) << ", \"status\": " << st(d.hermiticity_of_h, 1e-8)
      << "},\n \"pseudo_hermiticity_of_eta\": {\"residual\": " << num(d.pseudo_hermiticity_of_eta)
      << ", \"status\": " << st(d.pseudo_hermiticity_of_eta, 1e-8) << "},\n \"bogoliubov\": {\"residual\": "
      << num(d.bogoliubov) << ", \"status\": " << st(d.bogoliubov, 1e-8) << "},\n \"condition\": {\"residual\": "
      << num(d.condition_residual) << ", \"status\": " << st(d.condition_residual, 1e-12)
      << "},\n \"eta_min_eigenvalue\": " << num(sol.eta_min_eigenvalue) << "}\n";
    emit(c, s.str());
  } catch (const qh::Error& e) {
    if (e.code() != qh::ErrorCode::no_real_metric) throw;
    emit(c, infeasible_json(e));
  }
  return 0;
}

qh::SusyParams rm_params(const qh::RunConfig& c) {
  return qh::susy_params_from_model(c.model, c.delta, c.eps_energy, c.branch).complexify();
}

int cmd_rm_spectrum(const qh::RunConfig& c) {
  const qh::SusyParams sp = rm_params(c);
  std::vector<double> ns, lam, norm;
  for (int k = 0; k <= c.n; ++k) {
    ns.push_back(k);
    lam.push_back(qh::rm_spectrum(sp, k));
    norm.push_back(k < sp.susy_a ? 1.0 : 0.0);
  }
  qh::CsvTable t{{"a=" + qh::format_double(sp.susy_a), "b=" + qh::format_double(sp.susy_b)},
                 {"n", "lambda_n", "normalizable"},
                 {ns, lam, norm}};
  emit(c, t.str());
  return 0;
}

std::string density_csv(const qh::RunConfig& c, const std::string& label) {
  const qh::SusyParams sp = rm_params(c);
  const qh::RMEigenstate st = qh::rm_wavefunction(sp, c.n, c.grid, 2.0 * c.model.alpha / c.model.omega);
  const qh::RVector rho = qh::density_profile(st, c.grid);
  std::vector<double> x, re, im, d;
  for (int i = 0; i < c.grid.size(); ++i) {
    x.push_back(c.grid.x(i));
    re.push_back(st.Phi(i).real());
    im.push_back(st.Phi(i).imag());
    d.push_back(rho(i));
  }
  std::vector<std::string> comments = {
      "label=" + label,
      "omega=" + qh::format_double(c.model.omega),
      "alpha=" + qh::format_double(c.model.alpha),
      "delta=" + qh::format_double(c.delta),
      "eps_energy=" + qh::format_double(c.eps_energy),
      "n=" + std::to_string(c.n),
      "a=" + qh::format_double(sp.susy_a),
      "b=" + qh::format_double(sp.susy_b),
      "lambda_n=" + qh::format_double(st.lambda_n),
      "normalizable=" + std::string(st.normalizable ? "true" : "false")};
  if (!st.warning.empty()) comments.push_back("warning=" + st.warning);
  return qh::CsvTable{comments, {"x", "re_phi", "im_phi", "density"}, {x, re, im, d}}.str();
}

int cmd_rm_density(const qh::RunConfig& c) {
  emit(c, density_csv(c, "density"));
  return 0;
}

int cmd_rm_intertwine(const qh::RunConfig& c) {
  const qh::SusyParams sp = rm_params(c);
  const qh::Superpotential w(sp);
  const qh::PartnerPair pp = qh::superpotential_partners(w, c.grid);
  const qh::FactorizationDefect fd = qh::factorization_defect(w, c.grid);
  auto res = [&](qh::IntertwinerKind k, const qh::GridOperator& l, const qh::GridOperator& r) {
    try {
      return num(qh::intertwiner_residual(qh::build_intertwiner(k, sp, c.grid), l, r, c.grid));
    } catch (const qh::Error& e) {
      if (e.code() != qh::ErrorCode::intertwiner_singular) throw;
      return json(std::string(qh::to_string(e.code()))).dump();
    }
  };
  const qh::GridOperator hpa = qh::adjoint_op(pp.H_p);
  std::ostringstream s;
  s << "{\"a\": " << num(sp.susy_a) << ", \"b\": " << num(sp.susy_b) << ",\n \"factorization_lower\": "
    << num(fd.lower) << ", \"factorization_upper\": " << num(fd.upper)
    << ",\n \"eta1\": " << res(qh::IntertwinerKind::eta1, pp.H_susy, pp.H_p)
    << ", \"eta1_printed\": " << res(qh::IntertwinerKind::eta1_printed, pp.H_susy, pp.H_p)
    << ",\n \"eta2\": " << res(qh::IntertwinerKind::eta2, pp.H_p, hpa)
    << ", \"eta_composite\": " << res(qh::IntertwinerKind::eta_composite, pp.H_susy, hpa) << "}\n";
  emit(c, s.str());
  return 0;
}

int cmd_figures(const qh::RunConfig& base) {
  const std::filesystem::path dir = base.out.empty() ? std::filesystem::path(".") : std::filesystem::path(base.out);
  std::filesystem::create_directories(dir);
  struct Fig { const char* name; int n; double eps; };
  const Fig figs[] = {{"fig1", 1, 5.0}, {"fig2", 2, 4.0}, {"fig3", 8, 4.0}};
  for (const Fig& f : figs) {
    qh::RunConfig c = base;
    c.model = {3.0, 2.0};
    c.delta = 10.0;
    c.eps_energy = f.eps;
    c.n = f.n;
    const std::filesystem::path p = dir / (std::string(f.name) + ".csv");
    qh::write_atomically(p, density_csv(c, f.name));
    std::cout << p.string() << "\n";
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"quasi-Hermitian oscillator and Rosen-Morse verification tool"};
  app.require_subcommand(1);
  app.fallthrough();
  Flags f;
  app.add_option("--omega", f.omega, "oscillator frequency");
  app.add_option("--alpha", f.alpha, "non-Hermitian coupling");
  app.add_option("--z", f.z, "metric ratio z = 2 kappa / eps");
  app.add_option("--dim", f.dim, "Fock truncation N");
  app.add_option("--buffer", f.buffer, "top levels excluded from defects");
  app.add_option("--grid-min", f.grid_min);
  app.add_option("--grid-max", f.grid_max);
  app.add_option("--grid-n", f.grid_n, "grid points");
  app.add_option("--delta", f.delta, "gauge coefficient B = delta A");
  app.add_option("--eps-energy", f.eps_energy, "energy parameter of the reduced equation");
  app.add_option("--n", f.n, "level index");
  app.add_option("--branch", f.branch, "plus or minus")->check(CLI::IsMember({"plus", "minus"}));
  app.add_option("--out", f.out, "output file (directory for figures); stdout if empty");
  app.add_option("--format", f.format, "json or csv")->check(CLI::IsMember({"json", "csv"}));
  app.add_option("--config", f.config, "JSON file with the same field names as the flags")->check(CLI::ExistingFile);

  auto* audit = app.add_subcommand("audit", "per-equation residual report");
  auto* spectrum = app.add_subcommand("spectrum", "truncated spectrum of H against (n+1/2) sqrt(w^2+4al^2)");
  spectrum->add_option("--levels", f.levels, "number of levels");
  auto* metric = app.add_subcommand("metric", "metric construction");
  metric->require_subcommand(1);
  auto* msolve = metric->add_subcommand("solve", "root of the Hermiticity condition and h coefficients");
  auto* mverify = metric->add_subcommand("verify", "defects of the solved metric");
  auto* rm = app.add_subcommand("rm", "Rosen-Morse pseudo-supersymmetry");
  rm->require_subcommand(1);
  auto* rspec = rm->add_subcommand("spectrum", "lambda_n for n = 0..--n");
  auto* rdens = rm->add_subcommand("density", "wavefunction and density CSV");
  auto* rint = rm->add_subcommand("intertwine", "factorization and intertwiner residuals");
  auto* figures = app.add_subcommand("figures", "density CSVs for the three figure parameter sets");
  for (auto* s : {metric, rm}) s->fallthrough();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  }

  try {
    apply_config(app, f);
    const qh::RunConfig c = to_run_config(f);
    if (audit->parsed()) return cmd_audit(c);
    if (spectrum->parsed()) return cmd_spectrum(c, f.levels);
    if (msolve->parsed()) return cmd_metric_solve(c);
    if (mverify->parsed()) return cmd_metric_verify(c);
    if (rspec->parsed()) return cmd_rm_spectrum(c);
    if (rdens->parsed()) return cmd_rm_density(c);
    if (rint->parsed()) return cmd_rm_intertwine(c);
    if (figures->parsed()) return cmd_figures(c);
  } catch (const qh::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    if (e.code() == qh::ErrorCode::invalid_parameter) std::cerr << app.help();
    return e.code() == qh::ErrorCode::invalid_parameter ? 2 : 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 2;
}
