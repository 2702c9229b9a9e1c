#include <catch_amalgamated.hpp>

#include "quasiherm/rosen_morse.hpp"

using namespace quasiherm;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

namespace {
const ModelParams fig_model{3.0, 2.0};
SusyParams fig1() { return susy_params_from_model(fig_model, 10.0, 5.0).complexify(); }
}  // namespace

TEST_CASE("superpotential parameters at w=3, al=2, delta=10, eps=5") {
  const SusyParams sp = susy_params_from_model(fig_model, 10.0, 5.0);
  CHECK_THAT(sp.susy_a, WithinAbs(3.47286556, 1e-8));
  CHECK_THAT(sp.susy_b, WithinAbs(2.879466489, 1e-8));
  CHECK_THAT(sp.susy_a * sp.susy_b, WithinAbs(10.0, 1e-12));
  CHECK(sp.match.tilt_residual < 1e-12);
  CHECK(sp.match.depth_residual > 1.0);
  const SusyParams alt = susy_params_matching(fig_model, 10.0, 5.0);
  CHECK_THAT(alt.susy_a, WithinAbs(1.520725942, 1e-8));
  CHECK(alt.match.depth_residual < 1e-12);
}

TEST_CASE("eps=4 puts a below eight") {
  const SusyParams sp = susy_params_from_model(fig_model, 10.0, 4.0);
  CHECK_THAT(sp.susy_a, WithinAbs(2.47286556, 1e-8));
}

TEST_CASE("superpotential asymptotes and shape") {
  const Superpotential w(2.0, 0.5, false);
  CHECK_THAT(w(40.0).real(), WithinAbs(2.5, 1e-14));
  CHECK_THAT(w(-40.0).real(), WithinAbs(-1.5, 1e-14));
  const Superpotential wc(2.0, 0.5, true);
  CHECK_THAT(std::abs(wc(40.0)), WithinAbs(std::hypot(2.0, 0.5), 1e-14));
}

TEST_CASE("factorization on the default grid, real and complexified") {
  const Grid g(-12.0, 12.0, 2048);
  for (const Superpotential& w : {Superpotential(1.0, 0.0, false), Superpotential(fig1())}) {
    const FactorizationDefect d = factorization_defect(w, g);
    CHECK(d.lower < 1e-8);
    CHECK(d.upper < 1e-8);
    const FactorizationDefect fine = factorization_defect(w, g.refined());
    CHECK(d.lower / fine.lower > 12.0);
  }
}

TEST_CASE("eta1 = d - W intertwines the partners") {
  const Grid g(-12.0, 12.0, 2048);
  for (const SusyParams& sp : {susy_params_direct(1.0, 0.0), fig1()}) {
    const PartnerPair pp = superpotential_partners(Superpotential(sp), g);
    CHECK(intertwiner_residual(build_intertwiner(IntertwinerKind::eta1, sp, g), pp.H_susy, pp.H_p, g) < 1e-6);
  }
}

TEST_CASE("printed eta1 fails once b is complexified") {
  const Grid g(-12.0, 12.0, 2048);
  const SusyParams sp = fig1();
  const PartnerPair pp = superpotential_partners(Superpotential(sp), g);
  CHECK(intertwiner_residual(build_intertwiner(IntertwinerKind::eta1_printed, sp, g), pp.H_susy, pp.H_p, g) > 0.1);
}

TEST_CASE("eta2 needs nonzero b") {
  const Grid g(-12.0, 12.0, 512);
  try {
    build_intertwiner(IntertwinerKind::eta2, susy_params_direct(1.0, 0.0), g);
    FAIL("expected intertwiner-singular");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::intertwiner_singular);
  }
}

TEST_CASE("spectrum formula and its pole") {
  const SusyParams sp = fig1();
  CHECK_THAT(rm_spectrum(sp, 0), WithinAbs(-3.769468, 1e-6));
  CHECK_THAT(rm_spectrum(sp, 1), WithinAbs(10.237994, 1e-6));
  try {
    rm_spectrum(susy_params_direct(2.0, 0.5), 2);
    FAIL("expected spectrum-pole");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::spectrum_pole);
  }
}

TEST_CASE("normalizable eigenstates carry ODE and Rayleigh certificates") {
  const Grid g = Grid(-12.0, 12.0, 2048).refined();
  const SusyParams sp = fig1();
  for (int n : {0, 1}) {
    const RMEigenstate st = rm_wavefunction(sp, n, g, 2.0 * fig_model.alpha / fig_model.omega);
    CHECK(st.normalizable);
    CHECK(st.ode_residual < 1e-6);
    CHECK_THAT(rayleigh_quotient(st, sp, g), WithinAbs(st.lambda_n, 1e-4));
    CHECK(std::abs(st.c1n + st.c2n - 2.0 * (sp.susy_a - n)) < 1e-12);
    CHECK(std::abs(st.c2n - std::conj(st.c1n)) < 1e-12);
    CHECK_THAT(trapezoid(density_profile(st, g), g.spacing()), WithinAbs(1.0, 1e-12));
  }
}

TEST_CASE("density tails decay for a normalizable state") {
  const Grid g(-12.0, 12.0, 2048);
  const RMEigenstate st = rm_wavefunction(fig1(), 1, g);
  const RVector rho = density_profile(st, g);
  CHECK(rho.allFinite());
  CHECK(rho(0) < 1e-12);
  CHECK(rho(g.size() - 1) < 1e-12);
}

TEST_CASE("n above a is flagged non-normalizable") {
  const SusyParams sp = susy_params_from_model(fig_model, 10.0, 4.0).complexify();
  const RMEigenstate st = rm_wavefunction(sp, 8, Grid(-12.0, 12.0, 2048));
  CHECK_FALSE(st.normalizable);
  CHECK_FALSE(st.warning.empty());
}

TEST_CASE("lambda adjudication picks delta") {
  const LambdaAdjudication& adj = lambda_adjudication();
  CHECK(adj.choice == LambdaChoice::delta);
  CHECK(adj.residual_delta < 1e-6);
  CHECK(adj.residual_two_alpha_over_omega > 1.0);
}

TEST_CASE("partner spectra pair up for real b = 0") {
  const SpectrumPairing sp = spectrum_pairing(2.5, Grid(-12.0, 12.0, 1024));
  REQUIRE(sp.partner_levels.size() == sp.susy_levels.size() + 1);
  CHECK_THAT(sp.partner_levels.front(), WithinAbs(0.0, 1e-4));
  CHECK(sp.max_mismatch < 1e-4);
}

TEST_CASE("negative discriminant is rejected as complex a") {
  try {
    susy_params_from_model({3.0, 0.0}, 1.0, 5.0);
    FAIL("expected complex-susy-a");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::complex_susy_a);
  }
  CHECK_THROWS_AS(susy_params_direct(0.0, 1.0), Error);
}
