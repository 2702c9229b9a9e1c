#include <catch_amalgamated.hpp>

#include "quasiherm/audit.hpp"
#include "quasiherm/grid.hpp"

using namespace quasiherm;
using Catch::Matchers::WithinAbs;

namespace {
const ModelParams model{3.0, 2.0};

double max_interior(const CVector& v, int m) { return v.segment(m, v.size() - 2 * m).cwiseAbs().maxCoeff(); }
}  // namespace

TEST_CASE("grid validation and refinement") {
  CHECK_THROWS_AS(Grid(-1.0, 1.0, 32), Error);
  CHECK_THROWS_AS(Grid(1.0, -1.0, 128), Error);
  CHECK_THROWS_AS(Grid(-1.0, 1.0, 128, 2), Error);
  const Grid g(-12.0, 12.0, 2048);
  const Grid r = g.refined();
  CHECK(r.size() == 4095);
  CHECK_THAT(r.spacing(), WithinAbs(g.spacing() / 2.0, 1e-15));
  CHECK(r.x(r.size() - 1) == 12.0);
}

TEST_CASE("stencils are exact on cubics") {
  const Grid g(-2.0, 3.0, 128);
  const CVector f = sample_complex(g, [](double x) { return cplx(x * x * x - 2.0 * x + 1.0); });
  const CVector df = sample_complex(g, [](double x) { return cplx(3.0 * x * x - 2.0); });
  const CVector d2f = sample_complex(g, [](double x) { return cplx(6.0 * x); });
  CHECK(max_interior(d1_op(g).apply(f) - df, 4) < 1e-12);
  CHECK(max_interior(d2_op(g).apply(f) - d2f, 4) < 1e-10);
}

TEST_CASE("first derivative converges at fourth order") {
  auto err = [](int n) {
    const Grid g(-3.0, 3.0, n);
    const CVector f = sample_complex(g, [](double x) { return cplx(std::sin(2.0 * x)); });
    const CVector df = sample_complex(g, [](double x) { return cplx(2.0 * std::cos(2.0 * x)); });
    return max_interior(d1_op(g).apply(f) - df, 4);
  };
  const double ratio = err(256) / err(511);
  CHECK(ratio > 13.0);
  CHECK(ratio < 19.0);
}

TEST_CASE("gauge functions are validated") {
  const Grid g(-4.0, 4.0, 256);
  GaugeFunctions gf = GaugeFunctions::cosh_pair(g, 10.0);
  CHECK(gf.derivative_mismatch() < 1e-4);
  gf.A(100) = 0.0;
  CHECK_THROWS_AS(gf.validate(), Error);
}

TEST_CASE("rho by quadrature matches the closed form and is anchored at zero") {
  const Grid g(-6.0, 6.0, 1024, 8);
  GaugeFunctions gf = GaugeFunctions::cosh_pair(g, 10.0);
  const RVector closed = rho_gauge(gf, model, g);
  gf.tag = GaugeTag::custom;
  const RVector quad = rho_gauge(gf, model, g);
  CHECK((quad.cwiseQuotient(closed).array() - 1.0).abs().maxCoeff() < 1e-10);
  CHECK_THAT(std::exp(-2.0 * model.alpha * 10.0 * g.x(0) / model.omega) / closed(0), WithinAbs(1.0, 1e-12));
}

TEST_CASE("symmetric position form is symmetric on narrow probes") {
  const Grid g = gauge_grid();
  const GaugeFunctions gf = GaugeFunctions::cosh_pair(g, 10.0);
  CHECK(detail::probe_symmetry(symmetric_hamiltonian(gf, model, g), g.margin()) < 1e-6);
}

TEST_CASE("U_eff is real and the reduced eigenvalue is 2 al / w") {
  const Grid g = gauge_grid();
  const SchrodingerModel sm = schrodinger_potential({model, 10.0, 5.0}, g);
  CHECK_THAT(sm.lambda_fixed, WithinAbs(2.0 * model.alpha / model.omega, 1e-15));
  CHECK(sm.V.allFinite());
  const SchrodingerModel sm2 = schrodinger_potential({model, 10.0, 9.0}, g);
  CHECK(sm2.lambda_fixed == sm.lambda_fixed);
}

TEST_CASE("printed position form differs from the composed ladder form") {
  const Grid g = gauge_grid();
  const GaugeFunctions gf = GaugeFunctions::cosh_pair(g, 10.0);
  const GridOperator printed = build_position_hamiltonian(gf, model, g);
  CHECK(probe_defect(printed - compose_position_hamiltonian(gf, model, g), printed, g.margin()) > 1e-4);
  const GaugeFunctions gf0 = GaugeFunctions::cosh_pair(g, 10.0);
  const ModelParams hermitian{3.0, 0.0};
  const GridOperator p0 = build_position_hamiltonian(gf0, hermitian, g);
  CHECK(probe_defect(p0 - compose_position_hamiltonian(gf0, hermitian, g), p0, g.margin()) < 1e-12);
}

TEST_CASE("whole-chain residual of an exact reduced state converges at fourth order") {
  const double d = 1.0;
  auto residual = [&](int n) {
    const Grid g(-4.0, 4.0, n, 8);
    const auto [eps, phi] = detail::consistent_chain_state(model, d, g);
    return gauge_chain_residual(phi, eps, {model, d, eps}, g);
  };
  const double coarse = residual(512), fine = residual(1023);
  CHECK(coarse < 1e-5);
  CHECK(coarse / fine > 12.0);
  const Grid gg = gauge_grid();
  const auto [eps, phi] = detail::consistent_chain_state(model, d, gg);
  CHECK_THAT(eps, WithinAbs(13.43712943, 1e-7));
  CHECK(gauge_chain_residual(phi, eps, {model, d, eps}, gg) < 1e-5);
}
