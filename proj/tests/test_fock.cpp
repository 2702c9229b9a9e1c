#include <catch_amalgamated.hpp>

#include "quasiherm/fock.hpp"
#include "quasiherm/spectrum.hpp"

using namespace quasiherm;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

static ErrorCode code_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("no error thrown");
  return ErrorCode::invalid_parameter;
}

TEST_CASE("FockDim validation") {
  CHECK_NOTHROW(FockDim(2, 0));
  CHECK_NOTHROW(FockDim(128, 8));
  CHECK(code_of([] { FockDim(1, 0); }) == ErrorCode::invalid_parameter);
  CHECK(code_of([] { FockDim(16, 8); }) == ErrorCode::invalid_parameter);
  CHECK(code_of([] { FockDim(16, -1); }) == ErrorCode::invalid_parameter);
  CHECK(FockDim(20, 4).interior() == 16);
}

TEST_CASE("ladder operators on N = 3") {
  const auto [a, ad] = ladder_ops(FockDim(3, 0));
  CHECK_THAT(a.matrix()(0, 1).real(), WithinAbs(1.0, 0.0));
  CHECK_THAT(a.matrix()(1, 2).real(), WithinAbs(std::sqrt(2.0), 1e-15));
  CHECK((ad.matrix() - a.matrix().adjoint()).norm() == 0.0);
  CHECK(number_op(FockDim(3, 0)).matrix().diagonal().real().isApprox(Eigen::Vector3d(0, 1, 2)));
}

TEST_CASE("canonical commutator holds away from the truncation edge") {
  const FockDim dim(40, 4);
  const auto [a, ad] = ladder_ops(dim);
  const FockOperator c = a * ad - ad * a;
  CHECK(relative_distance(c, FockOperator::identity(dim)) < 1e-14);
}

TEST_CASE("H on N = 4 matches the hand-built matrix") {
  const ModelParams p{3.0, 1.0};
  const FockOperator h = build_hamiltonian(p, FockDim(4, 0));
  CHECK_THAT(h.matrix()(1, 1).real(), WithinAbs(4.5, 1e-15));
  // a^2 term lands two above the diagonal, a+^2 two below, both with coefficient alpha
  CHECK_THAT(h.matrix()(0, 2).real(), WithinAbs(std::sqrt(2.0), 1e-15));
  CHECK_THAT(h.matrix()(2, 0).real(), WithinAbs(-std::sqrt(2.0), 1e-15));
}

TEST_CASE("PT symmetry holds for a grid of parameters") {
  for (double w : {0.5, 3.0, 10.0})
    for (double al : {0.0, 1.0, 4.0}) CHECK(pt_symmetry_defect(build_hamiltonian({w, al}, FockDim(64, 8))) < 1e-15);
}

TEST_CASE("hermiticity_defect") {
  const FockDim dim(32, 4);
  CHECK(hermiticity_defect(build_hamiltonian({3.0, 0.0}, dim)) == 0.0);
  CHECK(hermiticity_defect(build_hamiltonian({3.0, 1.0}, dim)) > 0.1);
  CHECK(code_of([&] { hermiticity_defect(FockOperator::zero(dim)); }) == ErrorCode::undefined_defect);
}

TEST_CASE("similarity transform by a singular matrix is rejected") {
  const FockDim dim(8, 0);
  CHECK(code_of([&] { similarity_transform(FockOperator::zero(dim), FockOperator::identity(dim)); }) ==
        ErrorCode::singular_transform);
}

TEST_CASE("truncated spectrum reproduces (n + 1/2) sqrt(w^2 + 4 al^2)") {
  const ModelParams p{3.0, 2.0};
  const SpectrumResult s = eigenvalues(build_hamiltonian(p, FockDim(128, 8)), false);
  for (int n = 0; n < 8; ++n) CHECK_THAT(s.eigenvalues[n].real(), WithinRel(5.0 * (n + 0.5), 1e-6));
  CHECK(s.max_residual < 1e-9);
}

TEST_CASE("alpha = 0 gives the oscillator spectrum exactly") {
  const SpectrumResult s = eigenvalues(build_hamiltonian({3.0, 0.0}, FockDim(32, 4)), true);
  for (int n = 0; n < 8; ++n) CHECK_THAT(s.eigenvalues[n].real(), WithinAbs(3.0 * (n + 0.5), 1e-12));
}

TEST_CASE("canonical pair reassembles a") {
  const FockDim dim(24, 4);
  const auto [x, p] = canonical_pair(3.0, dim);
  const FockOperator a = std::sqrt(1.5) * x + (I_unit / std::sqrt(6.0)) * p;
  CHECK(relative_distance(a, ladder_ops(dim).first) < 1e-14);
}
