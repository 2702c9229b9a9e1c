#include <catch_amalgamated.hpp>

#include "quasiherm/quadratic.hpp"

using namespace quasiherm;
using Catch::Matchers::WithinAbs;

TEST_CASE("extraction recovers a known quadratic combination") {
  const FockDim dim(32, 8);
  QuadraticOperator q;
  q[QBasis::identity] = 0.5;
  q[QBasis::number] = 3.0;
  q[QBasis::a2] = 1.0;
  q[QBasis::adag2] = -1.0;
  const Extraction e = extract_quadratic(q.materialize(dim));
  CHECK(e.residual < 1e-14);
  for (int k = 0; k < quad_size; ++k) CHECK(std::abs(e.op.c(k) - q.c(k)) < 1e-13);
}

TEST_CASE("ad_N acts diagonally with weights from [N, a] = -a") {
  const AdjointMatrix ad = adjoint_matrix(quadratic_basis(QBasis::number), FockDim(32, 8));
  CHECK(ad.residual < 1e-12);
  const auto idx = [](QBasis b) { return static_cast<int>(b); };
  CHECK_THAT(ad.ad(idx(QBasis::a), idx(QBasis::a)).real(), WithinAbs(-1.0, 1e-13));
  CHECK_THAT(ad.ad(idx(QBasis::adag), idx(QBasis::adag)).real(), WithinAbs(1.0, 1e-13));
  CHECK_THAT(ad.ad(idx(QBasis::a2), idx(QBasis::a2)).real(), WithinAbs(-2.0, 1e-13));
}

TEST_CASE("conjugation by exp(ad) inverts") {
  const AdjointMatrix ad = adjoint_matrix(quadratic_basis(QBasis::a2) - quadratic_basis(QBasis::adag2), FockDim(32, 8));
  const QMatrix m = 0.37 * ad.ad;
  const QuadraticOperator b = quadratic_basis(QBasis::a);
  const QuadraticOperator back = conjugate_by_exp(QMatrix(-m), conjugate_by_exp(m, b));
  CHECK((back - b).c.norm() < 1e-14);
}

TEST_CASE("adjoint maps a to a+ and conjugates coefficients") {
  QuadraticOperator q;
  q[QBasis::a] = cplx(1.0, 2.0);
  const QuadraticOperator qa = q.adjoint();
  CHECK(qa[QBasis::adag] == cplx(1.0, -2.0));
  CHECK(qa[QBasis::a] == cplx(0.0, 0.0));
}

TEST_CASE("adjoint_matrix needs room below the truncation") {
  CHECK_THROWS_AS(adjoint_matrix(quadratic_basis(QBasis::number), FockDim(32, 2)), Error);
}
