#include <catch_amalgamated.hpp>

#include "quasiherm/jacobi.hpp"

using namespace quasiherm;
using C = std::complex<double>;
using Catch::Matchers::WithinAbs;

TEST_CASE("low-degree Jacobi polynomials") {
  const C c1(0.3, 0.7), c2(1.1, -0.2);
  CHECK(jacobi_complex(0, c1, c2, 0.4) == C(1.0));
  const C p1 = jacobi_complex(1, c1, c2, 0.4);
  const C want = (c1 - c2) / 2.0 + (c1 + c2 + 2.0) * 0.4 / 2.0;
  CHECK(std::abs(p1 - want) < 1e-15);
}

TEST_CASE("Legendre special case") {
  // P_3(t) = (5t^3 - 3t) / 2
  const double t = 0.3;
  CHECK_THAT(jacobi_complex(3, C(0), C(0), t).real(), WithinAbs((5 * t * t * t - 3 * t) / 2, 1e-15));
}

TEST_CASE("recurrence agrees with the explicit sum for complex parameters") {
  const C c1(0.7366, 2.55), c2(0.7366, -2.55);
  for (int n = 0; n <= 8; ++n)
    for (double t : {-0.9, -0.2, 0.0, 0.5, 0.99}) {
      const C r = jacobi_complex(n, c1, c2, t), e = jacobi_explicit(n, c1, c2, t);
      CHECK(std::abs(r - e) <= 1e-12 * std::max(1.0, std::abs(e)));
    }
}

TEST_CASE("symmetry P_n^(c1,c2)(-t) = (-1)^n P_n^(c2,c1)(t)") {
  const C c1(1.5, 0.3), c2(0.4, -1.0);
  for (int n = 1; n <= 5; ++n) {
    const C lhs = jacobi_complex(n, c1, c2, -0.35);
    const C rhs = (n % 2 ? -1.0 : 1.0) * jacobi_complex(n, c2, c1, 0.35);
    CHECK(std::abs(lhs - rhs) < 1e-13);
  }
}

TEST_CASE("zero leading coefficient is a domain error") {
  // 2k(k+s)(2k+s-2) vanishes at k = 2 for s = -2
  try {
    jacobi_complex(2, C(-1.0), C(-1.0), 0.1);
    FAIL("expected special-function-domain");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::special_function_domain);
  }
  CHECK_THROWS_AS(jacobi_complex(-1, C(1.0), C(1.0), 0.1), Error);
}
