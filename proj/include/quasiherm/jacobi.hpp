#pragma once

#include <cmath>
#include <complex>
#include <string>

#include "quasiherm/error.hpp"

namespace quasiherm {

/// P_n^{(c1,c2)}(t) for complex parameters by the three-term degree recurrence
///   2k(k+s)(2k+s-2) P_k = (2k+s-1)((2k+s)(2k+s-2) t + c1^2 - c2^2) P_{k-1}
///                         - 2(k+c1-1)(k+c2-1)(2k+s) P_{k-2},   s = c1 + c2.
template <typename T = double>
std::complex<T> jacobi_complex(int n, std::complex<T> c1, std::complex<T> c2, T t) {
  using C = std::complex<T>;
  if (n < 0) fail(ErrorCode::invalid_parameter, "Jacobi degree must be non-negative");
  if (n == 0) return C(1);
  const C s = c1 + c2;
  C p_prev(1);
  C p = ((s + T(2)) * t + (c1 - c2)) / T(2);
  for (int k = 2; k <= n; ++k) {
    const T kk = static_cast<T>(k);
    const C lead = T(2) * kk * (kk + s) * (T(2) * kk + s - T(2));
    if (std::abs(lead) == T(0))
      fail(ErrorCode::special_function_domain, "Jacobi recurrence divides by zero at degree " + std::to_string(k));
    const C b = (T(2) * kk + s - T(1)) * ((T(2) * kk + s) * (T(2) * kk + s - T(2)) * t + c1 * c1 - c2 * c2);
    const C c = T(2) * (kk + c1 - T(1)) * (kk + c2 - T(1)) * (T(2) * kk + s);
    const C next = (b * p - c * p_prev) / lead;
    if (!std::isfinite(next.real()) || !std::isfinite(next.imag()))
      fail(ErrorCode::special_function_domain, "Jacobi recurrence overflowed");
    p_prev = p;
    p = next;
  }
  return p;
}

namespace detail {

/// Generalized binomial coefficient C(z, k) for complex z.
template <typename T>
std::complex<T> binomial(std::complex<T> z, int k) {
  std::complex<T> out(1);
  for (int j = 0; j < k; ++j) out *= (z - T(j)) / T(j + 1);
  return out;
}

}  // namespace detail

/// Explicit finite sum sum_s C(n+c1, n-s) C(n+c2, s) ((t-1)/2)^s ((t+1)/2)^(n-s).
template <typename T = double>
std::complex<T> jacobi_explicit(int n, std::complex<T> c1, std::complex<T> c2, T t) {
  using C = std::complex<T>;
  if (n < 0) fail(ErrorCode::invalid_parameter, "Jacobi degree must be non-negative");
  C sum(0);
  const T lo = (t - T(1)) / T(2), hi = (t + T(1)) / T(2);
  for (int s = 0; s <= n; ++s)
    sum += detail::binomial(C(T(n)) + c1, n - s) * detail::binomial(C(T(n)) + c2, s) * std::pow(lo, s) *
           std::pow(hi, n - s);
  return sum;
}

}  // namespace quasiherm
