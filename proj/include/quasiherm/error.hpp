#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace quasiherm {

enum class ErrorCode {
  invalid_parameter,
  numeric_overflow,
  singular_transform,
  undefined_defect,
  eigensolver_failure,
  outside_algebra,
  condition_singular,
  no_real_metric,
  closed_form_singular,
  closed_form_domain,
  fit_failure,
  gauge_singular,
  zero_norm,
  complex_susy_a,
  degenerate_superpotential,
  intertwiner_singular,
  spectrum_pole,
  special_function_domain,
};

constexpr std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::invalid_parameter: return "invalid-parameter";
    case ErrorCode::numeric_overflow: return "numeric-overflow";
    case ErrorCode::singular_transform: return "singular-transform";
    case ErrorCode::undefined_defect: return "undefined-defect";
    case ErrorCode::eigensolver_failure: return "eigensolver-failure";
    case ErrorCode::outside_algebra: return "outside-algebra";
    case ErrorCode::condition_singular: return "condition-singular";
    case ErrorCode::no_real_metric: return "no-real-metric";
    case ErrorCode::closed_form_singular: return "closed-form-singular";
    case ErrorCode::closed_form_domain: return "closed-form-domain";
    case ErrorCode::fit_failure: return "fit-failure";
    case ErrorCode::gauge_singular: return "gauge-singular";
    case ErrorCode::zero_norm: return "zero-norm";
    case ErrorCode::complex_susy_a: return "complex-susy-a";
    case ErrorCode::degenerate_superpotential: return "degenerate-superpotential";
    case ErrorCode::intertwiner_singular: return "intertwiner-singular";
    case ErrorCode::spectrum_pole: return "spectrum-pole";
    case ErrorCode::special_function_domain: return "special-function-domain";
  }
  return "unknown";
}

/// Every library failure carries a machine-readable code; what() is prefixed
/// with the code's kebab-case name.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& detail)
      : std::runtime_error(std::string(to_string(code)) + ": " + detail), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

[[noreturn]] inline void fail(ErrorCode code, const std::string& detail) { throw Error(code, detail); }

}  // namespace quasiherm
