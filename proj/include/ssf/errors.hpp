#ifndef SSF_ERRORS_HPP
#define SSF_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace ssf {

// Failure taxonomy. The CLI maps these onto process exit codes:
// config_error -> 2, solver_failure -> 3, everything else surfaces as a
// numerical-check failure (1) unless caught and recorded in the report.
enum class errc {
  invalid_grid,
  invalid_potential,
  certificate_rejected,
  solver_failure,
  degenerate_energy,
  domain_coverage,
  shift_too_small,
  pole_proximity,
  boundary_limit_unstable,
  path_refinement,
  invalid_beta,
  box_contamination,
  extrapolation_unreliable,
  resonant_matching,
  refine_grid,
  config_error,
};

const char* errc_name(errc code);

class Error : public std::runtime_error {
public:
  Error(errc code, const std::string& message)
      : std::runtime_error(std::string(errc_name(code)) + ": " + message),
        code_(code) {}

  errc code() const { return code_; }

private:
  errc code_;
};

[[noreturn]] inline void fail(errc code, const std::string& message) {
  throw Error(code, message);
}

}  // namespace ssf

#endif
