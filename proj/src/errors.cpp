#include "ssf/errors.hpp"

namespace ssf {

const char* errc_name(errc code) {
  switch (code) {
    case errc::invalid_grid: return "invalid-grid";
    case errc::invalid_potential: return "invalid-potential";
    case errc::certificate_rejected: return "certificate-rejected";
    case errc::solver_failure: return "solver-failure";
    case errc::degenerate_energy: return "degenerate-energy";
    case errc::domain_coverage: return "domain-coverage";
    case errc::shift_too_small: return "shift-too-small";
    case errc::pole_proximity: return "pole-proximity";
    case errc::boundary_limit_unstable: return "boundary-limit-unstable";
    case errc::path_refinement: return "path-refinement";
    case errc::invalid_beta: return "invalid-beta";
    case errc::box_contamination: return "box-contamination";
    case errc::extrapolation_unreliable: return "extrapolation-unreliable";
    case errc::resonant_matching: return "resonant-matching";
    case errc::refine_grid: return "refine-grid";
    case errc::config_error: return "config-error";
  }
  return "unknown-error";
}

}  // namespace ssf
