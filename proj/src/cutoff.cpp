#include "ssf/cutoff.hpp"

#include <sstream>

namespace ssf {

Eigen::VectorXd cutoff_weights(const Grid& grid, const CutoffProfile& profile,
                               CutoffGuard guard) {
  if (!(profile.radius > 0.0))
    fail(errc::box_contamination, "cutoff radius must be positive");
  if (!(profile.plateau > 0.0) || !(profile.plateau < 1.0))
    fail(errc::box_contamination, "plateau fraction must lie in (0, 1)");
  if (guard == CutoffGuard::enforce) {
    // Full-weight plateau must stay within a fifth of the box.
    const double plateau_radius = profile.plateau * profile.radius;
    if (plateau_radius > grid.half_width / 5.0 + 1e-12) {
      std::ostringstream msg;
      msg << "cutoff plateau " << plateau_radius << " exceeds L/5 = "
          << grid.half_width / 5.0;
      fail(errc::box_contamination, msg.str());
    }
  }
  Eigen::VectorXd w(grid.points);
  for (int i = 0; i < grid.points; ++i) {
    const double t = cutoff_value(profile, grid.node(i));
    w[i] = t * t;
  }
  return w;
}

}  // namespace ssf
