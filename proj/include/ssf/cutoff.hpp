#ifndef SSF_CUTOFF_HPP
#define SSF_CUTOFF_HPP

#include <Eigen/Dense>
#include <cmath>

#include "ssf/errors.hpp"
#include "ssf/grid.hpp"

namespace ssf {

// Smooth cutoff: theta(t) = 1 for |t| <= plateau, 0 for |t| >= 1, with a
// C-infinity exponential step between. theta_R(x) = theta(x/R).
struct CutoffProfile {
  double radius = 1.0;    // R
  double plateau = 0.5;   // fraction of R where theta stays 1
};

inline double cutoff_shape(double t, double plateau) {
  const double s = std::abs(t);
  if (s <= plateau) return 1.0;
  if (s >= 1.0) return 0.0;
  const double u = (s - plateau) / (1.0 - plateau);
  const double g1 = std::exp(-1.0 / (1.0 - u));
  const double g0 = std::exp(-1.0 / u);
  return g1 / (g1 + g0);
}

inline double cutoff_value(const CutoffProfile& p, double x) {
  return cutoff_shape(x / p.radius, p.plateau);
}

enum class CutoffGuard { enforce, bypass };

// Per-node weights theta(x_i/R)^2 (the trace sandwiches theta on both sides).
// The box-contamination guard keeps the full-weight plateau within L/5.
Eigen::VectorXd cutoff_weights(const Grid& grid, const CutoffProfile& profile,
                               CutoffGuard guard = CutoffGuard::enforce);

}  // namespace ssf

#endif
