#ifndef SSF_EXCESS_HPP
#define SSF_EXCESS_HPP

#include <span>
#include <vector>

#include "ssf/cutoff.hpp"
#include "ssf/eigensystem.hpp"
#include "ssf/transform.hpp"

namespace ssf {

// Sharp cutoff excess charge at energy lambda:
//   sum_{lambda_j(H) <= lambda} <v_j, theta_R^2 v_j>
// - sum_{lambda_j(H0) <= lambda} <u_j, theta_R^2 u_j>.
// Both systems must carry eigenvectors for every eigenvalue <= lambda.
// lambda is guarded against spectral degeneracy as in counting_difference.
double excess_charge_R(const Grid& grid, const EigenSystem& eigH,
                       const EigenSystem& eigH0, double lambda,
                       const CutoffProfile& profile,
                       CutoffGuard guard = CutoffGuard::enforce);

// Finite-box variant used for continuum estimates: the sharp spectral step is
// replaced by the same boundary-smoothed step the contour route uses
// (heights tied to the level spacing), evaluated on each entry of the
// transformed-plane schedule and extrapolated to zero height. States above
// the stored eigenvector cap enter through their smoothed weights times the
// box-average of theta_R^2 (they are delocalized, so the cutoff sees only
// their mean density).
double excess_charge_smoothed(const Grid& grid, const EigenSystem& eigH,
                              const EigenSystem& eigH0,
                              const TransformParams& params, double lambda,
                              const CutoffProfile& profile,
                              std::span<const double> eta_schedule,
                              CutoffGuard guard = CutoffGuard::enforce);

struct ExcessResult {
  double lambda = 0.0;
  std::vector<double> radii;
  std::vector<double> values;
  double z_inf = 0.0;
  double epsilon_hat = 0.0;   // fitted decay exponent, constrained to (0, 3)
  double residual = 0.0;      // rms of the fit residuals
  bool at_upper_constraint = false;  // epsilon pinned at the top of its window
};

struct ExtrapolateOptions {
  double residual_threshold = std::numeric_limits<double>::infinity();
  bool require_monotone_tail = false;
};

// Least-squares fit Z_R = Z_inf + c R^-epsilon over (Z_inf, c, epsilon) with
// epsilon scanned inside (0, 3); needs >= 4 geometrically spaced radii.
ExcessResult extrapolate_R(std::span<const double> radii,
                           std::span<const double> values,
                           const ExtrapolateOptions& opts = {});

}  // namespace ssf

#endif
