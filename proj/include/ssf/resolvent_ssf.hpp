#ifndef SSF_RESOLVENT_SSF_HPP
#define SSF_RESOLVENT_SSF_HPP

#include <complex>
#include <span>
#include <vector>

#include "ssf/contour.hpp"
#include "ssf/eigensystem.hpp"
#include "ssf/grid.hpp"
#include "ssf/transform.hpp"

namespace ssf {

// Tr[(A - w)^-1 - (A0 - w)^-1] as the exact finite sum over transformed
// eigenvalue pairs. Real w must keep distance >= 1e-14 from every pole.
std::complex<double> trace_resolvent_diff(const EigenSystem& eigH,
                                          const EigenSystem& eigH0,
                                          const TransformParams& params,
                                          std::complex<double> w);

// Continuous branch of log det[(A - z)(A0 - z)^-1] along the path, anchored
// at the real start where the determinant is positive (Im log = 0). Segments
// are subdivided until consecutive Im increments stay below pi/2; failure to
// achieve that raises path_refinement.
std::complex<double> log_perturbation_determinant(const EigenSystem& eigH,
                                                  const EigenSystem& eigH0,
                                                  const TransformParams& params,
                                                  const Contour& path);

struct SsfPoint {
  double value = 0.0;          // eta -> 0 extrapolant
  double error = 0.0;          // spread of the last two extrapolants
  std::vector<double> per_eta; // pre-extrapolation values, one per schedule entry
};

// Boundary-value SSF at energy lambda: for each smoothing height in the
// schedule (transformed-plane units, decreasing, >= 3 entries) integrates the
// resolvent-trace difference along the two-segment contour by adaptive
// quadrature, negates per the invariance relation, then extrapolates the
// heights to zero with a degree-<=2 polynomial over the trailing window.
// spread_tolerance (if finite) turns an excessive extrapolation spread into a
// boundary_limit_unstable error.
SsfPoint ssf_contour(const EigenSystem& eigH, const EigenSystem& eigH0,
                     const TransformParams& params, double lambda,
                     std::span<const double> eta_schedule,
                     double quad_tol = 1e-9,
                     double spread_tolerance =
                         std::numeric_limits<double>::infinity());

// Same boundary values through the determinant route: -(1/pi) Im log Delta at
// mu(lambda) + i eta for each height, extrapolated identically.
SsfPoint ssf_determinant(const EigenSystem& eigH, const EigenSystem& eigH0,
                         const TransformParams& params, double lambda,
                         std::span<const double> eta_schedule);

// Geometric schedule eta_j = eta0 * ratio^j, j = 0..count-1.
std::vector<double> geometric_schedule(double eta0, double ratio, int count);

// Transformed-plane smoothing heights from energy-unit factors times the
// local free level spacing (the double-scale rule: heights tied to the box).
std::vector<double> smoothing_schedule(const Grid& grid, double lambda,
                                       const TransformParams& params,
                                       std::span<const double> spacing_factors);

// Half-gap (transformed units) between mu(lambda) and the nearest transformed
// eigenvalue of either system; seeds eta0 for fixed-grid eta -> 0 runs.
double transformed_gap(const EigenSystem& eigH, const EigenSystem& eigH0,
                       const TransformParams& params, double lambda);

struct Extrapolated {
  double value = 0.0;
  double error = 0.0;
};

// Polynomial-in-eta extrapolation to zero, degree min(2, n-1), fitted on
// trailing windows; the error is the spread of the last two window
// extrapolants.
Extrapolated extrapolate_to_zero(std::span<const double> etas,
                                 std::span<const double> values);

}  // namespace ssf

#endif
