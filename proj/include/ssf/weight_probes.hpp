#ifndef SSF_WEIGHT_PROBES_HPP
#define SSF_WEIGHT_PROBES_HPP

#include <Eigen/Dense>
#include <span>
#include <vector>

#include "ssf/eigensystem.hpp"
#include "ssf/grid.hpp"
#include "ssf/potential.hpp"
#include "ssf/transform.hpp"

namespace ssf {

// Admissible weight-exponent window 3/2 < beta < (alpha - dimension)/2.
void validate_beta(double beta, double alpha, int dimension);
double beta_window_midpoint(double alpha, int dimension);

struct WeightProbe {
  double beta = 0.0;
  std::vector<int> grid_sizes;                // refinement ladder (N values)
  std::vector<double> singular_value_sums;    // trace norms of the weighted difference
  std::vector<double> etas;                   // boundary-limit schedule (energy units)
  std::vector<double> norms;                  // weighted resolvent-product norms
};

// Trace norm of <x>^beta (A - A0) <x>^beta across a ladder of grid
// refinements (N doubling at fixed box). A and A0 come from full
// eigendecompositions, exact on each grid.
WeightProbe w_trace_probe(const Grid& base_grid, int refinements,
                          const Potential& potential,
                          const TransformParams& params, double beta,
                          int dimension);

// Operator norms of <x>^-beta (A0 - mu(lambda + i eta))^-1
// (A - mu(lambda + i eta))^-1 <x>^-beta along a decreasing eta schedule
// (energy units). Requires full eigenvector sets.
std::vector<double> boundary_limit_probe(const Grid& grid,
                                         const EigenSystem& eigH,
                                         const EigenSystem& eigH0,
                                         const TransformParams& params,
                                         double lambda, double beta,
                                         std::span<const double> eta_schedule);

}  // namespace ssf

#endif
