#ifndef SSF_CURVES_HPP
#define SSF_CURVES_HPP

#include <Eigen/Dense>
#include <string>

namespace ssf {

enum class SsfRoute { contour, determinant, counting, phase };

const char* route_name(SsfRoute r);

// Sampled spectral shift curve with provenance.
struct SSFCurve {
  Eigen::VectorXd lambdas;  // strictly increasing
  Eigen::VectorXd values;
  Eigen::VectorXd errors;   // per-sample error estimate (may be zero)
  SsfRoute route = SsfRoute::counting;
  double eta = 0.0;         // smoothing height used (0 = sharp)
  std::string grid_info;
};

void validate_curve(const SSFCurve& c);

}  // namespace ssf

#endif
