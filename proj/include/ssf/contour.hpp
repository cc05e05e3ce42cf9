#ifndef SSF_CONTOUR_HPP
#define SSF_CONTOUR_HPP

#include <complex>
#include <vector>

#include "ssf/transform.hpp"

namespace ssf {

// Integration path in the closed upper half plane: a vertical lift from the
// real anchor w0 to w0 + i eta, then a horizontal run to the end point.
// w0 sits strictly above both transformed spectra, so the path touches the
// real axis only there.
struct Contour {
  double start = 0.0;                       // w0
  std::complex<double> end{0.0, 0.0};       // mu(lambda) + i eta
  std::vector<std::complex<double>> nodes;  // polyline, nodes.front() == start
  double eta = 0.0;                         // height of the horizontal run
};

// Anchor above both transformed spectra: w0 = mu(lambda_floor - 1) with
// lambda_floor = min(min eigenvalue of H, 0) <= both spectra.
inline double contour_anchor(const EigenSystem& eigH, const EigenSystem& eigH0,
                             const TransformParams& params) {
  const double lambda_floor = std::min(std::min(eigH.min_eigenvalue(), eigH0.min_eigenvalue()), 0.0);
  validate_transform(params, std::min(eigH.min_eigenvalue(), eigH0.min_eigenvalue()));
  return transformed_energy(lambda_floor - 1.0, params);
}

Contour make_contour(const EigenSystem& eigH, const EigenSystem& eigH0,
                     const TransformParams& params, double lambda, double eta);

}  // namespace ssf

#endif
