#ifndef SSF_TRANSFORM_HPP
#define SSF_TRANSFORM_HPP

#include <Eigen/Dense>
#include <complex>

#include "ssf/eigensystem.hpp"
#include "ssf/errors.hpp"

namespace ssf {

// Parameters of the energy map lambda -> (lambda + shift)^-power used to turn
// the unbounded pair (H, H0) into the bounded pair (A, A0) with spectra in
// (0, 1). Requires shift > 1 + max(0, -min eigenvalue).
struct TransformParams {
  double shift = 2.0;  // M
  int power = 1;       // positive integer
};

inline double transformed_energy(double lambda, const TransformParams& p) {
  return std::pow(lambda + p.shift, -static_cast<double>(p.power));
}

inline std::complex<double> transformed_energy(std::complex<double> z,
                                               const TransformParams& p) {
  return std::pow(z + p.shift, -static_cast<double>(p.power));
}

// |d mu / d lambda| = power * (lambda + shift)^-(power+1)
inline double transformed_slope(double lambda, const TransformParams& p) {
  return static_cast<double>(p.power) *
         std::pow(lambda + p.shift, -static_cast<double>(p.power + 1));
}

inline void validate_transform(const TransformParams& p, double min_eigenvalue) {
  if (p.power < 1) fail(errc::shift_too_small, "transform power must be >= 1");
  if (!(p.shift > 1.0 + std::max(0.0, -min_eigenvalue)))
    fail(errc::shift_too_small,
         "shift must exceed 1 + max(0, -min eigenvalue) so transformed spectra lie in (0,1)");
}

inline double default_shift(double min_eigenvalue) {
  return 2.0 + std::max(0.0, -min_eigenvalue);
}

// Maps every eigenvalue through the transform. Input ascending, output
// strictly decreasing (the map reverses order).
Eigen::VectorXd transform_spectrum(const EigenSystem& sys, const TransformParams& p);

}  // namespace ssf

#endif
