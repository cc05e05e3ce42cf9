#ifndef SSF_POTENTIAL_HPP
#define SSF_POTENTIAL_HPP

#include <Eigen/Dense>
#include <cmath>
#include <cstdint>
#include <functional>
#include <string>

#include "ssf/errors.hpp"

namespace ssf {

// <x> = sqrt(1 + x^2)
inline double bracket(double x) { return std::sqrt(1.0 + x * x); }

enum class PotentialFamily { zero, gaussian, square_well, smooth_bump };

const char* family_name(PotentialFamily f);
PotentialFamily family_from_name(const std::string& name);

struct DecayCertificate {
  double alpha = 0.0;     // decay exponent
  double constant = 0.0;  // fitted C with |V(x)| <= C <x>^-alpha
  bool valid = false;
};

// Bounded even potential V(x) = depth * shape(x / range).
struct Potential {
  PotentialFamily family = PotentialFamily::zero;
  double depth = 0.0;  // V0 (negative for attractive wells)
  double range = 1.0;  // a
  DecayCertificate certificate{};
  bool even_parity = true;

  double operator()(double x) const {
    const double t = x / range;
    switch (family) {
      case PotentialFamily::zero:
        return 0.0;
      case PotentialFamily::gaussian:
        return depth * std::exp(-t * t);
      case PotentialFamily::square_well:
        return std::abs(x) < range ? depth : 0.0;
      case PotentialFamily::smooth_bump: {
        const double s = std::abs(t);
        if (s >= 1.0) return 0.0;
        return depth * std::exp(1.0 - 1.0 / (1.0 - s * s));
      }
    }
    return 0.0;
  }

  Eigen::VectorXd sample(const Eigen::VectorXd& xs) const {
    Eigen::VectorXd v(xs.size());
    for (Eigen::Index i = 0; i < xs.size(); ++i) v[i] = (*this)(xs[i]);
    return v;
  }

  double sup_abs() const { return std::abs(depth); }

  // Discontinuity radii, for integrators that restart across jumps.
  bool has_jump() const { return family == PotentialFamily::square_well; }
  double jump_radius() const { return range; }

  // Effective range from the decay certificate: the radius at which the
  // certified envelope C <x>^-alpha falls to sup|V|.
  double effective_range() const {
    if (!certificate.valid || sup_abs() <= 0.0) return range;
    return std::pow(certificate.constant / sup_abs(), 1.0 / certificate.alpha);
  }
};

Potential make_potential(PotentialFamily family, double depth, double range);

// Certifies |V(x)| <= C <x>^-alpha by dense deterministic plus seeded random
// sampling over [0, base_range], then over doubled and quadrupled ranges.
// The certificate passes only if the fitted sup stabilizes across the range
// sweep; a slowly decaying V shows up as C growing with the range.
// Throws certificate_rejected when alpha <= dimension + 3.
DecayCertificate certify_decay(const std::function<double(double)>& V,
                               double alpha, int dimension, int sample_count,
                               double base_range = 20.0,
                               std::uint64_t seed = 0x5d3f1c2b9a17e64dULL);

DecayCertificate certify_decay(const Potential& V, double alpha, int dimension,
                               int sample_count, double base_range = 20.0,
                               std::uint64_t seed = 0x5d3f1c2b9a17e64dULL);

}  // namespace ssf

#endif
