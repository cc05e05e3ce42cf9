#ifndef SSF_SCATTERING_HPP
#define SSF_SCATTERING_HPP

#include <Eigen/Dense>
#include <vector>

#include "ssf/potential.hpp"

namespace ssf {

enum class ChannelKind { radial, even_1d, odd_1d };

const char* channel_name(ChannelKind k);

// Matching radius: smallest r with |V(r)| r^2 < 1e-10, plus one de Broglie
// wavelength so the matching window sits well inside the free region.
double auto_match_radius(const Potential& V, double k);

// Default integrator step, small enough for 1e-6 phase accuracy up to k ~ 10.
double default_phase_step(double k);

// Partial-wave phase shift mod pi at momentum k. The radial equation
// u'' = (l(l+1)/r^2 + V - k^2) u is integrated outward from the origin with
// the regular r^{l+1} series start by a fourth-order three-term recurrence,
// restarting across potential jumps, and matched against free spherical
// solutions at two points near r_match.
double phase_shift_radial(const Potential& V, int ell, double k,
                          double r_match, double step);
double phase_shift_radial(const Potential& V, int ell, double k);

// Even/odd half-line phases for parity-decomposed 1D scattering (even
// potentials only): Neumann (even) or Dirichlet (odd) condition at 0, matched
// against cos/sin free solutions.
double phase_shift_1d_parity(const Potential& V, ChannelKind parity, double k,
                             double r_match, double step);
double phase_shift_1d_parity(const Potential& V, ChannelKind parity, double k);

// Continuous phase curve over an ascending momentum grid.
struct PhaseCurve {
  ChannelKind kind = ChannelKind::radial;
  int ell = 0;
  Eigen::VectorXd k;       // ascending
  Eigen::VectorXd delta;   // unwrapped, anchored near 0 at high k
  double match_radius = 0.0;

  // Fresh mod-pi evaluation lifted onto the curve's branch.
  double at(const Potential& V, double k_eval) const;
};

// Lifts raw mod-pi samples into a continuous curve, walking down from the
// high-momentum end where the phase sits near zero. Ambiguous lifts (two
// candidates within 0.1) raise refine_grid; the high-k anchor must satisfy
// |delta(k_max)| < 0.2.
PhaseCurve unwrap_phase(ChannelKind kind, int ell, const Eigen::VectorXd& k_grid,
                        const Eigen::VectorXd& raw_mod_pi, double match_radius);

// Computes raw phases on the grid and unwraps them.
PhaseCurve phase_curve(const Potential& V, ChannelKind kind, int ell,
                       const Eigen::VectorXd& k_grid);

// Channel cap: ceil(k a_eff) + 8 with a_eff from the decay certificate.
int lmax_policy(double k, const Potential& V);

struct TotalPhaseResult {
  double theta = 0.0;
  double tail_bound = 0.0;  // geometric bound on the dropped channels
  int lmax = 0;
};

// theta(lambda) = (1/pi) sum_l (2l+1) delta_l(sqrt(lambda)) over radial
// channels, with a geometric tail bound from the last three channels.
TotalPhaseResult total_phase_radial(const std::vector<PhaseCurve>& channels,
                                    const Potential& V, double lambda);

// theta(lambda) = (delta_even + delta_odd)/pi at k = sqrt(lambda).
double total_phase_1d(const PhaseCurve& even, const PhaseCurve& odd,
                      const Potential& V, double lambda);

struct LevinsonResult {
  bool pass = false;
  double residual = 0.0;
  double expected = 0.0;
};

// Threshold consistency: the unwrapped phase at the curve's lowest momentum
// against pi * N (radial / odd channels) or pi * (N - 1/2) (1D even channel
// with N >= 1; the generic even channel carries the half-step offset).
LevinsonResult levinson_check(const PhaseCurve& curve, int bound_state_count,
                              double tolerance = 0.15);

}  // namespace ssf

#endif
