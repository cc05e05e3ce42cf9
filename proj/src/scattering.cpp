#include "ssf/scattering.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <sstream>
#include <vector>

#include "ssf/errors.hpp"
#include "ssf/grid.hpp"

namespace ssf {

const char* channel_name(ChannelKind k) {
  switch (k) {
    case ChannelKind::radial: return "radial";
    case ChannelKind::even_1d: return "even";
    case ChannelKind::odd_1d: return "odd";
  }
  return "unknown";
}

double auto_match_radius(const Potential& V, double k) {
  double r = 0.5 * V.range;
  while (std::abs(V(r)) * r * r >= 1e-10 && r < 200.0 * V.range)
    r += 0.25 * V.range;
  return r + 2.0 * kPi / std::max(k, 1e-6);
}

double default_phase_step(double k) {
  return std::min(2e-3, 2.0 * kPi / (800.0 * std::max(k, 0.5)));
}

namespace {

// Riccati-Bessel pair: S_l(x) = x j_l(x) ~ sin(x - l pi/2),
// C_l(x) = -x y_l(x) ~ cos(x - l pi/2).
struct RiccatiPair {
  double S, C;
};

RiccatiPair riccati(int ell, double x) {
  const double s0 = std::sin(x), c0 = std::cos(x);
  if (ell == 0) return {s0, c0};

  // C: upward recurrence is stable for the irregular solution.
  double cm = c0, cc = c0 / x + s0;
  for (int l = 1; l < ell; ++l) {
    const double cn = (2.0 * l + 1.0) / x * cc - cm;
    cm = cc;
    cc = cn;
  }

  double S;
  if (static_cast<double>(ell) < 0.8 * x) {
    double sm = s0, sc = s0 / x - c0;
    for (int l = 1; l < ell; ++l) {
      const double sn = (2.0 * l + 1.0) / x * sc - sm;
      sm = sc;
      sc = sn;
    }
    S = sc;
  } else {
    // Downward (Miller) recurrence, normalized against S_0 or S_1.
    const int start = ell + 20 + static_cast<int>(std::sqrt(40.0 * ell + x));
    double tp = 0.0, tc = 1e-280, target = 0.0;
    for (int l = start; l >= 1; --l) {
      const double tm = (2.0 * l + 1.0) / x * tc - tp;
      tp = tc;
      tc = tm;
      if (l - 1 == ell) target = tc;
      if (std::abs(tc) > 1e250) {
        tp *= 1e-250;
        tc *= 1e-250;
        target *= 1e-250;
      }
    }
    const double s1 = s0 / x - c0;
    // tc ~ S_0, tp ~ S_1 up to the common normalization.
    const double scale = (std::abs(tc) >= std::abs(tp)) ? s0 / tc : s1 / tp;
    S = target * scale;
  }
  return {S, cc};
}

struct SweepState {
  double u_last = 0.0;       // u at the final node
  double u_probe = 0.0;      // u at the requested probe node (same scaling)
  std::vector<double> tail;  // last 5 u values, for one-sided derivatives
};

// Numerov sweep of u'' = q(r) u over nodes r0 + i h, i = 0..n, with u given on
// the first two nodes. Renormalizations against overflow rescale every
// recorded value, so ratios stay exact.
SweepState numerov_sweep(const std::function<double(double)>& q, double r0,
                         double h, int n, double u0, double u1, int probe_i) {
  std::vector<double> last(5, 0.0);
  auto push = [&last](double v) {
    last[0] = last[1]; last[1] = last[2]; last[2] = last[3]; last[3] = last[4];
    last[4] = v;
  };
  double w0 = (1.0 - h * h / 12.0 * q(r0)) * u0;
  double w1 = (1.0 - h * h / 12.0 * q(r0 + h)) * u1;
  double uc = u1;
  double probe = 0.0;
  if (probe_i == 0) probe = u0;
  if (probe_i == 1) probe = u1;
  push(u0);
  push(u1);
  for (int i = 1; i < n; ++i) {
    const double qi = q(r0 + h * i);
    const double qn = q(r0 + h * (i + 1));
    const double w2 = 2.0 * w1 - w0 + h * h * qi * uc;
    const double un = w2 / (1.0 - h * h / 12.0 * qn);
    w0 = w1;
    w1 = w2;
    uc = un;
    push(un);
    if (i + 1 == probe_i) probe = un;
    if (std::abs(uc) > 1e250) {
      const double s = 1e-250;
      w0 *= s; w1 *= s; uc *= s; probe *= s;
      for (double& v : last) v *= s;
    }
  }
  SweepState st;
  st.u_last = uc;
  st.u_probe = probe;
  st.tail = last;
  return st;
}

struct ChannelSpec {
  int ell = 0;            // centrifugal index (0 for 1D channels)
  bool even_start = false;  // Neumann start at the origin
};

// Integrates the channel equation from the origin to r_match, restarting
// across potential jumps with a Taylor step built from one-sided data.
// Returns u at two matching nodes on the final mesh, ~sep apart.
struct EndValues {
  double r1, r2, u1, u2;
};

EndValues integrate_channel(const Potential& V, const ChannelSpec& ch, double k,
                            double r_match, double step, double sep) {
  const double ll1 = static_cast<double>(ch.ell) * (ch.ell + 1.0);
  std::vector<double> breaks;
  if (V.has_jump() && V.jump_radius() < r_match - sep - 4.0 * step)
    breaks.push_back(V.jump_radius());
  breaks.push_back(r_match);

  // Segment-interior potential: endpoints evaluated a hair inside, so a jump
  // node takes its one-sided limit.
  auto segment_q = [&V, ll1, k](double lo, double hi) {
    return [&V, ll1, k, lo, hi](double r) {
      const double margin = 1e-9 * (hi - lo);
      const double rc = std::clamp(r, lo + margin, hi - margin);
      const double cf = (ll1 > 0.0 && r > 0.0) ? ll1 / (r * r) : 0.0;
      return cf + V(rc) - k * k;
    };
  };

  double seg_lo = 0.0;
  double h = 0.0;
  EndValues ev{};
  SweepState st;
  bool first = true;
  for (std::size_t s = 0; s < breaks.size(); ++s) {
    const double seg_hi = breaks[s];
    const bool last_segment = (s + 1 == breaks.size());
    const double len = seg_hi - seg_lo;
    const int n_steps = std::max(8, static_cast<int>(std::lround(len / step)));
    h = len / static_cast<double>(n_steps);
    auto q = segment_q(seg_lo, seg_hi);
    int probe_i = -1;
    if (last_segment) {
      probe_i = n_steps - std::max(2, static_cast<int>(std::lround(sep / h)));
      probe_i = std::max(probe_i, 2);
    }

    if (first) {
      first = false;
      // Regular series start u = r^{l+1} (1 + c1 r^2 + c2 r^4) from the
      // smooth part qt = V - k^2 of the channel equation; even 1D channels
      // instead start flat at the origin.
      const double hq = std::min(h, 0.25 * V.range);
      const double v00 = V(hq * 1e-3);
      const double qt0 = v00 - k * k;
      const double qt2 = (V(2.0 * hq) - 2.0 * V(hq) + v00) / (2.0 * hq * hq);
      if (ch.even_start) {
        const double q2v = 2.0 * qt2;  // q''(0); q'(0) = 0 for even V
        const double u1 = 1.0 + 0.5 * qt0 * h * h +
                          (q2v + qt0 * qt0) * h * h * h * h / 24.0;
        st = numerov_sweep(q, 0.0, h, n_steps, 1.0, u1, probe_i);
      } else {
        const double c1 = qt0 / (4.0 * ch.ell + 6.0);
        const double c2 = (qt0 * c1 + qt2) / (8.0 * ch.ell + 20.0);
        auto series = [&](double r) {
          return std::pow(r, ch.ell + 1) * (1.0 + c1 * r * r + c2 * r * r * r * r);
        };
        // Start nodes sit at h and 2h; node i of this sweep is (i+1) h.
        st = numerov_sweep(q, h, h, n_steps - 1, series(h), series(2.0 * h),
                           probe_i < 0 ? -1 : probe_i - 1);
      }
    } else {
      // One-sided 4th-order derivative at the previous segment's end, then a
      // Taylor step with right-side q data opens the new segment.
      const auto& t = st.tail;
      const double up = (25.0 * t[4] - 48.0 * t[3] + 36.0 * t[2] -
                         16.0 * t[1] + 3.0 * t[0]) / (12.0 * h);
      const double ua = st.u_last;
      const double q0v = q(seg_lo);
      const double q1v = q(seg_lo + h);
      const double q2v = q(seg_lo + 2.0 * h);
      const double qp = (-3.0 * q0v + 4.0 * q1v - q2v) / (2.0 * h);
      const double qpp = (q0v - 2.0 * q1v + q2v) / (h * h);
      const double un = ua + h * up + 0.5 * h * h * q0v * ua +
                        h * h * h / 6.0 * (qp * ua + q0v * up) +
                        h * h * h * h / 24.0 *
                            (qpp * ua + 2.0 * qp * up + q0v * q0v * ua);
      st = numerov_sweep(q, seg_lo, h, n_steps, ua, un, probe_i);
    }

    if (last_segment) {
      // probe_i counts nodes from seg_lo in either start convention.
      ev.r1 = seg_lo + h * static_cast<double>(probe_i);
      ev.r2 = seg_hi;
      ev.u1 = st.u_probe;
      ev.u2 = st.u_last;
    }
    seg_lo = seg_hi;
  }
  return ev;
}

double match_phase(ChannelKind kind, int ell, double k, const EndValues& ev) {
  auto free_pair = [&](double r) -> RiccatiPair {
    if (kind == ChannelKind::radial) return riccati(ell, k * r);
    return {std::sin(k * r), std::cos(k * r)};
  };
  const RiccatiPair f1 = free_pair(ev.r1);
  const RiccatiPair f2 = free_pair(ev.r2);
  const double scale = std::max(std::abs(ev.u1), std::abs(ev.u2));
  if (!(scale > 0.0) || !std::isfinite(scale))
    fail(errc::resonant_matching, "integration produced a vanishing solution");
  const double u1 = ev.u1 / scale, u2 = ev.u2 / scale;

  double num, den;
  if (kind == ChannelKind::even_1d) {
    // u ~ cos(k x + delta)
    num = u1 * f2.C - u2 * f1.C;
    den = u1 * f2.S - u2 * f1.S;
  } else {
    // u ~ S_l cos(delta) + C_l sin(delta) ~ sin(k r - l pi/2 + delta)
    num = u2 * f1.S - u1 * f2.S;
    den = u1 * f2.C - u2 * f1.C;
  }
  if (std::hypot(num, den) < 1e-14)
    fail(errc::resonant_matching, "matching denominators vanished");
  const double d = std::atan2(num, den);
  return d - kPi * std::round(d / kPi);  // principal value mod pi
}

double phase_shift_impl(const Potential& V, ChannelKind kind, int ell, double k,
                        double r_match, double step) {
  if (!(k > 0.0)) fail(errc::resonant_matching, "momentum must be positive");
  if (std::abs(V(r_match)) * r_match * r_match >= 1e-10)
    fail(errc::resonant_matching,
         "matching radius lies inside the effective potential range");
  if (kind != ChannelKind::radial && !V.even_parity)
    fail(errc::invalid_potential, "parity channels require an even potential");

  ChannelSpec ch;
  ch.ell = (kind == ChannelKind::radial) ? ell : 0;
  ch.even_start = (kind == ChannelKind::even_1d);

  const double sep = std::min(2.0, std::max(8.0 * step, kPi / (2.0 * k)));
  double rm = r_match;
  for (int attempt = 0; attempt < 3; ++attempt) {
    const EndValues ev = integrate_channel(V, ch, k, rm, step, sep);
    try {
      return match_phase(kind, ell, k, ev);
    } catch (const Error& e) {
      if (e.code() != errc::resonant_matching || attempt == 2) throw;
      rm += 0.5 * sep;
    }
  }
  fail(errc::resonant_matching, "matching failed after shifted retries");
}

}  // namespace

double phase_shift_radial(const Potential& V, int ell, double k,
                          double r_match, double step) {
  if (ell < 0) fail(errc::invalid_potential, "angular momentum must be nonnegative");
  return phase_shift_impl(V, ChannelKind::radial, ell, k, r_match, step);
}

double phase_shift_radial(const Potential& V, int ell, double k) {
  return phase_shift_radial(V, ell, k, auto_match_radius(V, k),
                            default_phase_step(k));
}

double phase_shift_1d_parity(const Potential& V, ChannelKind parity, double k,
                             double r_match, double step) {
  if (parity == ChannelKind::radial)
    fail(errc::invalid_potential, "parity channel must be even or odd");
  return phase_shift_impl(V, parity, 0, k, r_match, step);
}

double phase_shift_1d_parity(const Potential& V, ChannelKind parity, double k) {
  return phase_shift_1d_parity(V, parity, k, auto_match_radius(V, k),
                               default_phase_step(k));
}

namespace {

double principal_mod_pi(double v) {
  return v - kPi * std::round(v / kPi);
}

double raw_phase(const Potential& V, ChannelKind kind, int ell, double k) {
  if (kind == ChannelKind::radial) return phase_shift_radial(V, ell, k);
  return phase_shift_1d_parity(V, kind, k);
}

}  // namespace

PhaseCurve unwrap_phase(ChannelKind kind, int ell, const Eigen::VectorXd& k_grid,
                        const Eigen::VectorXd& raw_mod_pi, double match_radius) {
  const Eigen::Index n = k_grid.size();
  if (n < 2 || raw_mod_pi.size() != n)
    fail(errc::refine_grid, "need matching momentum and phase samples");
  for (Eigen::Index i = 0; i + 1 < n; ++i)
    if (!(k_grid[i] < k_grid[i + 1]))
      fail(errc::refine_grid, "momentum grid must be strictly increasing");

  PhaseCurve curve;
  curve.kind = kind;
  curve.ell = ell;
  curve.k = k_grid;
  curve.delta.resize(n);
  curve.match_radius = match_radius;

  // Anchor in the Born regime at the high-momentum end.
  curve.delta[n - 1] = principal_mod_pi(raw_mod_pi[n - 1]);
  if (!(std::abs(curve.delta[n - 1]) < 0.2))
    fail(errc::refine_grid, "high-momentum anchor is not near zero");

  for (Eigen::Index i = n - 2; i >= 0; --i) {
    const double target = curve.delta[i + 1];
    const double lifted = raw_mod_pi[i] +
                          kPi * std::round((target - raw_mod_pi[i]) / kPi);
    const double jump = std::abs(lifted - target);
    const double alt = kPi - jump;  // competing branch choice
    if (std::abs(alt - jump) < 0.1) {
      std::ostringstream msg;
      msg << "branch choice ambiguous at k = " << k_grid[i]
          << " (jumps " << jump << " vs " << alt << ")";
      fail(errc::refine_grid, msg.str());
    }
    curve.delta[i] = lifted;
  }
  return curve;
}

PhaseCurve phase_curve(const Potential& V, ChannelKind kind, int ell,
                       const Eigen::VectorXd& k_grid) {
  Eigen::VectorXd raw(k_grid.size());
  for (Eigen::Index i = 0; i < k_grid.size(); ++i)
    raw[i] = raw_phase(V, kind, ell, k_grid[i]);
  const double rm = auto_match_radius(V, k_grid[k_grid.size() - 1]);
  return unwrap_phase(kind, ell, k_grid, raw, rm);
}

double PhaseCurve::at(const Potential& V, double k_eval) const {
  const Eigen::Index n = k.size();
  if (k_eval <= k[0] || k_eval >= k[n - 1]) {
    if (k_eval < 0.5 * k[0] || k_eval > 1.5 * k[n - 1])
      fail(errc::refine_grid, "momentum outside the curve's range");
  }
  // Linear interpolant as the branch reference, fresh evaluation on top.
  Eigen::Index i = 0;
  while (i + 2 < n && k[i + 1] < k_eval) ++i;
  const double t = std::clamp((k_eval - k[i]) / (k[i + 1] - k[i]), 0.0, 1.0);
  const double ref = (1.0 - t) * delta[i] + t * delta[i + 1];
  const double raw = raw_phase(V, kind, ell, k_eval);
  return raw + kPi * std::round((ref - raw) / kPi);
}

int lmax_policy(double k, const Potential& V) {
  const double a_eff = V.effective_range();
  return static_cast<int>(std::ceil(k * a_eff)) + 8;
}

TotalPhaseResult total_phase_radial(const std::vector<PhaseCurve>& channels,
                                    const Potential& V, double lambda) {
  if (channels.empty()) fail(errc::refine_grid, "no channels supplied");
  const double k = std::sqrt(lambda);
  TotalPhaseResult out;
  out.lmax = static_cast<int>(channels.size()) - 1;
  std::vector<double> mags;
  for (const PhaseCurve& c : channels) {
    const double d = c.at(V, k);
    out.theta += (2.0 * c.ell + 1.0) * d / kPi;
    mags.push_back(std::abs(d));
  }
  // Geometric tail estimate from the last three channels.
  if (mags.size() >= 3) {
    const double m2 = mags[mags.size() - 1];
    const double m1 = mags[mags.size() - 2];
    const double m0 = mags[mags.size() - 3];
    double ratio = 0.5;
    if (m0 > 0.0 && m1 > 0.0) ratio = std::min(0.9, std::max(m1 / m0, m2 / std::max(m1, 1e-300)));
    const double l_next = 2.0 * (out.lmax + 1) + 1.0;
    out.tail_bound = l_next * m2 * ratio / (1.0 - ratio) / kPi;
  }
  return out;
}

double total_phase_1d(const PhaseCurve& even, const PhaseCurve& odd,
                      const Potential& V, double lambda) {
  const double k = std::sqrt(lambda);
  return (even.at(V, k) + odd.at(V, k)) / kPi;
}

LevinsonResult levinson_check(const PhaseCurve& curve, int bound_state_count,
                              double tolerance) {
  if (!(curve.k[0] <= 0.05))
    fail(errc::refine_grid, "curve does not reach small momenta");
  LevinsonResult res;
  if (curve.kind == ChannelKind::even_1d)
    res.expected = bound_state_count == 0
                       ? 0.0
                       : kPi * (bound_state_count - 0.5);
  else
    res.expected = kPi * bound_state_count;
  res.residual = std::abs(curve.delta[0] - res.expected);
  res.pass = res.residual < tolerance;
  return res;
}

}  // namespace ssf
