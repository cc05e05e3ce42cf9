#include "ssf/runners.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "ssf/cutoff.hpp"
#include "ssf/excess.hpp"
#include "ssf/parallel.hpp"
#include "ssf/resolvent_ssf.hpp"
#include "ssf/scattering.hpp"
#include "ssf/spectral.hpp"
#include "ssf/version.hpp"
#include "ssf/weight_probes.hpp"

namespace ssf {

namespace {

std::string hash_hex(std::uint64_t h) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

struct Channel {
  Grid grid;
  EigenSystem H;
  EigenSystem H0;
  int ell = 0;
};

// Shared per-run state: certified potential, transform, eigensystems.
// Dimension 1 carries the single line channel; dimension 3 one radial
// channel per angular momentum up to the channel cap.
struct Pipeline {
  ExperimentConfig cfg;
  Potential V;
  TransformParams params;
  std::vector<Channel> channels;

  double channel_weight(std::size_t i) const {
    return cfg.dimension == 3 ? 2.0 * channels[i].ell + 1.0 : 1.0;
  }
};

Pipeline build_pipeline(const ExperimentConfig& cfg, bool need_vectors) {
  Pipeline p;
  p.cfg = cfg;
  p.V = make_potential(cfg.family, cfg.depth, cfg.range);
  p.V.certificate =
      certify_decay(p.V, cfg.alpha, cfg.dimension, cfg.certify_samples,
                    20.0 * std::max(1.0, cfg.range), cfg.seed);
  if (!p.V.certificate.valid)
    fail(errc::certificate_rejected,
         "potential failed its decay certification sweep");

  const double cap = need_vectors
                         ? cfg.lambda_grid.back() + 3.0
                         : eigenvalues_only_cap();
  if (cfg.dimension == 1) {
    const Grid g = make_line_grid(cfg.box_half_width, cfg.grid_points);
    Channel ch{g, eigendecompose(build_perturbed(g, p.V), cap),
               eigendecompose(build_free(g), cap), 0};
    p.channels.push_back(std::move(ch));
  } else {
    const double k_top = std::sqrt(cfg.lambda_grid.back());
    const int lmax = cfg.lmax >= 0 ? cfg.lmax : lmax_policy(k_top, p.V);
    p.channels.resize(lmax + 1);
    parallel_for(lmax + 1, cfg.threads, [&](int ell) {
      const Grid g = make_radial_grid(cfg.box_half_width, cfg.grid_points, ell);
      p.channels[ell] = Channel{g, eigendecompose(build_perturbed(g, p.V), cap),
                                eigendecompose(build_free(g), cap), ell};
    });
  }

  double min_eig = 0.0;
  for (const Channel& ch : p.channels)
    min_eig = std::min(min_eig, ch.H.min_eigenvalue());
  p.params.power = cfg.power;
  p.params.shift = cfg.shift != 0.0 ? cfg.shift : default_shift(min_eig);
  for (const Channel& ch : p.channels)
    validate_transform(p.params,
                       std::min(ch.H.min_eigenvalue(), ch.H0.min_eigenvalue()));
  return p;
}

// Nudges lambda off every channel spectrum by a multiple of the guard.
double guarded_lambda(const Pipeline& p, double target) {
  double lam = target;
  for (int tries = 0; tries < 200; ++tries) {
    double dist = std::numeric_limits<double>::infinity();
    double guard = 0.0;
    for (const Channel& ch : p.channels) {
      guard = std::max(guard, degeneracy_guard(ch.H, ch.H0));
      for (const EigenSystem* sys : {&ch.H, &ch.H0}) {
        const auto& ev = sys->eigenvalues;
        const double* it = std::lower_bound(ev.data(), ev.data() + ev.size(), lam);
        if (it != ev.data() + ev.size()) dist = std::min(dist, std::abs(*it - lam));
        if (it != ev.data()) dist = std::min(dist, std::abs(*(it - 1) - lam));
      }
    }
    if (dist > 50.0 * guard) return lam;
    lam += 211.0 * guard;
  }
  fail(errc::degenerate_energy, "could not clear the spectra around the target energy");
}

struct XiPoint {
  double contour = 0.0, contour_err = 0.0;
  double determinant = 0.0, determinant_err = 0.0;
  double route_gap = 0.0;  // max per-height |contour - determinant|
};

// Channel-assembled boundary-value SSF through both routes.
XiPoint xi_point(const Pipeline& p, double lambda) {
  XiPoint out;
  for (std::size_t i = 0; i < p.channels.size(); ++i) {
    const Channel& ch = p.channels[i];
    const std::vector<double> sched = smoothing_schedule(
        ch.grid, lambda, p.params, p.cfg.eta_factors);
    const SsfPoint c = ssf_contour(ch.H, ch.H0, p.params, lambda, sched);
    const SsfPoint d = ssf_determinant(ch.H, ch.H0, p.params, lambda, sched);
    const double w = p.channel_weight(i);
    out.contour += w * c.value;
    out.contour_err += w * c.error;
    out.determinant += w * d.value;
    out.determinant_err += w * d.error;
    for (std::size_t e = 0; e < sched.size(); ++e)
      out.route_gap = std::max(out.route_gap,
                               std::abs(c.per_eta[e] - d.per_eta[e]));
  }
  return out;
}

// Channel-assembled smoothed excess charge across the radius schedule,
// dropping channels whose contribution stays below the truncation floor.
std::vector<double> z_profile(const Pipeline& p, double lambda) {
  const auto& radii = p.cfg.r_schedule;
  std::vector<double> assembled(radii.size(), 0.0);
  for (std::size_t i = 0; i < p.channels.size(); ++i) {
    const Channel& ch = p.channels[i];
    const std::vector<double> sched = smoothing_schedule(
        ch.grid, lambda, p.params, p.cfg.eta_factors);
    std::vector<double> zch(radii.size());
    double peak = 0.0;
    for (std::size_t r = 0; r < radii.size(); ++r) {
      const CutoffProfile prof{radii[r], p.cfg.plateau};
      zch[r] = excess_charge_smoothed(ch.grid, ch.H, ch.H0, p.params, lambda,
                                      prof, sched);
      peak = std::max(peak, std::abs(zch[r]));
    }
    if (p.cfg.dimension == 3 && peak < 1e-4) continue;  // channel truncation
    const double w = p.channel_weight(i);
    for (std::size_t r = 0; r < radii.size(); ++r) assembled[r] += w * zch[r];
  }
  return assembled;
}

struct PhaseSet {
  std::vector<PhaseCurve> curves;  // 1D: even, odd; 3D: per ell
};

Eigen::VectorXd momentum_grid(double k_lo, double k_hi, int points) {
  Eigen::VectorXd k(points);
  for (int i = 0; i < points; ++i)
    k[i] = k_lo + (k_hi - k_lo) * static_cast<double>(i) /
                      static_cast<double>(points - 1);
  return k;
}

PhaseSet build_phase_set(const Pipeline& p, double k_lo) {
  const ExperimentConfig& cfg = p.cfg;
  PhaseSet set;
  double k_hi = cfg.k_max;
  for (int attempt = 0;; ++attempt) {
    try {
      set.curves.clear();
      const Eigen::VectorXd kg = momentum_grid(k_lo, k_hi, cfg.k_points);
      if (cfg.dimension == 1) {
        set.curves.push_back(phase_curve(p.V, ChannelKind::even_1d, 0, kg));
        set.curves.push_back(phase_curve(p.V, ChannelKind::odd_1d, 0, kg));
      } else {
        const int lmax = static_cast<int>(p.channels.size()) - 1;
        set.curves.resize(lmax + 1);
        parallel_for(lmax + 1, cfg.threads, [&](int ell) {
          set.curves[ell] = phase_curve(p.V, ChannelKind::radial, ell, kg);
        });
      }
      return set;
    } catch (const Error& e) {
      // A Born anchor sitting on a branch edge is cured by a longer grid.
      if (e.code() != errc::refine_grid || attempt >= 2) throw;
      k_hi *= 1.17;
    }
  }
}

double theta_point(const Pipeline& p, const PhaseSet& set, double lambda) {
  if (p.cfg.dimension == 1)
    return total_phase_1d(set.curves[0], set.curves[1], p.V, lambda);
  return total_phase_radial(set.curves, p.V, lambda).theta;
}

RunReport make_report(const ExperimentConfig& cfg, const std::string& name) {
  RunReport rep;
  rep.subcommand = name;
  rep.version = kVersion;
  rep.config_hash = hash_hex(config_hash(cfg));
  return rep;
}

}  // namespace

RunReport run_ssf(const ExperimentConfig& cfg, const std::string& out_dir) {
  const Pipeline p = build_pipeline(cfg, false);
  RunReport rep = make_report(cfg, "ssf");

  const int n = static_cast<int>(cfg.lambda_grid.size());
  std::vector<double> lams(n);
  std::vector<XiPoint> xi(n);
  std::vector<double> counting(n);
  parallel_for(n, cfg.threads, [&](int i) {
    lams[i] = guarded_lambda(p, cfg.lambda_grid[i]);
    xi[i] = xi_point(p, lams[i]);
    double cd = 0.0;
    for (std::size_t c = 0; c < p.channels.size(); ++c)
      cd += p.channel_weight(c) *
            counting_difference(p.channels[c].H, p.channels[c].H0, lams[i]);
    counting[i] = cd;
  });

  std::vector<std::vector<std::string>> rows;
  double worst_gap = 0.0;
  for (int i = 0; i < n; ++i) {
    const double eta0 = smoothing_schedule(p.channels[0].grid, lams[i], p.params,
                                           cfg.eta_factors)[0];
    rows.push_back({fmt17(lams[i]), fmt17(xi[i].contour),
                    fmt17(xi[i].contour_err), fmt17(eta0), "contour"});
    rows.push_back({fmt17(lams[i]), fmt17(xi[i].determinant),
                    fmt17(xi[i].determinant_err), fmt17(eta0), "determinant"});
    rows.push_back({fmt17(lams[i]), fmt17(counting[i]), fmt17(0.0), fmt17(0.0),
                    "counting"});
    worst_gap = std::max(worst_gap, xi[i].route_gap);
  }
  write_csv(out_dir + "/curves.csv", {"lambda", "xi", "xi_err", "eta", "route"},
            rows);

  CheckLine routes{"route-equivalence", worst_gap <= cfg.tolerance_route,
                   worst_gap, cfg.tolerance_route,
                   "max |contour - determinant| over all (lambda, eta)"};
  rep.checks.push_back(routes);
  rep.pass = routes.pass;
  rep.header = {"lambda", "xi_contour", "xi_err", "xi_determinant", "counting"};
  rep.columns.assign(5, std::vector<double>(n));
  for (int i = 0; i < n; ++i) {
    rep.columns[0][i] = lams[i];
    rep.columns[1][i] = xi[i].contour;
    rep.columns[2][i] = xi[i].contour_err;
    rep.columns[3][i] = xi[i].determinant;
    rep.columns[4][i] = counting[i];
  }
  write_report_files(rep, out_dir);
  return rep;
}

RunReport run_phase(const ExperimentConfig& cfg, const std::string& out_dir) {
  const Pipeline p = build_pipeline(cfg, true);
  RunReport rep = make_report(cfg, "phase");
  const PhaseSet set = build_phase_set(p, 0.01);

  std::vector<std::vector<std::string>> rows;
  for (const PhaseCurve& c : set.curves)
    for (Eigen::Index i = 0; i < c.k.size(); ++i)
      rows.push_back({channel_name(c.kind), std::to_string(c.ell),
                      fmt17(c.k[i]), fmt17(c.delta[i]), fmt17(c.match_radius)});
  write_csv(out_dir + "/curves.csv",
            {"channel", "ell", "k", "delta", "match_radius"}, rows);

  // Threshold consistency per channel, bound counts from the grids.
  for (std::size_t i = 0; i < set.curves.size(); ++i) {
    const PhaseCurve& c = set.curves[i];
    int bound = 0;
    if (cfg.dimension == 3) {
      bound = count_below(p.channels[c.ell].H, 0.0);
    } else {
      // Parity split of the line-grid bound states.
      const EigenSystem& H = p.channels[0].H;
      const int nneg = count_below(H, 0.0);
      for (int j = 0; j < std::min(nneg, H.vector_count()); ++j) {
        const auto v = H.eigenvectors.col(j);
        double sym = 0.0;
        for (int a = 0; a < H.size(); ++a) sym += v[a] * v[H.size() - 1 - a];
        const bool is_even = sym > 0.0;
        if (is_even == (c.kind == ChannelKind::even_1d)) ++bound;
      }
    }
    const LevinsonResult lr = levinson_check(c, bound);
    std::ostringstream name;
    name << "levinson-" << channel_name(c.kind);
    if (cfg.dimension == 3) name << c.ell;
    rep.checks.push_back({name.str(), lr.pass, lr.residual, 0.15,
                          "bound states: " + std::to_string(bound)});
    rep.pass = rep.pass && lr.pass;
  }

  rep.header = {"lambda", "theta"};
  rep.columns.assign(2, {});
  for (double target : cfg.lambda_grid) {
    rep.columns[0].push_back(target);
    rep.columns[1].push_back(theta_point(p, set, target));
  }
  write_report_files(rep, out_dir);
  return rep;
}

RunReport run_excess(const ExperimentConfig& cfg, const std::string& out_dir) {
  const Pipeline p = build_pipeline(cfg, true);
  RunReport rep = make_report(cfg, "excess");

  const int n = static_cast<int>(cfg.lambda_grid.size());
  std::vector<double> lams(n);
  std::vector<std::vector<double>> profiles(n);
  std::vector<ExcessResult> fits(n);
  parallel_for(n, cfg.threads, [&](int i) {
    lams[i] = guarded_lambda(p, cfg.lambda_grid[i]);
    profiles[i] = z_profile(p, lams[i]);
    fits[i] = extrapolate_R(cfg.r_schedule, profiles[i]);
    fits[i].lambda = lams[i];
  });

  std::vector<std::vector<std::string>> rows;
  for (int i = 0; i < n; ++i)
    for (std::size_t r = 0; r < cfg.r_schedule.size(); ++r)
      rows.push_back({fmt17(lams[i]), fmt17(cfg.r_schedule[r]),
                      fmt17(profiles[i][r])});
  write_csv(out_dir + "/curves.csv", {"lambda", "R", "Z_R"}, rows);

  rep.header = {"lambda", "z_inf", "eps_hat", "residual"};
  rep.columns.assign(4, std::vector<double>(n));
  for (int i = 0; i < n; ++i) {
    rep.columns[0][i] = lams[i];
    rep.columns[1][i] = fits[i].z_inf;
    rep.columns[2][i] = fits[i].epsilon_hat;
    rep.columns[3][i] = fits[i].residual;
    std::ostringstream name;
    name << "fit@lambda=" << lams[i];
    const bool ok = std::isfinite(fits[i].z_inf) && fits[i].epsilon_hat > 0.0;
    rep.checks.push_back({name.str(), ok, fits[i].epsilon_hat, 3.0,
                          "residual " + fmt17(fits[i].residual)});
    rep.pass = rep.pass && ok;
  }
  write_report_files(rep, out_dir);
  return rep;
}

RunReport run_friedel_check(const ExperimentConfig& cfg, const std::string& out_dir) {
  const Pipeline p = build_pipeline(cfg, true);
  RunReport rep = make_report(cfg, "friedel-check");
  const double k_lo = std::max(0.05, 0.4 * std::sqrt(cfg.lambda_grid.front()));
  const PhaseSet set = build_phase_set(p, k_lo);

  const int n = static_cast<int>(cfg.lambda_grid.size());
  std::vector<double> lams(n), theta(n);
  std::vector<XiPoint> xi(n);
  std::vector<ExcessResult> fits(n);
  std::vector<std::string> point_errors(n);
  parallel_for(n, cfg.threads, [&](int i) {
    lams[i] = guarded_lambda(p, cfg.lambda_grid[i]);
    theta[i] = theta_point(p, set, lams[i]);
    xi[i] = xi_point(p, lams[i]);
    try {
      const std::vector<double> prof = z_profile(p, lams[i]);
      fits[i] = extrapolate_R(cfg.r_schedule, prof);
      fits[i].lambda = lams[i];
    } catch (const Error& e) {
      point_errors[i] = e.what();
      fits[i].z_inf = std::numeric_limits<double>::quiet_NaN();
    }
  });

  rep.header = {"lambda", "theta",    "xi_contour", "xi_err", "xi_determinant",
                "z_inf",  "eps_hat",  "z_residual", "max_discrepancy"};
  rep.columns.assign(rep.header.size(), std::vector<double>(n));
  std::vector<std::vector<std::string>> rows;
  double worst = 0.0, worst_gap = 0.0;
  for (int i = 0; i < n; ++i) {
    double disc = std::abs(theta[i] - xi[i].contour);
    if (std::isfinite(fits[i].z_inf)) {
      disc = std::max({disc, std::abs(theta[i] - fits[i].z_inf),
                       std::abs(xi[i].contour - fits[i].z_inf)});
    }
    worst = std::max(worst, disc);
    worst_gap = std::max(worst_gap, xi[i].route_gap);
    const double vals[] = {lams[i],          theta[i],
                           xi[i].contour,    xi[i].contour_err,
                           xi[i].determinant, fits[i].z_inf,
                           fits[i].epsilon_hat, fits[i].residual,
                           disc};
    std::vector<std::string> row;
    for (std::size_t c = 0; c < rep.header.size(); ++c) {
      rep.columns[c][i] = vals[c];
      row.push_back(fmt17(vals[c]));
    }
    rows.push_back(row);

    std::ostringstream name;
    name << "friedel@lambda=" << lams[i];
    const bool ok = point_errors[i].empty() && disc <= cfg.tolerance_friedel;
    rep.checks.push_back({name.str(), ok, disc, cfg.tolerance_friedel,
                          point_errors[i].empty() ? "max pairwise |theta, xi, Z|"
                                                  : point_errors[i]});
    rep.pass = rep.pass && ok;
    if (!point_errors[i].empty())
      rep.notes.push_back("lambda " + fmt17(lams[i]) +
                          " extrapolation failed: " + point_errors[i]);
  }
  write_csv(out_dir + "/curves.csv", rep.header, rows);

  CheckLine routes{"route-equivalence", worst_gap <= cfg.tolerance_route,
                   worst_gap, cfg.tolerance_route,
                   "max |contour - determinant| over all (lambda, eta)"};
  rep.checks.push_back(routes);
  rep.pass = rep.pass && routes.pass;
  rep.notes.push_back("worst triple discrepancy " + fmt17(worst));
  write_report_files(rep, out_dir);
  return rep;
}

RunReport run_krein_check(const ExperimentConfig& cfg, const std::string& out_dir) {
  const Pipeline p = build_pipeline(cfg, false);
  RunReport rep = make_report(cfg, "krein-check");
  const Channel& ch = p.channels[0];
  if (cfg.dimension == 3)
    rep.notes.push_back("trace identity checked on the s-wave channel pair");

  double hi = 0.0;
  for (const TestFunction& f : cfg.test_functions)
    hi = std::max(hi, f.support_hi());
  const double lo = std::min(ch.H.min_eigenvalue(), ch.H0.min_eigenvalue()) - 1.0;
  hi = std::min(hi, ch.H.max_eigenvalue());
  const SSFCurve curve =
      counting_curve(ch.H, ch.H0, lo, hi, cfg.curve_uniform_points);

  std::vector<std::vector<std::string>> rows;
  for (const TestFunction& f : cfg.test_functions) {
    const double lhs = krein_lhs(ch.H, ch.H0, f);
    const double rhs = krein_rhs(curve, f);
    const double rel = std::abs(lhs - rhs) / std::max(std::abs(lhs), 1e-12);
    std::ostringstream name;
    name << "trace-identity-";
    switch (f.family) {
      case TestFunctionFamily::heat_kernel: name << "heat:t=" << f.width; break;
      case TestFunctionFamily::gaussian_energy:
        name << "gauss:" << f.center << ":" << f.width;
        break;
      case TestFunctionFamily::bump: name << "bump:" << f.center << ":" << f.width; break;
    }
    const bool ok = rel <= cfg.tolerance_krein;
    rep.checks.push_back({name.str(), ok, rel, cfg.tolerance_krein,
                          "lhs " + fmt17(lhs) + " rhs " + fmt17(rhs)});
    rep.pass = rep.pass && ok;
    rows.push_back({name.str(), fmt17(lhs), fmt17(rhs), fmt17(rel)});
  }
  write_csv(out_dir + "/curves.csv", {"function", "lhs", "rhs", "rel_err"}, rows);
  write_report_files(rep, out_dir);
  return rep;
}

RunReport run_probes(const ExperimentConfig& cfg, const std::string& out_dir) {
  RunReport rep = make_report(cfg, "probes");

  Potential V = make_potential(cfg.family, cfg.depth, cfg.range);
  V.certificate = certify_decay(V, cfg.alpha, cfg.dimension, cfg.certify_samples,
                                20.0 * std::max(1.0, cfg.range), cfg.seed);
  const double beta = cfg.beta != 0.0
                          ? cfg.beta
                          : beta_window_midpoint(cfg.alpha, cfg.dimension);

  std::vector<std::vector<std::string>> rows;

  // Trace-norm stability of the weighted operator difference under grid
  // refinement.
  {
    const Grid base = make_line_grid(cfg.wtrace_box, cfg.wtrace_points);
    const HamiltonianMatrix Hb = build_perturbed(base, V);
    const EigenSystem eb = eigendecompose(Hb, eigenvalues_only_cap());
    TransformParams params{cfg.shift != 0.0 ? cfg.shift
                                            : default_shift(eb.min_eigenvalue()),
                           cfg.power};
    const WeightProbe probe = w_trace_probe(base, cfg.wtrace_refinements, V,
                                            params, beta, cfg.dimension);
    for (std::size_t i = 0; i < probe.singular_value_sums.size(); ++i)
      rows.push_back({"wtrace", std::to_string(probe.grid_sizes[i]),
                      fmt17(probe.singular_value_sums[i])});
    bool monotone = true;
    double final_diff = 0.0;
    for (std::size_t i = 2; i < probe.singular_value_sums.size(); ++i) {
      const double d_prev = std::abs(probe.singular_value_sums[i - 1] -
                                     probe.singular_value_sums[i - 2]);
      const double d_cur = std::abs(probe.singular_value_sums[i] -
                                    probe.singular_value_sums[i - 1]);
      monotone = monotone && d_cur < d_prev;
      final_diff = d_cur;
    }
    const double rel = final_diff / std::abs(probe.singular_value_sums.back());
    const bool ok = monotone && rel < 0.02;
    rep.checks.push_back({"wtrace-cauchy", ok, rel, 0.02,
                          monotone ? "differences decrease monotonically"
                                   : "differences are not monotone"});
    rep.pass = rep.pass && ok;
  }

  // Boundary limit of the weighted resolvent product.
  {
    const Grid g = make_line_grid(cfg.boundary_box, cfg.boundary_points);
    const EigenSystem H = eigendecompose(build_perturbed(g, V));
    const EigenSystem H0 = eigendecompose(build_free(g));
    TransformParams params{cfg.shift != 0.0 ? cfg.shift
                                            : default_shift(H.min_eigenvalue()),
                           cfg.power};
    const std::vector<double> etas =
        geometric_schedule(cfg.boundary_eta0, 0.5, cfg.boundary_eta_count);
    const std::vector<double> norms = boundary_limit_probe(
        g, H, H0, params, cfg.boundary_lambda, beta, etas);
    for (std::size_t i = 0; i < norms.size(); ++i)
      rows.push_back({"boundary", fmt17(etas[i]), fmt17(norms[i])});
    double min_ratio = std::numeric_limits<double>::infinity();
    for (std::size_t i = 2; i < norms.size(); ++i) {
      const double d_prev = std::abs(norms[i - 1] - norms[i - 2]);
      const double d_cur = std::abs(norms[i] - norms[i - 1]);
      if (d_cur > 0.0) min_ratio = std::min(min_ratio, d_prev / d_cur);
    }
    const bool ok = min_ratio >= 1.5;
    rep.checks.push_back({"boundary-limit", ok, min_ratio, 1.5,
                          "min ratio of successive norm differences"});
    rep.pass = rep.pass && ok;
  }

  write_csv(out_dir + "/curves.csv", {"probe", "param", "value"}, rows);
  write_report_files(rep, out_dir);
  return rep;
}

}  // namespace ssf
