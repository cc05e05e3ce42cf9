#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>

#include "ssf/excess.hpp"
#include "ssf/resolvent_ssf.hpp"
#include "ssf/spectral.hpp"

using namespace ssf;

namespace {

struct Pair {
  Grid grid;
  EigenSystem H, H0;
};

Pair gaussian_pair(double L, int N, double cap) {
  const Grid g = make_line_grid(L, N);
  const Potential V = make_potential(PotentialFamily::gaussian, -1.0, 1.0);
  return {g, eigendecompose(build_perturbed(g, V), cap),
          eigendecompose(build_free(g), cap)};
}

double guarded(const Pair& p, double target) {
  double lam = target;
  const double guard = degeneracy_guard(p.H, p.H0);
  for (int i = 0; i < 100; ++i) {
    try {
      (void)counting_difference(p.H, p.H0, lam);
      return lam;
    } catch (const Error&) {
      lam += 100.0 * guard;
    }
  }
  return lam;
}

}  // namespace

TEST_CASE("cutoff weights") {
  const Grid g = make_line_grid(20.0, 399);
  const CutoffProfile prof{4.0, 0.5};
  const Eigen::VectorXd w = cutoff_weights(g, prof);

  // node exactly at the origin (N odd) carries full weight
  CHECK(w[199] == doctest::Approx(1.0));
  for (int i = 0; i < g.points; ++i) {
    const double x = g.node(i);
    if (std::abs(x) <= 2.0) CHECK(w[i] == doctest::Approx(1.0));
    if (std::abs(x) >= 4.0) CHECK(w[i] == 0.0);
    CHECK(w[i] >= 0.0);
    CHECK(w[i] <= 1.0);
  }
  // midpoint of the decay window: theta(3/4) = 1/2 by the step's symmetry
  CHECK(cutoff_value(prof, 3.0) == doctest::Approx(0.5));
  CHECK(cutoff_shape(0.75, 0.5) == doctest::Approx(0.5));

  SUBCASE("plateau guard rejects oversized cutoffs") {
    CHECK_THROWS_AS((void)cutoff_weights(g, CutoffProfile{9.0, 0.5}), Error);
    try {
      (void)cutoff_weights(g, CutoffProfile{9.0, 0.5});
      CHECK(false);
    } catch (const Error& e) {
      CHECK(e.code() == errc::box_contamination);
    }
    CHECK_NOTHROW((void)cutoff_weights(g, CutoffProfile{9.0, 0.5},
                                       CutoffGuard::bypass));
  }
}

TEST_CASE("sharp excess charge") {
  SUBCASE("zero potential carries zero excess at every radius") {
    const Grid g = make_line_grid(20.0, 400);
    const Potential z = make_potential(PotentialFamily::zero, 0.0, 1.0);
    const EigenSystem H = eigendecompose(build_perturbed(g, z), 5.0);
    const EigenSystem H0 = eigendecompose(build_free(g), 5.0);
    for (double R : {1.0, 2.0, 4.0})
      CHECK(std::abs(excess_charge_R(g, H, H0, 1.000001, CutoffProfile{R, 0.5})) <
            1e-10);
  }

  SUBCASE("full-box cutoff reduces to the counting difference") {
    const Pair p = gaussian_pair(12.0, 300, 6.0);
    const double lam = guarded(p, 1.0);
    const double z = excess_charge_R(p.grid, p.H, p.H0, lam,
                                     CutoffProfile{3.0 * p.grid.half_width, 0.5},
                                     CutoffGuard::bypass);
    CHECK(z == doctest::Approx(counting_difference(p.H, p.H0, lam)).epsilon(1e-10));
  }

  SUBCASE("below zero the cutoff sees the localized bound states") {
    const Pair p = gaussian_pair(24.0, 700, 6.0);
    // one even bound state near -0.35; large radii capture all of it
    const double lam = -0.05;
    std::vector<double> radii{1.5, 3.0, 6.0, 12.0};
    std::vector<double> zs;
    for (double R : radii)
      zs.push_back(excess_charge_R(p.grid, p.H, p.H0, lam, CutoffProfile{R, 0.5},
                                   CutoffGuard::bypass));
    const int want = counting_difference(p.H, p.H0, lam);
    CHECK(want == 1);
    CHECK(std::abs(zs.back() - want) < 1e-3);
    const ExcessResult fit = extrapolate_R(radii, zs);
    CHECK(fit.at_upper_constraint);  // exponential localization pins epsilon
    CHECK(std::abs(fit.z_inf - want) < 1e-2);
  }
}

TEST_CASE("radius extrapolation") {
  SUBCASE("constant sequences are their own limit") {
    const std::vector<double> radii{5.0, 10.0, 20.0, 40.0};
    const std::vector<double> zs{3.0, 3.0, 3.0, 3.0};
    const ExcessResult fit = extrapolate_R(radii, zs);
    CHECK(fit.z_inf == doctest::Approx(3.0).epsilon(1e-12));
    CHECK(fit.residual < 1e-12);
  }

  SUBCASE("synthetic power data recovers the exact exponent") {
    const std::vector<double> radii{5.0, 10.0, 20.0, 40.0};
    std::vector<double> zs;
    for (double R : radii) zs.push_back(1.0 + 1.0 / R);
    const ExcessResult fit = extrapolate_R(radii, zs);
    CHECK(std::abs(fit.z_inf - 1.0) < 1e-6);
    CHECK(std::abs(fit.epsilon_hat - 1.0) < 1e-6);
  }

  SUBCASE("preconditions: enough radii, roughly geometric, increasing") {
    const std::vector<double> three{1.0, 2.0, 4.0};
    const std::vector<double> z3{1.0, 1.0, 1.0};
    CHECK_THROWS_AS((void)extrapolate_R(three, z3), Error);
    const std::vector<double> skew{1.0, 1.05, 1.1, 20.0};
    const std::vector<double> z4{1.0, 1.0, 1.0, 1.0};
    CHECK_THROWS_AS((void)extrapolate_R(skew, z4), Error);
  }

  SUBCASE("residual threshold and monotone-tail policies") {
    const std::vector<double> radii{5.0, 10.0, 20.0, 40.0};
    const std::vector<double> wiggly{1.0, 0.6, 1.1, 0.7};
    ExtrapolateOptions opts;
    opts.residual_threshold = 1e-3;
    CHECK_THROWS_AS((void)extrapolate_R(radii, wiggly, opts), Error);
  }
}

TEST_CASE("smoothed excess charge matches the boundary-value route") {
  const Pair p = gaussian_pair(40.0, 1600, 8.0);
  const TransformParams params{2.0, 1};
  const std::vector<double> factors{8.0, 4.0, 2.0};
  const double lam = guarded(p, 1.0);
  const auto sched = smoothing_schedule(p.grid, lam, params, factors);

  std::vector<double> radii{2.0, 4.0, 8.0, 16.0};
  std::vector<double> zs;
  for (double R : radii)
    zs.push_back(excess_charge_smoothed(p.grid, p.H, p.H0, params, lam,
                                        CutoffProfile{R, 0.5}, sched));
  const ExcessResult fit = extrapolate_R(radii, zs);
  const SsfPoint xi = ssf_contour(p.H, p.H0, params, lam, sched);
  CHECK(std::abs(fit.z_inf - xi.value) < 0.02);
}

TEST_CASE("cutoff-profile independence of the limit") {
  const Pair p = gaussian_pair(60.0, 2400, 8.0);
  const TransformParams params{2.0, 1};
  const double lam = guarded(p, 1.0);
  const auto sched =
      smoothing_schedule(p.grid, lam, params, std::vector<double>{8.0, 4.0, 2.0});
  const std::vector<double> radii{3.0, 6.0, 12.0, 24.0};

  double z_inf[2], resid[2];
  int idx = 0;
  for (double plateau : {0.5, 0.75}) {
    std::vector<double> zs;
    for (double R : radii)
      zs.push_back(excess_charge_smoothed(p.grid, p.H, p.H0, params, lam,
                                          CutoffProfile{R, plateau}, sched));
    const ExcessResult fit = extrapolate_R(radii, zs);
    z_inf[idx] = fit.z_inf;
    resid[idx] = fit.residual;
    ++idx;
  }
  CHECK(std::abs(z_inf[0] - z_inf[1]) <= resid[0] + resid[1] + 1e-3);
}
