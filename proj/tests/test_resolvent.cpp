#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <complex>

#include "ssf/resolvent_ssf.hpp"
#include "ssf/spectral.hpp"

using namespace ssf;
using cd = std::complex<double>;

namespace {

struct Pair {
  Grid grid;
  EigenSystem H, H0;
};

Pair gaussian_pair(double L, int N, double depth = -1.0) {
  const Grid g = make_line_grid(L, N);
  const Potential V = make_potential(PotentialFamily::gaussian, depth, 1.0);
  return {g, eigendecompose(build_perturbed(g, V), eigenvalues_only_cap()),
          eigendecompose(build_free(g), eigenvalues_only_cap())};
}

// midpoints of the widest merged-spectrum gaps near a target
double midgap(const Pair& p, double target) {
  std::vector<double> all;
  for (const EigenSystem* s : {&p.H, &p.H0})
    for (int j = 0; j < s->size(); ++j)
      if (s->eigenvalues[j] > 0.05 && s->eigenvalues[j] < 8.0)
        all.push_back(s->eigenvalues[j]);
  std::sort(all.begin(), all.end());
  double best = target, best_dist = 1e300;
  for (std::size_t i = 0; i + 1 < all.size(); ++i) {
    if (all[i + 1] - all[i] < 1e-4) continue;
    const double mid = 0.5 * (all[i] + all[i + 1]);
    if (std::abs(mid - target) < best_dist) {
      best_dist = std::abs(mid - target);
      best = mid;
    }
  }
  return best;
}

std::vector<double> gap_schedule(const Pair& p, const TransformParams& params,
                                 double lambda, int count = 7) {
  const double gap = transformed_gap(p.H, p.H0, params, lambda);
  return geometric_schedule(gap / 4.0, 0.5, count);
}

}  // namespace

TEST_CASE("transform map values and ordering") {
  EigenSystem sys;
  sys.eigenvalues = Eigen::Vector3d(0.0, 1.0, 2.0);
  sys.operator_norm = 2.0;

  CHECK(transformed_energy(0.0, {2.0, 1}) == doctest::Approx(0.5));
  CHECK(transformed_energy(2.0, {2.0, 2}) == doctest::Approx(1.0 / 16.0));

  const Eigen::VectorXd mapped = transform_spectrum(sys, {2.0, 1});
  CHECK(mapped[0] > mapped[1]);
  CHECK(mapped[1] > mapped[2]);
  for (int j = 0; j < 3; ++j) {
    CHECK(mapped[j] > 0.0);
    CHECK(mapped[j] < 1.0);
  }

  SUBCASE("insufficient shift is rejected") {
    EigenSystem neg;
    neg.eigenvalues = Eigen::Vector3d(-1.5, 0.0, 1.0);
    neg.operator_norm = 1.5;
    CHECK_THROWS_AS((void)transform_spectrum(neg, {2.0, 1}), Error);
    try {
      (void)transform_spectrum(neg, {2.0, 1});
      CHECK(false);
    } catch (const Error& e) {
      CHECK(e.code() == errc::shift_too_small);
    }
  }
}

TEST_CASE("resolvent trace difference") {
  SUBCASE("identical systems cancel everywhere") {
    const Pair p = gaussian_pair(6.0, 120);
    const TransformParams params{2.5, 1};
    for (cd w : {cd{0.9, 0.0}, cd{0.2, 0.3}, cd{0.5, -0.1}})
      CHECK(std::abs(trace_resolvent_diff(p.H, p.H, params, w)) == 0.0);
  }

  SUBCASE("single-level pair is plain two-term arithmetic") {
    EigenSystem a, b;
    a.eigenvalues = Eigen::VectorXd::Constant(1, 0.5);   // mu = 1/2.5 = 0.4
    b.eigenvalues = Eigen::VectorXd::Constant(1, 0.0);   // mu = 1/2   = 0.5
    a.operator_norm = b.operator_norm = 0.5;
    const cd w{0.0, 1.0};
    const cd got = trace_resolvent_diff(a, b, {2.0, 1}, w);
    const cd want = 1.0 / (cd{0.4, 0.0} - w) - 1.0 / (cd{0.5, 0.0} - w);
    CHECK(std::abs(got - want) < 1e-15);
  }

  SUBCASE("matches an extended-precision summation oracle") {
    const Pair p = gaussian_pair(12.0, 600);
    const TransformParams params{2.0, 1};
    for (cd w : {cd{0.35, 0.002}, cd{0.2, 0.05}, cd{0.45, 1e-5}}) {
      const cd got = trace_resolvent_diff(p.H, p.H0, params, w);
      std::complex<long double> acc{0.0L, 0.0L};
      const std::complex<long double> wl{w.real(), w.imag()};
      for (int j = 0; j < p.H.size(); ++j) {
        const long double a =
            std::pow(static_cast<long double>(p.H.eigenvalues[j]) + 2.0L, -1.0L);
        const long double b =
            std::pow(static_cast<long double>(p.H0.eigenvalues[j]) + 2.0L, -1.0L);
        acc += 1.0L / (a - wl) - 1.0L / (b - wl);
      }
      const cd want{static_cast<double>(acc.real()), static_cast<double>(acc.imag())};
      CHECK(std::abs(got - want) <= 1e-12 * std::max(1.0, std::abs(want)));
    }
  }

  SUBCASE("conjugate symmetry") {
    const Pair p = gaussian_pair(8.0, 200);
    const TransformParams params{2.0, 1};
    for (cd w : {cd{0.3, 0.1}, cd{0.44, 0.007}, cd{0.1, 2.0}}) {
      const cd up = trace_resolvent_diff(p.H, p.H0, params, w);
      const cd dn = trace_resolvent_diff(p.H, p.H0, params, std::conj(w));
      CHECK(std::abs(dn - std::conj(up)) <= 1e-13 * std::max(1.0, std::abs(up)));
    }
  }

  SUBCASE("pole collision raises pole-proximity") {
    const Pair p = gaussian_pair(6.0, 120);
    const TransformParams params{2.0, 1};
    const double pole = transformed_energy(p.H.eigenvalues[3], params);
    CHECK_THROWS_AS((void)trace_resolvent_diff(p.H, p.H0, params, cd{pole, 0.0}),
                    Error);
  }
}

TEST_CASE("boundary-value SSF by contour quadrature") {
  const Pair p = gaussian_pair(10.0, 400);
  const TransformParams params{2.0, 1};

  SUBCASE("identical systems give zero at every energy") {
    for (double lam : {0.5, 1.0, 3.0}) {
      const auto sched = gap_schedule(p, params, lam, 4);
      const SsfPoint pt = ssf_contour(p.H, p.H, params, lam, sched);
      CHECK(std::abs(pt.value) < 1e-12);
    }
  }

  SUBCASE("height-zero limit recovers the counting difference exactly") {
    for (double target : {0.4, 1.0, 2.2, 4.0}) {
      const double lam = midgap(p, target);
      const SsfPoint pt =
          ssf_contour(p.H, p.H0, params, lam, gap_schedule(p, params, lam));
      const int want = counting_difference(p.H, p.H0, lam);
      CHECK(std::abs(pt.value - want) < 1e-7);
    }
  }

  SUBCASE("transform presets agree (invariance of the construction)") {
    const double lam = midgap(p, 1.3);
    const SsfPoint a =
        ssf_contour(p.H, p.H0, {2.0, 1}, lam, gap_schedule(p, {2.0, 1}, lam));
    const SsfPoint b =
        ssf_contour(p.H, p.H0, {3.0, 2}, lam, gap_schedule(p, {3.0, 2}, lam));
    const SsfPoint c =
        ssf_contour(p.H, p.H0, {4.5, 1}, lam, gap_schedule(p, {4.5, 1}, lam));
    CHECK(std::abs(a.value - b.value) < 1e-8);
    CHECK(std::abs(a.value - c.value) < 1e-8);
  }

  SUBCASE("smoothed values vary mildly between adjacent grid energies") {
    // continuity proxy: with heights tied to the local spacing, neighboring
    // lambda samples move the smoothed value by less than 0.1
    const double d = local_free_spacing(p.grid, 1.0);
    double prev = 0.0;
    bool first = true;
    for (int i = 0; i <= 20; ++i) {
      const double lam = 1.0 + d * i / 4.0;
      const auto sched =
          smoothing_schedule(p.grid, lam, params, std::vector<double>{8.0, 4.0, 2.0});
      const SsfPoint pt = ssf_contour(p.H, p.H0, params, lam, sched);
      if (!first) CHECK(std::abs(pt.value - prev) < 0.1);
      prev = pt.value;
      first = false;
    }
  }

  SUBCASE("spread tolerance turns instability into an error") {
    const double lam = midgap(p, 1.0);
    CHECK_THROWS_AS((void)ssf_contour(p.H, p.H0, params, lam,
                                      gap_schedule(p, params, lam), 1e-9, 1e-18),
                    Error);
  }
}

TEST_CASE("log perturbation determinant") {
  const Pair p = gaussian_pair(10.0, 400);
  const TransformParams params{2.0, 1};

  SUBCASE("identical systems have log det = 0 along any path") {
    const Contour path = make_contour(p.H, p.H, params, 1.0, 1e-3);
    CHECK(std::abs(log_perturbation_determinant(p.H, p.H, params, path)) == 0.0);
  }

  SUBCASE("real points above both spectra carry a real value") {
    Contour path = make_contour(p.H, p.H0, params, 1.0, 1e-3);
    // end the path back on the real axis above the spectra
    const double w0 = path.start;
    path.nodes = {cd{w0, 0.0}, cd{w0, 1e-3}, cd{w0 * 1.001, 1e-3}};
    path.end = path.nodes.back();
    const cd ld = log_perturbation_determinant(p.H, p.H0, params, path);
    CHECK(std::abs(ld.imag()) < 1e-6);
    CHECK(std::isfinite(ld.real()));
  }

  SUBCASE("determinant route equals the contour route at every height") {
    for (double target : {0.7, 1.9}) {
      const double lam = midgap(p, target);
      const auto sched = gap_schedule(p, params, lam, 5);
      const SsfPoint c = ssf_contour(p.H, p.H0, params, lam, sched);
      const SsfPoint d = ssf_determinant(p.H, p.H0, params, lam, sched);
      for (std::size_t i = 0; i < sched.size(); ++i)
        CHECK(std::abs(c.per_eta[i] - d.per_eta[i]) < 1e-9);
      CHECK(std::abs(c.value - d.value) < 1e-9);
    }
  }

  SUBCASE("a path through a pole cannot be refined") {
    Contour path;
    const double pole = transformed_energy(p.H.eigenvalues[10], params);
    path.start = contour_anchor(p.H, p.H0, params);
    path.eta = 0.0;
    path.nodes = {cd{path.start, 0.0}, cd{pole + 0.01, 0.0}, cd{pole - 0.01, 0.0}};
    path.end = path.nodes.back();
    CHECK_THROWS_AS((void)log_perturbation_determinant(p.H, p.H0, params, path),
                    Error);
  }
}

TEST_CASE("height extrapolation") {
  SUBCASE("exact quadratic data is recovered") {
    const std::vector<double> etas{0.4, 0.2, 0.1, 0.05, 0.025};
    std::vector<double> vals;
    for (double e : etas) vals.push_back(3.25 - 1.4 * e + 0.7 * e * e);
    const Extrapolated ex = extrapolate_to_zero(etas, vals);
    CHECK(ex.value == doctest::Approx(3.25).epsilon(1e-12));
    CHECK(ex.error < 1e-12);
  }

  SUBCASE("schedules must decrease and stay positive") {
    const std::vector<double> bad{0.1, 0.2, 0.4};
    const std::vector<double> vals{1.0, 1.0, 1.0};
    const Pair p = gaussian_pair(6.0, 120);
    CHECK_THROWS_AS((void)ssf_contour(p.H, p.H0, {2.0, 1}, 1.0, bad), Error);
  }
}

TEST_CASE("smoothing schedules follow the local level spacing") {
  const Grid g = make_line_grid(50.0, 100);
  const TransformParams params{2.0, 1};
  const std::vector<double> factors{8.0, 4.0, 2.0};
  const auto sched = smoothing_schedule(g, 1.0, params, factors);
  const double spacing = local_free_spacing(g, 1.0);
  CHECK(spacing == doctest::Approx(kPi / 50.0));
  for (std::size_t i = 0; i < factors.size(); ++i)
    CHECK(sched[i] == doctest::Approx(factors[i] * spacing *
                                      transformed_slope(1.0, params)));
}
