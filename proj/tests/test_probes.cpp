#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>

#include "ssf/resolvent_ssf.hpp"
#include "ssf/weight_probes.hpp"

using namespace ssf;

namespace {

Potential certified_gaussian(double alpha = 9.0) {
  Potential V = make_potential(PotentialFamily::gaussian, -1.0, 1.0);
  V.certificate = certify_decay(V, alpha, 1, 1500);
  REQUIRE(V.certificate.valid);
  return V;
}

}  // namespace

TEST_CASE("beta window") {
  CHECK(beta_window_midpoint(9.0, 1) == doctest::Approx(0.5 * (1.5 + 4.0)));
  CHECK_NOTHROW(validate_beta(2.75, 9.0, 1));
  // 10% above the upper edge and at/below the lower edge are both rejected
  CHECK_THROWS_AS(validate_beta(1.1 * 0.5 * (9.0 - 1.0), 9.0, 1), Error);
  CHECK_THROWS_AS(validate_beta(1.5, 9.0, 1), Error);
  try {
    validate_beta(0.0, 9.0, 1);
    CHECK(false);
  } catch (const Error& e) {
    CHECK(e.code() == errc::invalid_beta);
  }
}

TEST_CASE("weighted trace-norm probe") {
  SUBCASE("zero potential gives identically zero sums") {
    Potential z = make_potential(PotentialFamily::zero, 0.0, 1.0);
    z.certificate = certify_decay(z, 9.0, 1, 1500);
    const Grid base = make_line_grid(8.0, 60);
    const WeightProbe probe = w_trace_probe(base, 3, z, {2.0, 1}, 2.0, 1);
    for (double s : probe.singular_value_sums) CHECK(s < 1e-12);
  }

  SUBCASE("sums form a Cauchy-like sequence under refinement") {
    const Potential V = certified_gaussian();
    const Grid base = make_line_grid(12.0, 100);
    const WeightProbe probe = w_trace_probe(base, 4, V, {2.354, 1}, 2.75, 1);
    REQUIRE(probe.singular_value_sums.size() == 4);
    std::vector<double> diffs;
    for (std::size_t i = 1; i < 4; ++i)
      diffs.push_back(std::abs(probe.singular_value_sums[i] -
                               probe.singular_value_sums[i - 1]));
    CHECK(diffs[1] < diffs[0]);
    CHECK(diffs[2] < diffs[1]);
    CHECK(diffs[2] < 0.02 * std::abs(probe.singular_value_sums.back()));
  }

  SUBCASE("uncertified potentials and bad beta are rejected") {
    Potential raw = make_potential(PotentialFamily::gaussian, -1.0, 1.0);
    const Grid base = make_line_grid(8.0, 60);
    CHECK_THROWS_AS(w_trace_probe(base, 3, raw, {2.0, 1}, 2.0, 1), Error);
    const Potential V = certified_gaussian();
    CHECK_THROWS_AS(w_trace_probe(base, 3, V, {2.0, 1}, 4.4, 1), Error);
  }
}

TEST_CASE("boundary-limit probe") {
  const TransformParams params{2.354, 1};

  SUBCASE("free pair stabilizes as the height drops") {
    const Grid g = make_line_grid(4.0, 160);
    Potential z = make_potential(PotentialFamily::zero, 0.0, 1.0);
    const EigenSystem H = eigendecompose(build_perturbed(g, z));
    const EigenSystem H0 = eigendecompose(build_free(g));
    const auto etas = geometric_schedule(0.1, 0.5, 6);
    const auto norms = boundary_limit_probe(g, H, H0, params, 1.0, 2.75, etas);
    // identical operators: the probe still produces finite resolvent-product
    // norms, converging as eta -> 0
    for (double n : norms) CHECK(std::isfinite(n));
    for (std::size_t i = 2; i < norms.size(); ++i)
      CHECK(std::abs(norms[i] - norms[i - 1]) <
            std::abs(norms[i - 1] - norms[i - 2]));
  }

  SUBCASE("weighted norms stay bounded for the gaussian well") {
    const Grid g = make_line_grid(4.0, 200);
    const Potential V = certified_gaussian();
    const EigenSystem H = eigendecompose(build_perturbed(g, V));
    const EigenSystem H0 = eigendecompose(build_free(g));
    const auto etas = geometric_schedule(0.1, 0.5, 7);
    const auto norms = boundary_limit_probe(g, H, H0, params, 1.0, 2.75, etas);
    const double limit_scale = norms.back();
    for (double n : norms) CHECK(n <= 1.05 * limit_scale);
    for (std::size_t i = 2; i < norms.size(); ++i) {
      const double d_prev = std::abs(norms[i - 1] - norms[i - 2]);
      const double d_cur = std::abs(norms[i] - norms[i - 1]);
      CHECK(d_prev >= 1.5 * d_cur);
    }
  }

  SUBCASE("without weights the norms grow as the box opens") {
    // contrast evidence: at heights tied to the level spacing, beta = 0 norms
    // blow up with the box size while the weighted ones stay tame
    const Potential V = certified_gaussian();
    std::vector<double> bare, weighted;
    for (const auto& [L, N] : {std::pair{4.0, 160}, std::pair{8.0, 320},
                               std::pair{16.0, 640}}) {
      const Grid g = make_line_grid(L, N);
      const EigenSystem H = eigendecompose(build_perturbed(g, V));
      const EigenSystem H0 = eigendecompose(build_free(g));
      // sit midway between the two nearest levels of the merged spectrum
      std::vector<double> all;
      for (const EigenSystem* s : {&H, &H0})
        for (int j = 0; j < s->size(); ++j)
          if (s->eigenvalues[j] > 0.3 && s->eigenvalues[j] < 3.0)
            all.push_back(s->eigenvalues[j]);
      std::sort(all.begin(), all.end());
      double lam = 1.0, best = 1e300;
      for (std::size_t i = 0; i + 1 < all.size(); ++i) {
        const double mid = 0.5 * (all[i] + all[i + 1]);
        const double span = all[i + 1] - all[i];
        if (span > 0.2 * local_free_spacing(g, 1.0) &&
            std::abs(mid - 1.0) < best) {
          best = std::abs(mid - 1.0);
          lam = mid;
        }
      }
      const std::vector<double> eta{0.5 * local_free_spacing(g, lam)};
      bare.push_back(boundary_limit_probe(g, H, H0, params, lam, 0.0, eta)[0]);
      weighted.push_back(
          boundary_limit_probe(g, H, H0, params, lam, 2.75, eta)[0]);
    }
    CHECK(bare[1] > 1.5 * bare[0]);
    CHECK(bare[2] > 1.5 * bare[1]);
    CHECK(weighted[2] < bare[2]);
    CHECK(weighted[2] < 4.0 * weighted[0]);
  }
}
