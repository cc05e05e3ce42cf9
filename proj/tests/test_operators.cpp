#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>

#include "ssf/eigensystem.hpp"
#include "ssf/hamiltonian.hpp"

using namespace ssf;

TEST_CASE("grid invariants and node placement") {
  const Grid g = make_line_grid(2.0, 3);
  CHECK(g.spacing() == doctest::Approx(1.0));
  CHECK(g.node(0) == doctest::Approx(-1.0));
  CHECK(g.node(1) == doctest::Approx(0.0));
  CHECK(g.node(2) == doctest::Approx(1.0));

  const Grid r = make_radial_grid(10.0, 4, 1);
  CHECK(r.spacing() == doctest::Approx(2.0));
  CHECK(r.node(0) == doctest::Approx(2.0));
  CHECK(r.node(3) == doctest::Approx(8.0));

  CHECK_THROWS_AS(make_line_grid(2.0, 2), Error);
  CHECK_THROWS_AS(make_line_grid(-1.0, 10), Error);
  CHECK_THROWS_AS(make_radial_grid(1.0, 10, -1), Error);
}

TEST_CASE("free line stencil, N=3, h=1") {
  const HamiltonianMatrix H = build_free(make_line_grid(2.0, 3));
  const Eigen::MatrixXd m = H.dense();
  Eigen::MatrixXd want(3, 3);
  want << 2, -1, 0, -1, 2, -1, 0, -1, 2;
  CHECK((m - want).cwiseAbs().maxCoeff() == doctest::Approx(0.0));
  CHECK((m - m.transpose()).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("stencil spectrum identity on line grids") {
  for (const auto& [L, N] : {std::pair{3.0, 47}, std::pair{10.0, 200}}) {
    const Grid g = make_line_grid(L, N);
    const double h = g.spacing();
    const EigenSystem sys = eigendecompose(build_free(g), eigenvalues_only_cap());
    for (int k = 1; k <= N; ++k) {
      const double want = 2.0 / (h * h) * (1.0 - std::cos(k * kPi / (N + 1)));
      CHECK(std::abs(sys.eigenvalues[k - 1] - want) <= 1e-10 * std::abs(want));
    }
  }
}

TEST_CASE("lowest free eigenvalue converges at second order") {
  // error against (pi/2L)^2 must fall ~4x per mesh halving
  const double L = 5.0;
  const double exact = std::pow(kPi / (2.0 * L), 2);
  std::vector<double> errs;
  for (int N : {199, 399, 799}) {
    const EigenSystem sys =
        eigendecompose(build_free(make_line_grid(L, N)), eigenvalues_only_cap());
    errs.push_back(std::abs(sys.eigenvalues[0] - exact));
  }
  CHECK(errs[0] / errs[1] > 3.5);
  CHECK(errs[0] / errs[1] < 4.5);
  CHECK(errs[1] / errs[2] > 3.5);
  CHECK(errs[1] / errs[2] < 4.5);
}

TEST_CASE("radial centrifugal term on the diagonal") {
  const Grid g = make_radial_grid(10.0, 9, 1);
  const HamiltonianMatrix H = build_free(g);
  const double h = g.spacing();
  for (int i = 0; i < g.points; ++i) {
    const double r = g.node(i);
    CHECK(H.diagonal[i] == doctest::Approx(2.0 / (h * h) + 2.0 / (r * r)));
  }
}

TEST_CASE("perturbed builder") {
  const Grid g = make_line_grid(20.0, 400);

  SUBCASE("zero potential reproduces the free operator entrywise") {
    const Potential z = make_potential(PotentialFamily::zero, 0.0, 1.0);
    const HamiltonianMatrix H = build_perturbed(g, z);
    const HamiltonianMatrix H0 = build_free(g);
    CHECK((H.diagonal - H0.diagonal).cwiseAbs().maxCoeff() == 0.0);
    CHECK(H.off_diagonal == H0.off_diagonal);
  }

  SUBCASE("square well shifts the diagonal by V0 exactly inside the well") {
    const Potential V = make_potential(PotentialFamily::square_well, -2.0, 1.0);
    const HamiltonianMatrix H = build_perturbed(g, V);
    const HamiltonianMatrix H0 = build_free(g);
    for (int i = 0; i < g.points; ++i) {
      const double want = std::abs(g.node(i)) < 1.0 ? -2.0 : 0.0;
      CHECK(H.diagonal[i] - H0.diagonal[i] == doctest::Approx(want));
    }
  }

  SUBCASE("gaussian minimum lands on the node nearest the origin") {
    const Potential V = make_potential(PotentialFamily::gaussian, -1.0, 1.0);
    const HamiltonianMatrix H = build_perturbed(g, V);
    // independent oracle: direct evaluation over all nodes
    int want_idx = 0;
    double want_min = 1e300;
    for (int i = 0; i < g.points; ++i) {
      const double v = 2.0 / (g.spacing() * g.spacing()) + V(g.node(i));
      if (v < want_min) {
        want_min = v;
        want_idx = i;
      }
    }
    int got_idx = 0;
    H.diagonal.minCoeff(&got_idx);
    CHECK(got_idx == want_idx);
    CHECK(H.diagonal[got_idx] == doctest::Approx(want_min));
    CHECK(std::abs(g.node(want_idx)) < g.spacing());
  }

  SUBCASE("odd potentials are rejected on line grids") {
    Potential V = make_potential(PotentialFamily::gaussian, -1.0, 1.0);
    V.even_parity = false;
    CHECK_THROWS_AS(build_perturbed(g, V), Error);
  }
}

TEST_CASE("decay certification") {
  SUBCASE("zero potential certifies with C = 0") {
    const Potential z = make_potential(PotentialFamily::zero, 0.0, 1.0);
    const DecayCertificate c = certify_decay(z, 7.0, 3, 1500);
    CHECK(c.constant == 0.0);
    CHECK(c.valid);
  }

  SUBCASE("gaussian decays faster than any power") {
    const Potential V = make_potential(PotentialFamily::gaussian, -1.0, 1.0);
    const DecayCertificate c = certify_decay(V, 7.0, 3, 1500);
    CHECK(c.valid);
    // sampling oracle: the certified bound holds on fresh samples in [0, 20]
    for (int i = 0; i <= 2000; ++i) {
      const double x = 20.0 * i / 2000.0;
      CHECK(std::abs(V(x)) <= c.constant * std::pow(bracket(x), -7.0) + 1e-14);
    }
  }

  SUBCASE("a <x>^-4 tail fails an alpha = 7 certificate") {
    const auto slow = [](double x) { return std::pow(bracket(x), -4.0); };
    const DecayCertificate c = certify_decay(slow, 7.0, 3, 1500);
    CHECK_FALSE(c.valid);
    // oracle: the fitted sup grows like range^3 under range doubling
    auto sup_on = [&](double upper) {
      double s = 0.0;
      for (int i = 0; i <= 4000; ++i) {
        const double x = upper * i / 4000.0;
        s = std::max(s, slow(x) * std::pow(bracket(x), 7.0));
      }
      return s;
    };
    CHECK(sup_on(40.0) / sup_on(20.0) == doctest::Approx(8.0).epsilon(0.01));
  }

  SUBCASE("alpha at or below dimension + 3 is rejected outright") {
    const Potential V = make_potential(PotentialFamily::gaussian, -1.0, 1.0);
    CHECK_THROWS_AS(certify_decay(V, 6.0, 3, 1500), Error);
    try {
      certify_decay(V, 6.0, 3, 1500);
      CHECK(false);
    } catch (const Error& e) {
      CHECK(e.code() == errc::certificate_rejected);
    }
  }
}

TEST_CASE("smooth bump potential is compactly supported and bounded") {
  const Potential V = make_potential(PotentialFamily::smooth_bump, -3.0, 2.0);
  CHECK(V(0.0) == doctest::Approx(-3.0));
  CHECK(V(2.0) == 0.0);
  CHECK(V(5.0) == 0.0);
  CHECK(std::abs(V(1.9)) < 3.0);
  CHECK(V.sup_abs() == doctest::Approx(3.0));
}
