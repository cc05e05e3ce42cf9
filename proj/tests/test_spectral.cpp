#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>

#include "ssf/spectral.hpp"

using namespace ssf;

namespace {

HamiltonianMatrix square_well_hamiltonian(double L, int N, double depth) {
  const Grid g = make_line_grid(L, N);
  return build_perturbed(g, make_potential(PotentialFamily::square_well, depth, 1.0));
}

}  // namespace

TEST_CASE("eigendecompose recovers the closed-form N=3 spectrum") {
  const EigenSystem sys = eigendecompose(build_free(make_line_grid(2.0, 3)));
  CHECK(sys.eigenvalues[0] == doctest::Approx(2.0 - std::sqrt(2.0)));
  CHECK(sys.eigenvalues[1] == doctest::Approx(2.0));
  CHECK(sys.eigenvalues[2] == doctest::Approx(2.0 + std::sqrt(2.0)));
  CHECK(sys.vector_count() == 3);
}

TEST_CASE("zero matrix decomposes to zero eigenvalues and identity vectors") {
  HamiltonianMatrix H;
  H.grid = make_line_grid(2.0, 4);
  H.diagonal = Eigen::VectorXd::Zero(4);
  H.off_diagonal = 0.0;
  const EigenSystem sys = eigendecompose(H);
  CHECK(sys.eigenvalues.cwiseAbs().maxCoeff() == 0.0);
  CHECK((sys.eigenvectors - Eigen::MatrixXd::Identity(4, 4)).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("an even 1D well always binds") {
  const HamiltonianMatrix H = square_well_hamiltonian(20.0, 2000, -2.0);
  const EigenSystem sys = eigendecompose(H, 0.0);
  CHECK(sys.eigenvalues[0] < 0.0);

  // independent variational oracle: a gaussian trial state already has a
  // negative Rayleigh quotient, so the ground state must sit below zero
  const Grid g = H.grid;
  Eigen::VectorXd trial(g.points);
  for (int i = 0; i < g.points; ++i)
    trial[i] = std::exp(-0.5 * g.node(i) * g.node(i));
  trial.normalize();
  const double rayleigh = trial.dot(H.apply(trial));
  CHECK(rayleigh < 0.0);
  CHECK(sys.eigenvalues[0] <= rayleigh + 1e-12);
}

TEST_CASE("eigensystem invariants: residual and orthonormality") {
  const Grid g = make_line_grid(8.0, 400);
  const HamiltonianMatrix H =
      build_perturbed(g, make_potential(PotentialFamily::gaussian, -1.0, 1.0));
  const EigenSystem sys = eigendecompose(H);
  const double scale = sys.operator_norm;
  for (int j = 0; j < sys.vector_count(); ++j) {
    const double resid =
        (H.apply(sys.eigenvectors.col(j)) - sys.eigenvalues[j] * sys.eigenvectors.col(j)).norm();
    CHECK(resid <= 1e-8 * scale);
  }
  const Eigen::MatrixXd gram =
      sys.eigenvectors.transpose() * sys.eigenvectors -
      Eigen::MatrixXd::Identity(sys.vector_count(), sys.vector_count());
  CHECK(gram.cwiseAbs().maxCoeff() <= 1e-10);

  // partial mode: vectors only below the cap, eigenvalues still complete
  const EigenSystem part = eigendecompose(H, 1.0);
  CHECK(part.size() == g.points);
  CHECK(part.vector_count() == count_below(part, 1.0));
  CHECK(part.vector_count() > 0);
  CHECK(part.vector_count() < part.size());
  for (int j = 0; j < part.vector_count(); ++j)
    CHECK(std::abs(part.eigenvalues[j] - sys.eigenvalues[j]) <= 1e-9 * scale);
}

TEST_CASE("counting difference") {
  const HamiltonianMatrix H = square_well_hamiltonian(20.0, 800, -2.0);
  const HamiltonianMatrix H0 = build_free(H.grid);
  const EigenSystem eigH = eigendecompose(H, eigenvalues_only_cap());
  const EigenSystem eigH0 = eigendecompose(H0, eigenvalues_only_cap());

  SUBCASE("identical systems cancel at every energy") {
    for (double lam : {-1.0, 0.3, 1.7, 4.4})
      CHECK(counting_difference(eigH, eigH, lam) == 0);
  }

  SUBCASE("below both spectra the projections are empty") {
    CHECK(counting_difference(eigH, eigH0, -7.0) == 0);
  }

  SUBCASE("just below zero the difference counts the bound states") {
    const int nneg = count_below(eigH, -1e-9);
    CHECK(nneg > 0);
    CHECK(counting_difference(eigH, eigH0, -1e-9) == nneg);
  }

  SUBCASE("degenerate-energy guard") {
    const double on_top = eigH.eigenvalues[5];
    CHECK_THROWS_AS((void)counting_difference(eigH, eigH0, on_top), Error);
    try {
      (void)counting_difference(eigH, eigH0, on_top);
      CHECK(false);
    } catch (const Error& e) {
      CHECK(e.code() == errc::degenerate_energy);
    }
  }

  SUBCASE("counting function is nondecreasing and integer-valued") {
    int prev = 0;
    for (int i = 0; i <= 300; ++i) {
      const double lam = -1.0 + 6.0 * i / 300.0;
      int c;
      try {
        c = count_below(eigH, lam);
      } catch (const Error&) {
        continue;
      }
      CHECK(c >= prev);
      prev = c;
    }
  }
}

TEST_CASE("trace identity, left side") {
  const HamiltonianMatrix H = square_well_hamiltonian(20.0, 800, -2.0);
  const EigenSystem eigH = eigendecompose(H, eigenvalues_only_cap());
  const EigenSystem eigH0 =
      eigendecompose(build_free(H.grid), eigenvalues_only_cap());

  SUBCASE("identical systems give zero") {
    const TestFunction f{TestFunctionFamily::heat_kernel, 0.0, 0.5};
    CHECK(krein_lhs(eigH, eigH, f) == 0.0);
  }

  SUBCASE("a near-constant test function sees only the equal dimensions") {
    const TestFunction f{TestFunctionFamily::gaussian_energy, 0.0, 1e9};
    CHECK(std::abs(krein_lhs(eigH, eigH0, f)) < 1e-9);
  }
}

TEST_CASE("trace identity, right side on synthetic curves") {
  SUBCASE("zero curve integrates to zero") {
    SSFCurve c;
    c.lambdas = Eigen::VectorXd::LinSpaced(200, -1.0, 40.0);
    c.values = Eigen::VectorXd::Zero(200);
    c.errors = Eigen::VectorXd::Zero(200);
    const TestFunction f{TestFunctionFamily::bump, 2.0, 1.0};
    CHECK(krein_rhs(c, f) == doctest::Approx(0.0));
  }

  SUBCASE("unit curve over the support returns f(a) - f(b)") {
    SSFCurve c;
    c.lambdas = Eigen::VectorXd::LinSpaced(4001, 0.0, 4.0);
    c.values = Eigen::VectorXd::Ones(4001);
    c.errors = Eigen::VectorXd::Zero(4001);
    const TestFunction f{TestFunctionFamily::bump, 2.0, 1.0};
    const double want = f.value(0.0) - f.value(4.0);
    CHECK(krein_rhs(c, f) == doctest::Approx(want).epsilon(1e-9));
  }

  SUBCASE("support below the curve domain raises domain-coverage") {
    SSFCurve c;
    c.lambdas = Eigen::VectorXd::LinSpaced(400, 1.0, 5.0);
    c.values = Eigen::VectorXd::Ones(400);
    c.errors = Eigen::VectorXd::Zero(400);
    const TestFunction f{TestFunctionFamily::bump, -2.0, 1.0};
    CHECK_THROWS_AS((void)krein_rhs(c, f), Error);
  }

  SUBCASE("a grid too coarse for the test function is rejected") {
    SSFCurve c;
    c.lambdas = Eigen::VectorXd::LinSpaced(12, 0.0, 8.0);
    c.values = Eigen::VectorXd::Ones(12);
    c.errors = Eigen::VectorXd::Zero(12);
    const TestFunction f{TestFunctionFamily::bump, 2.0, 0.5};
    CHECK_THROWS_AS((void)krein_rhs(c, f), Error);
  }
}

TEST_CASE("two-sided trace identity on the square well") {
  const HamiltonianMatrix H = square_well_hamiltonian(20.0, 800, -2.0);
  const EigenSystem eigH = eigendecompose(H, eigenvalues_only_cap());
  const EigenSystem eigH0 =
      eigendecompose(build_free(H.grid), eigenvalues_only_cap());

  const double lo = std::min(eigH.min_eigenvalue(), eigH0.min_eigenvalue()) - 1.0;
  const std::vector<TestFunction> battery{
      {TestFunctionFamily::heat_kernel, 0.0, 0.5},
      {TestFunctionFamily::heat_kernel, 0.0, 1.0},
      {TestFunctionFamily::gaussian_energy, 1.5, 0.7},
      {TestFunctionFamily::bump, 2.0, 1.5},
  };
  double hi = 0.0;
  for (const TestFunction& f : battery) hi = std::max(hi, f.support_hi());
  hi = std::min(hi, eigH.max_eigenvalue());
  const SSFCurve curve = counting_curve(eigH, eigH0, lo, hi, 24000);

  for (const TestFunction& f : battery) {
    const double lhs = krein_lhs(eigH, eigH0, f);
    const double rhs = krein_rhs(curve, f);
    CHECK(std::abs(lhs - rhs) <= 1e-6 * std::max(std::abs(lhs), 1e-3));
  }
}

TEST_CASE("tabulated integration handles jump-bracketing grids") {
  // step at 1.0 bracketed by +-1e-8 inside an otherwise uniform grid
  std::vector<double> xs, ys;
  for (int i = 0; i <= 100; ++i) {
    const double x = 2.0 * i / 100.0;
    if (std::abs(x - 1.0) < 0.02) continue;
    xs.push_back(x);
  }
  xs.push_back(1.0 - 1e-8);
  xs.push_back(1.0 + 1e-8);
  std::sort(xs.begin(), xs.end());
  for (double x : xs) ys.push_back(x < 1.0 ? 0.0 : 1.0);
  const Eigen::Map<Eigen::VectorXd> X(xs.data(), static_cast<Eigen::Index>(xs.size()));
  const Eigen::Map<Eigen::VectorXd> Y(ys.data(), static_cast<Eigen::Index>(ys.size()));
  CHECK(integrate_tabulated(X, Y) == doctest::Approx(1.0).epsilon(1e-7));
}
