#ifndef SSF_SPECTRAL_HPP
#define SSF_SPECTRAL_HPP

#include <Eigen/Dense>

#include "ssf/curves.hpp"
#include "ssf/eigensystem.hpp"

namespace ssf {

// Guard half-width around eigenvalues: lambda closer than this to either
// spectrum is rejected as degenerate.
inline double degeneracy_guard(const EigenSystem& a, const EigenSystem& b) {
  return 1e-12 * std::max({a.operator_norm, b.operator_norm, 1.0});
}

// #\{lambda_j <= lambda\} via binary search on the ascending eigenvalues.
int count_below(const EigenSystem& sys, double lambda);

// #\{lambda_j(H) <= lambda\} - #\{lambda_j(H0) <= lambda\}. Throws
// degenerate_energy when lambda is within the guard of either spectrum.
int counting_difference(const EigenSystem& eigH, const EigenSystem& eigH0,
                        double lambda);

enum class TestFunctionFamily { gaussian_energy, heat_kernel, bump };

// Smooth test function of energy with a closed-form derivative.
//   gaussian_energy: exp(-(x-center)^2 / (2 width^2))
//   heat_kernel:     exp(-t x), t = width
//   bump:            exp(1 - 1/(1-u^2)), u = (x-center)/width, |u| < 1
struct TestFunction {
  TestFunctionFamily family = TestFunctionFamily::heat_kernel;
  double center = 0.0;
  double width = 1.0;

  double value(double x) const;
  double derivative(double x) const;

  // Interval outside which |f'| is negligible (heat kernel: upper end only;
  // the lower end is -inf and reported as such).
  double support_lo() const;
  double support_hi() const;
  // Characteristic variation scale of f', for grid-density validation.
  double scale() const { return family == TestFunctionFamily::heat_kernel ? 1.0 / width : width; }
};

// Sum f(lambda_j(H)) - sum f(lambda_j(H0)), the exact finite-matrix trace.
double krein_lhs(const EigenSystem& eigH, const EigenSystem& eigH0,
                 const TestFunction& f);

// -integral f'(lambda) xi(lambda) dlambda by composite Simpson over the
// curve's own lambda grid. The curve must cover the effective support of f'
// (an end may fall short only where the curve value vanishes there), and its
// grid must resolve f' (>= 20 samples per scale).
double krein_rhs(const SSFCurve& xi_curve, const TestFunction& f);

// Composite Simpson on tabulated, possibly non-uniform data.
double integrate_tabulated(const Eigen::VectorXd& xs, const Eigen::VectorXd& ys);

// Exact counting-difference staircase sampled on a grid that brackets every
// eigenvalue jump inside [lo, hi] by +-bracket_offset and fills in
// uniform_count uniform nodes. Suitable as the krein_rhs input.
SSFCurve counting_curve(const EigenSystem& eigH, const EigenSystem& eigH0,
                        double lo, double hi, int uniform_count,
                        double bracket_offset = 0.0);

}  // namespace ssf

#endif
