#include "ssf/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <sstream>

#include "ssf/errors.hpp"

namespace ssf {

int count_below(const EigenSystem& sys, double lambda) {
  const double* begin = sys.eigenvalues.data();
  const double* end = begin + sys.eigenvalues.size();
  return static_cast<int>(std::upper_bound(begin, end, lambda) - begin);
}

namespace {

double nearest_eigenvalue_distance(const EigenSystem& sys, double lambda) {
  const double* begin = sys.eigenvalues.data();
  const double* end = begin + sys.eigenvalues.size();
  const double* it = std::lower_bound(begin, end, lambda);
  double dist = std::numeric_limits<double>::infinity();
  if (it != end) dist = std::min(dist, std::abs(*it - lambda));
  if (it != begin) dist = std::min(dist, std::abs(*(it - 1) - lambda));
  return dist;
}

}  // namespace

int counting_difference(const EigenSystem& eigH, const EigenSystem& eigH0,
                        double lambda) {
  const double guard = degeneracy_guard(eigH, eigH0);
  const double dist = std::min(nearest_eigenvalue_distance(eigH, lambda),
                               nearest_eigenvalue_distance(eigH0, lambda));
  if (dist < guard) {
    std::ostringstream msg;
    msg << "lambda = " << lambda << " lies within " << guard
        << " of an eigenvalue (distance " << dist << ")";
    fail(errc::degenerate_energy, msg.str());
  }
  return count_below(eigH, lambda) - count_below(eigH0, lambda);
}

double TestFunction::value(double x) const {
  switch (family) {
    case TestFunctionFamily::gaussian_energy: {
      const double u = (x - center) / width;
      return std::exp(-0.5 * u * u);
    }
    case TestFunctionFamily::heat_kernel:
      return std::exp(-width * x);
    case TestFunctionFamily::bump: {
      const double u = (x - center) / width;
      if (std::abs(u) >= 1.0) return 0.0;
      return std::exp(1.0 - 1.0 / (1.0 - u * u));
    }
  }
  return 0.0;
}

double TestFunction::derivative(double x) const {
  switch (family) {
    case TestFunctionFamily::gaussian_energy: {
      const double u = (x - center) / width;
      return -u / width * std::exp(-0.5 * u * u);
    }
    case TestFunctionFamily::heat_kernel:
      return -width * std::exp(-width * x);
    case TestFunctionFamily::bump: {
      const double u = (x - center) / width;
      if (std::abs(u) >= 1.0) return 0.0;
      const double d = 1.0 - u * u;
      return value(x) * (-2.0 * u / (d * d)) / width;
    }
  }
  return 0.0;
}

double TestFunction::support_lo() const {
  switch (family) {
    case TestFunctionFamily::gaussian_energy: return center - 9.0 * width;
    case TestFunctionFamily::heat_kernel:
      return -std::numeric_limits<double>::infinity();
    case TestFunctionFamily::bump: return center - width;
  }
  return 0.0;
}

double TestFunction::support_hi() const {
  switch (family) {
    case TestFunctionFamily::gaussian_energy: return center + 9.0 * width;
    case TestFunctionFamily::heat_kernel:
      // t e^{-t x} falls below 1e-14 of its value at 0 past x = 33/t.
      return 33.0 / width;
    case TestFunctionFamily::bump: return center + width;
  }
  return 0.0;
}

double krein_lhs(const EigenSystem& eigH, const EigenSystem& eigH0,
                 const TestFunction& f) {
  if (eigH.size() != eigH0.size())
    fail(errc::domain_coverage, "operator pair must share one grid");
  // f must decay over the spectral range: reject blow-up at either extreme.
  const double hi = std::max(eigH.max_eigenvalue(), eigH0.max_eigenvalue());
  const double lo = std::min(eigH.min_eigenvalue(), eigH0.min_eigenvalue());
  if (!std::isfinite(f.value(hi)) || !std::isfinite(f.value(lo)))
    fail(errc::domain_coverage, "test function diverges on the spectral range");
  // Pairwise summation keeps the near-cancelling tails tame.
  double sum = 0.0;
  for (int j = eigH.size() - 1; j >= 0; --j)
    sum += f.value(eigH.eigenvalues[j]) - f.value(eigH0.eigenvalues[j]);
  return sum;
}

namespace {

// Integral over [xs[i], xs[i+1]] of the parabola through nodes a < b < c.
double parabola_piece(const Eigen::VectorXd& xs, const Eigen::VectorXd& ys,
                      Eigen::Index a, Eigen::Index b, Eigen::Index c,
                      double lo, double hi) {
  // Newton form on (xa, xb, xc).
  const double xa = xs[a], xb = xs[b], xc = xs[c];
  const double d1 = (ys[b] - ys[a]) / (xb - xa);
  const double d2 = ((ys[c] - ys[b]) / (xc - xb) - d1) / (xc - xa);
  auto antiderivative = [&](double x) {
    const double u = x - xa;
    const double v = x - xb;
    // integral of ys[a] + d1 (x-xa) + d2 (x-xa)(x-xb)
    return ys[a] * x + 0.5 * d1 * u * u +
           d2 * (x * x * x / 3.0 - 0.5 * (xa + xb) * x * x + xa * xb * x) +
           0.0 * v;
  };
  return antiderivative(hi) - antiderivative(lo);
}

bool comparable_spacing(double h0, double h1) {
  const double lo = std::min(h0, h1), hi = std::max(h0, h1);
  return lo > 0.0 && hi / lo <= 4.0;
}

}  // namespace

// Simpson-family composite rule on tabulated, possibly strongly non-uniform
// data: each interval takes the average of the overlapping parabolas through
// its left and right neighbor triplets, skipping a parabola whose node
// spacings are badly skewed (jump-bracketing nodes would make it overshoot).
double integrate_tabulated(const Eigen::VectorXd& xs, const Eigen::VectorXd& ys) {
  const Eigen::Index n = xs.size();
  if (n < 2 || ys.size() != n)
    fail(errc::domain_coverage, "need matching tabulated data with >= 2 nodes");
  double total = 0.0;
  for (Eigen::Index i = 0; i + 1 < n; ++i) {
    const double lo = xs[i], hi = xs[i + 1];
    const double w = hi - lo;
    double sum = 0.0;
    int used = 0;
    if (i >= 1 && comparable_spacing(xs[i] - xs[i - 1], w)) {
      sum += parabola_piece(xs, ys, i - 1, i, i + 1, lo, hi);
      ++used;
    }
    if (i + 2 < n && comparable_spacing(w, xs[i + 2] - xs[i + 1])) {
      sum += parabola_piece(xs, ys, i, i + 1, i + 2, lo, hi);
      ++used;
    }
    total += used > 0 ? sum / used : 0.5 * w * (ys[i] + ys[i + 1]);
  }
  return total;
}

double krein_rhs(const SSFCurve& xi_curve, const TestFunction& f) {
  validate_curve(xi_curve);
  const double lo = xi_curve.lambdas[0];
  const double hi = xi_curve.lambdas[xi_curve.lambdas.size() - 1];

  // Negligible-|f'| level relative to the peak.
  double fp_max = 0.0;
  for (int i = 0; i <= 200; ++i) {
    const double x = lo + (hi - lo) * i / 200.0;
    fp_max = std::max(fp_max, std::abs(f.derivative(x)));
  }
  fp_max = std::max({fp_max, std::abs(f.derivative(lo)), std::abs(f.derivative(hi))});
  const double negligible = 1e-12 * std::max(fp_max, 1e-300);

  // An end may fall inside supp f' only where the curve vanishes there.
  if (f.support_lo() < lo && std::abs(f.derivative(lo)) > negligible &&
      std::abs(xi_curve.values[0]) > 0.0)
    fail(errc::domain_coverage, "curve does not reach the lower support of f'");
  if (f.support_hi() > hi && std::abs(f.derivative(hi)) > negligible &&
      std::abs(xi_curve.values[xi_curve.values.size() - 1]) > 0.0)
    fail(errc::domain_coverage, "curve does not reach the upper support of f'");
  if (fp_max <= 0.0) return 0.0;

  // Density validation: >= 20 samples per characteristic scale of f' within
  // its effective support.
  const double s_lo = std::max(lo, f.support_lo());
  const double s_hi = std::min(hi, f.support_hi());
  if (s_hi > s_lo) {
    Eigen::Index inside = 0;
    for (Eigen::Index i = 0; i < xi_curve.lambdas.size(); ++i)
      if (xi_curve.lambdas[i] >= s_lo && xi_curve.lambdas[i] <= s_hi) ++inside;
    const double needed = 20.0 * (s_hi - s_lo) / f.scale();
    if (static_cast<double>(inside) < needed)
      fail(errc::domain_coverage, "curve grid too coarse for the test function");
  }

  Eigen::VectorXd integrand(xi_curve.lambdas.size());
  for (Eigen::Index i = 0; i < xi_curve.lambdas.size(); ++i)
    integrand[i] = -f.derivative(xi_curve.lambdas[i]) * xi_curve.values[i];
  return integrate_tabulated(xi_curve.lambdas, integrand);
}

SSFCurve counting_curve(const EigenSystem& eigH, const EigenSystem& eigH0,
                        double lo, double hi, int uniform_count,
                        double bracket_offset) {
  if (!(hi > lo)) fail(errc::domain_coverage, "empty curve interval");
  const double guard = degeneracy_guard(eigH, eigH0);
  double off = bracket_offset > 0.0 ? bracket_offset : std::max(20.0 * guard, 1e-8);

  std::set<double> nodes;
  for (int i = 0; i < uniform_count; ++i)
    nodes.insert(lo + (hi - lo) * static_cast<double>(i) /
                          static_cast<double>(uniform_count - 1));
  auto bracket_jumps = [&](const EigenSystem& sys) {
    for (int j = 0; j < sys.size(); ++j) {
      const double e = sys.eigenvalues[j];
      if (e <= lo + off || e >= hi - off) continue;
      nodes.insert(e - off);
      nodes.insert(e + off);
    }
  };
  bracket_jumps(eigH);
  bracket_jumps(eigH0);

  // Drop nodes that landed inside the degeneracy guard of either spectrum.
  SSFCurve curve;
  std::vector<double> xs, ys;
  xs.reserve(nodes.size());
  for (double x : nodes) {
    try {
      const int v = counting_difference(eigH, eigH0, x);
      xs.push_back(x);
      ys.push_back(static_cast<double>(v));
    } catch (const Error& e) {
      if (e.code() != errc::degenerate_energy) throw;
    }
  }
  curve.lambdas = Eigen::Map<Eigen::VectorXd>(xs.data(), static_cast<Eigen::Index>(xs.size()));
  curve.values = Eigen::Map<Eigen::VectorXd>(ys.data(), static_cast<Eigen::Index>(ys.size()));
  curve.errors = Eigen::VectorXd::Zero(curve.values.size());
  curve.route = SsfRoute::counting;
  curve.eta = 0.0;
  validate_curve(curve);
  return curve;
}

}  // namespace ssf
