#include "ssf/resolvent_ssf.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "ssf/errors.hpp"

namespace ssf {

namespace {

using cd = std::complex<double>;

// Transformed spectra of both operators: the pole set of the trace.
struct PolePair {
  Eigen::VectorXd a;  // mu(lambda_j(H)), descending
  Eigen::VectorXd b;  // mu(lambda_j(H0)), descending

  PolePair(const EigenSystem& eigH, const EigenSystem& eigH0,
           const TransformParams& params) {
    validate_transform(params, std::min(eigH.min_eigenvalue(), eigH0.min_eigenvalue()));
    if (eigH.size() != eigH0.size())
      fail(errc::pole_proximity, "operator pair must share one grid");
    a.resize(eigH.size());
    b.resize(eigH0.size());
    for (int j = 0; j < eigH.size(); ++j) {
      a[j] = transformed_energy(eigH.eigenvalues[j], params);
      b[j] = transformed_energy(eigH0.eigenvalues[j], params);
    }
  }

  cd trace(cd w) const {
    cd sum{0.0, 0.0};
    for (int j = static_cast<int>(a.size()) - 1; j >= 0; --j)
      sum += 1.0 / (a[j] - w) - 1.0 / (b[j] - w);
    return sum;
  }

  cd log_det(cd w) const {
    // Per-pair principal logs: in the closed upper half plane each factor's
    // argument stays inside (-pi, 0] (or equals +pi at a real point above the
    // spectra, where the pair cancels), so the pairwise sum is the
    // continuous branch anchored at Im = 0.
    cd sum{0.0, 0.0};
    for (int j = static_cast<int>(a.size()) - 1; j >= 0; --j)
      sum += std::log(a[j] - w) - std::log(b[j] - w);
    return sum;
  }

  double min_distance(double x) const {
    auto nearest = [x](const Eigen::VectorXd& v) {
      // v is descending; scan by bisection on the reversed order.
      const int n = static_cast<int>(v.size());
      int lo = 0, hi = n - 1;
      while (lo < hi) {
        const int mid = (lo + hi) / 2;
        if (v[mid] > x) lo = mid + 1; else hi = mid;
      }
      double d = std::abs(v[lo] - x);
      if (lo > 0) d = std::min(d, std::abs(v[lo - 1] - x));
      if (lo + 1 < n) d = std::min(d, std::abs(v[lo + 1] - x));
      return d;
    };
    return std::min(nearest(a), nearest(b));
  }
};

// Gauss-7 / Kronrod-15 pair on [-1, 1].
constexpr double kKronrodNodes[8] = {
    0.991455371120813, 0.949107912342759, 0.864864423359769,
    0.741531185599394, 0.586087235467691, 0.405845151377397,
    0.207784955007898, 0.0};
constexpr double kKronrodWeights[8] = {
    0.022935322010529, 0.063092092629979, 0.104790010322250,
    0.140653259715525, 0.169004726639267, 0.190350578064785,
    0.204432940075298, 0.209482141084728};
constexpr double kGaussWeights[4] = {
    0.129484966168870, 0.279705391489277, 0.381830050505119,
    0.417959183673469};

struct QuadBudget {
  long evaluations = 0;
  long limit = 8'000'000;
};

// One GK15 panel of f over [t0, t1] (parameter space); err = |K15 - G7|,
// l1 estimates the integral of |f| for the rounding floor.
template <typename F>
cd gk15(const F& f, double t0, double t1, double& err, double& l1,
        QuadBudget& budget) {
  const double c = 0.5 * (t0 + t1), h = 0.5 * (t1 - t0);
  cd ik{0.0, 0.0}, ig{0.0, 0.0};
  double al = 0.0;
  for (int i = 0; i < 8; ++i) {
    const double x = kKronrodNodes[i];
    if (i == 7) {
      const cd v = f(c);
      budget.evaluations += 1;
      ik += kKronrodWeights[i] * v;
      ig += kGaussWeights[3] * v;
      al += kKronrodWeights[i] * std::abs(v);
    } else {
      const cd vp = f(c + h * x);
      const cd vm = f(c - h * x);
      budget.evaluations += 2;
      ik += kKronrodWeights[i] * (vp + vm);
      if (i % 2 == 1) ig += kGaussWeights[i / 2] * (vp + vm);
      al += kKronrodWeights[i] * (std::abs(vp) + std::abs(vm));
    }
  }
  err = std::abs(ik - ig) * h;
  l1 = al * h;
  return ik * h;
}

template <typename F>
cd adaptive_panel(const F& f, double t0, double t1, double tol, int depth,
                  QuadBudget& budget) {
  double err = 0.0, l1 = 0.0;
  const cd coarse = gk15(f, t0, t1, err, l1, budget);
  // The error estimate bottoms out at the summation noise of the integrand;
  // refining past that floor only splits panels forever.
  const double noise = 64.0 * std::numeric_limits<double>::epsilon() * l1;
  if (err <= tol || err <= noise || depth >= 52) {
    if (depth >= 52 && err > 64.0 * tol && err > noise)
      fail(errc::solver_failure, "contour quadrature did not converge");
    return coarse;
  }
  if (budget.evaluations > budget.limit)
    fail(errc::solver_failure, "contour quadrature exceeded its evaluation budget");
  const double mid = 0.5 * (t0 + t1);
  return adaptive_panel(f, t0, mid, 0.5 * tol, depth + 1, budget) +
         adaptive_panel(f, mid, t1, 0.5 * tol, depth + 1, budget);
}

// Integral of the trace along the straight segment z0 -> z1, panels split at
// the projections of the real poles onto the segment.
cd integrate_segment(const PolePair& poles, cd z0, cd z1, double tol,
                     QuadBudget& budget) {
  const cd d = z1 - z0;
  const double len2 = std::norm(d);
  if (len2 == 0.0) return {0.0, 0.0};

  std::vector<double> cuts{0.0, 1.0};
  auto add_projections = [&](const Eigen::VectorXd& ps) {
    for (int j = 0; j < ps.size(); ++j) {
      const double t = ((ps[j] - std::real(z0)) * std::real(d) +
                        (0.0 - std::imag(z0)) * std::imag(d)) / len2;
      if (t > 1e-12 && t < 1.0 - 1e-12) cuts.push_back(t);
    }
  };
  add_projections(poles.a);
  add_projections(poles.b);
  std::sort(cuts.begin(), cuts.end());
  cuts.erase(std::unique(cuts.begin(), cuts.end(),
                         [](double x, double y) { return y - x < 1e-13; }),
             cuts.end());
  if (cuts.back() != 1.0) cuts.push_back(1.0);

  const auto f = [&](double t) { return poles.trace(z0 + t * d) * d; };
  const double per_panel = tol / static_cast<double>(cuts.size());
  cd total{0.0, 0.0};
  for (std::size_t i = 0; i + 1 < cuts.size(); ++i)
    total += adaptive_panel(f, cuts[i], cuts[i + 1], per_panel, 0, budget);
  return total;
}

void validate_schedule(std::span<const double> etas, std::size_t min_count) {
  if (etas.size() < min_count)
    fail(errc::boundary_limit_unstable, "smoothing schedule is too short");
  for (std::size_t i = 0; i < etas.size(); ++i) {
    if (!(etas[i] > 0.0))
      fail(errc::boundary_limit_unstable, "smoothing heights must be positive");
    if (i > 0 && !(etas[i] < etas[i - 1]))
      fail(errc::boundary_limit_unstable, "smoothing schedule must decrease");
  }
}

}  // namespace

std::complex<double> trace_resolvent_diff(const EigenSystem& eigH,
                                          const EigenSystem& eigH0,
                                          const TransformParams& params,
                                          std::complex<double> w) {
  PolePair poles(eigH, eigH0, params);
  if (std::imag(w) == 0.0 && poles.min_distance(std::real(w)) < 1e-14) {
    std::ostringstream msg;
    msg << "w = " << std::real(w) << " collides with a transformed eigenvalue";
    fail(errc::pole_proximity, msg.str());
  }
  return poles.trace(w);
}

std::complex<double> log_perturbation_determinant(const EigenSystem& eigH,
                                                  const EigenSystem& eigH0,
                                                  const TransformParams& params,
                                                  const Contour& path) {
  PolePair poles(eigH, eigH0, params);
  if (path.nodes.size() < 2)
    fail(errc::path_refinement, "path needs at least two nodes");
  if (!(path.start > std::max(poles.a[0], poles.b[0])))
    fail(errc::path_refinement, "path start must sit above both transformed spectra");

  cd prev = poles.log_det(path.nodes.front());
  if (std::abs(std::imag(prev)) > 1e-9)
    fail(errc::path_refinement, "branch anchor is not real at the path start");

  for (std::size_t s = 0; s + 1 < path.nodes.size(); ++s) {
    // Subdivide each segment until consecutive Im increments stay below pi/2.
    struct Piece { cd z0, z1; cd f0; int depth; };
    std::vector<Piece> stack{{path.nodes[s], path.nodes[s + 1],
                              poles.log_det(path.nodes[s]), 0}};
    while (!stack.empty()) {
      Piece p = stack.back();
      stack.pop_back();
      const cd f1 = poles.log_det(p.z1);
      if (std::abs(std::imag(f1) - std::imag(p.f0)) < kPi / 2.0) {
        prev = f1;
        continue;
      }
      if (p.depth >= 48)
        fail(errc::path_refinement,
             "branch increment stayed above pi/2 after maximal subdivision");
      const cd mid = 0.5 * (p.z0 + p.z1);
      // Process the near half first (stack is LIFO).
      stack.push_back({mid, p.z1, poles.log_det(mid), p.depth + 1});
      stack.push_back({p.z0, mid, p.f0, p.depth + 1});
    }
  }
  return poles.log_det(path.nodes.back());
}

SsfPoint ssf_contour(const EigenSystem& eigH, const EigenSystem& eigH0,
                     const TransformParams& params, double lambda,
                     std::span<const double> eta_schedule, double quad_tol,
                     double spread_tolerance) {
  validate_schedule(eta_schedule, 3);
  PolePair poles(eigH, eigH0, params);

  SsfPoint point;
  point.per_eta.reserve(eta_schedule.size());
  for (double eta : eta_schedule) {
    const Contour path = make_contour(eigH, eigH0, params, lambda, eta);
    QuadBudget budget;
    cd integral{0.0, 0.0};
    const double per_segment = quad_tol / static_cast<double>(path.nodes.size() - 1);
    for (std::size_t s = 0; s + 1 < path.nodes.size(); ++s)
      integral += integrate_segment(poles, path.nodes[s], path.nodes[s + 1],
                                    per_segment, budget);
    // Boundary value of the transformed pair; the invariance negation is
    // applied after the height extrapolation.
    point.per_eta.push_back(std::imag(integral) / kPi);
  }

  const Extrapolated ex = extrapolate_to_zero(eta_schedule, point.per_eta);
  point.value = -ex.value;
  point.error = ex.error;
  if (std::isfinite(spread_tolerance) && !(point.error <= spread_tolerance)) {
    std::ostringstream msg;
    msg << "extrapolation spread " << point.error << " exceeds tolerance "
        << spread_tolerance << " at lambda = " << lambda;
    fail(errc::boundary_limit_unstable, msg.str());
  }
  return point;
}

SsfPoint ssf_determinant(const EigenSystem& eigH, const EigenSystem& eigH0,
                         const TransformParams& params, double lambda,
                         std::span<const double> eta_schedule) {
  validate_schedule(eta_schedule, 3);
  SsfPoint point;
  point.per_eta.reserve(eta_schedule.size());
  for (double eta : eta_schedule) {
    const Contour path = make_contour(eigH, eigH0, params, lambda, eta);
    const cd ld = log_perturbation_determinant(eigH, eigH0, params, path);
    point.per_eta.push_back(-std::imag(ld) / kPi);
  }
  const Extrapolated ex = extrapolate_to_zero(eta_schedule, point.per_eta);
  point.value = -ex.value;
  point.error = ex.error;
  return point;
}

std::vector<double> geometric_schedule(double eta0, double ratio, int count) {
  if (!(eta0 > 0.0) || !(ratio > 0.0) || !(ratio < 1.0) || count < 1)
    fail(errc::boundary_limit_unstable, "invalid geometric schedule");
  std::vector<double> out(count);
  double v = eta0;
  for (int i = 0; i < count; ++i, v *= ratio) out[i] = v;
  return out;
}

std::vector<double> smoothing_schedule(const Grid& grid, double lambda,
                                       const TransformParams& params,
                                       std::span<const double> spacing_factors) {
  const double spacing = local_free_spacing(grid, lambda);
  const double slope = transformed_slope(lambda, params);
  std::vector<double> out;
  out.reserve(spacing_factors.size());
  for (double f : spacing_factors) out.push_back(f * spacing * slope);
  validate_schedule(out, 1);
  return out;
}

double transformed_gap(const EigenSystem& eigH, const EigenSystem& eigH0,
                       const TransformParams& params, double lambda) {
  PolePair poles(eigH, eigH0, params);
  return poles.min_distance(transformed_energy(lambda, params));
}

Extrapolated extrapolate_to_zero(std::span<const double> etas,
                                 std::span<const double> values) {
  const int n = static_cast<int>(etas.size());
  if (n < 1 || values.size() != etas.size())
    fail(errc::boundary_limit_unstable, "extrapolation needs matching samples");
  if (n == 1) return {values[0], std::abs(values[0])};

  const int degree = std::min(2, n - 1);
  auto window_extrapolant = [&](int first, int deg) {
    // Lagrange value at 0 of the degree-`deg` interpolant through
    // (etas[first..first+deg], values[...]).
    double p0 = 0.0;
    for (int i = 0; i <= deg; ++i) {
      double li = 1.0;
      for (int j = 0; j <= deg; ++j) {
        if (j == i) continue;
        li *= (0.0 - etas[first + j]) / (etas[first + i] - etas[first + j]);
      }
      p0 += li * values[first + i];
    }
    return p0;
  };

  const int last_window = n - 1 - degree;
  const double value = window_extrapolant(last_window, degree);
  double previous;
  if (last_window >= 1)
    previous = window_extrapolant(last_window - 1, degree);
  else
    previous = window_extrapolant(n - degree, degree - 1);
  return {value, std::abs(value - previous)};
}

}  // namespace ssf
