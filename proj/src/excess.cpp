#include "ssf/excess.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "ssf/resolvent_ssf.hpp"
#include "ssf/spectral.hpp"

namespace ssf {

namespace {

// Sum of <v_j, theta^2 v_j> over stored eigenvectors with a step weight.
double weighted_vector_sum(const EigenSystem& sys, const Eigen::VectorXd& theta2,
                           const Eigen::VectorXd& step_weights) {
  double sum = 0.0;
  for (int j = 0; j < sys.vector_count(); ++j) {
    if (step_weights[j] == 0.0) continue;
    sum += step_weights[j] * sys.eigenvectors.col(j).cwiseAbs2().dot(theta2);
  }
  return sum;
}

// Boundary-smoothed spectral step at height eta (transformed-plane units):
// 1 for eigenvalues far below lambda, 0 far above, arctan crossover.
Eigen::VectorXd smoothed_steps(const Eigen::VectorXd& eigenvalues,
                               const TransformParams& params, double lambda,
                               double eta, int count) {
  const double mu0 = transformed_energy(lambda, params);
  Eigen::VectorXd w(count);
  for (int j = 0; j < count; ++j) {
    const double mj = transformed_energy(eigenvalues[j], params);
    w[j] = 1.0 + std::arg(std::complex<double>(mj - mu0, -eta)) / kPi;
  }
  return w;
}

void require_vectors_below(const EigenSystem& sys, double lambda) {
  const int needed = count_below(sys, lambda);
  if (sys.vector_count() < needed)
    fail(errc::solver_failure,
         "eigensystem lacks eigenvectors below the requested energy");
}

}  // namespace

double excess_charge_R(const Grid& grid, const EigenSystem& eigH,
                       const EigenSystem& eigH0, double lambda,
                       const CutoffProfile& profile, CutoffGuard guard) {
  // Same degeneracy guard as the counting difference.
  (void)counting_difference(eigH, eigH0, lambda);
  require_vectors_below(eigH, lambda);
  require_vectors_below(eigH0, lambda);

  const Eigen::VectorXd theta2 = cutoff_weights(grid, profile, guard);
  auto sharp = [&](const EigenSystem& sys) {
    Eigen::VectorXd step = Eigen::VectorXd::Zero(sys.vector_count());
    const int below = count_below(sys, lambda);
    for (int j = 0; j < below; ++j) step[j] = 1.0;
    return weighted_vector_sum(sys, theta2, step);
  };
  return sharp(eigH) - sharp(eigH0);
}

double excess_charge_smoothed(const Grid& grid, const EigenSystem& eigH,
                              const EigenSystem& eigH0,
                              const TransformParams& params, double lambda,
                              const CutoffProfile& profile,
                              std::span<const double> eta_schedule,
                              CutoffGuard guard) {
  if (eta_schedule.empty())
    fail(errc::boundary_limit_unstable, "need at least one smoothing height");
  validate_transform(params, std::min(eigH.min_eigenvalue(), eigH0.min_eigenvalue()));

  const Eigen::VectorXd theta2 = cutoff_weights(grid, profile, guard);
  // Box average of theta_R^2: what a delocalized state sees.
  const double span = (grid.kind == GridKind::line) ? 2.0 * grid.half_width
                                                    : grid.half_width;
  const double box_mean = theta2.sum() * grid.spacing() / span;

  const int mH = eigH.vector_count();
  const int m0 = eigH0.vector_count();
  // States with stored vectors get exact cutoff expectations; the rest enter
  // through the box mean.
  Eigen::VectorXd pH(mH), p0(m0);
  for (int j = 0; j < mH; ++j)
    pH[j] = eigH.eigenvectors.col(j).cwiseAbs2().dot(theta2);
  for (int j = 0; j < m0; ++j)
    p0[j] = eigH0.eigenvectors.col(j).cwiseAbs2().dot(theta2);

  std::vector<double> values;
  values.reserve(eta_schedule.size());
  for (double eta : eta_schedule) {
    const Eigen::VectorXd wH = smoothed_steps(eigH.eigenvalues, params, lambda, eta, eigH.size());
    const Eigen::VectorXd w0 = smoothed_steps(eigH0.eigenvalues, params, lambda, eta, eigH0.size());
    double v = 0.0;
    for (int j = 0; j < mH; ++j) v += wH[j] * pH[j];
    for (int j = 0; j < m0; ++j) v -= w0[j] * p0[j];
    double tail = 0.0;
    for (int j = eigH.size() - 1; j >= mH; --j) tail += wH[j];
    for (int j = eigH0.size() - 1; j >= m0; --j) tail -= w0[j];
    values.push_back(v + box_mean * tail);
  }
  if (values.size() == 1) return values[0];
  const Extrapolated ex = extrapolate_to_zero(eta_schedule, values);
  return ex.value;
}

ExcessResult extrapolate_R(std::span<const double> radii,
                           std::span<const double> values,
                           const ExtrapolateOptions& opts) {
  const int n = static_cast<int>(radii.size());
  if (n < 4 || values.size() != radii.size())
    fail(errc::extrapolation_unreliable, "need >= 4 (R, Z_R) samples");
  for (int i = 1; i < n; ++i) {
    if (!(radii[i] > radii[i - 1]))
      fail(errc::extrapolation_unreliable, "radii must increase");
    const double q = radii[i] / radii[i - 1];
    const double q0 = radii[1] / radii[0];
    if (q < 0.6 * q0 || q > 1.7 * q0)
      fail(errc::extrapolation_unreliable, "radii must be roughly geometric");
  }

  // Separable fit: (Z_inf, c) by linear least squares at fixed epsilon;
  // epsilon by coarse scan over its window plus golden-section refinement.
  auto solve_at = [&](double eps, double* z_out) {
    double s11 = n, s12 = 0, s22 = 0, b1 = 0, b2 = 0;
    for (int i = 0; i < n; ++i) {
      const double g = std::pow(radii[i], -eps);
      s12 += g;
      s22 += g * g;
      b1 += values[i];
      b2 += g * values[i];
    }
    const double det = s11 * s22 - s12 * s12;
    if (std::abs(det) < 1e-300) return std::numeric_limits<double>::infinity();
    const double z_inf = (s22 * b1 - s12 * b2) / det;
    const double c = (s11 * b2 - s12 * b1) / det;
    double rss = 0.0;
    for (int i = 0; i < n; ++i) {
      const double r = values[i] - z_inf - c * std::pow(radii[i], -eps);
      rss += r * r;
    }
    if (z_out) *z_out = z_inf;
    return rss;
  };

  ExcessResult best;
  best.radii.assign(radii.begin(), radii.end());
  best.values.assign(values.begin(), values.end());
  const int scan = 600;
  const double eps_lo = 0.02, eps_hi = 3.0;
  double best_eps = eps_lo;
  double best_rss = std::numeric_limits<double>::infinity();
  for (int s = 0; s < scan; ++s) {
    const double eps = eps_lo + (eps_hi - eps_lo) * static_cast<double>(s) /
                                    static_cast<double>(scan - 1);
    const double rss = solve_at(eps, nullptr);
    if (rss < best_rss) {
      best_rss = rss;
      best_eps = eps;
    }
  }
  {
    const double step = (eps_hi - eps_lo) / static_cast<double>(scan - 1);
    double a = std::max(eps_lo, best_eps - 2.0 * step);
    double b = std::min(eps_hi, best_eps + 2.0 * step);
    const double gr = 0.5 * (std::sqrt(5.0) - 1.0);
    double x1 = b - gr * (b - a), x2 = a + gr * (b - a);
    double f1 = solve_at(x1, nullptr), f2 = solve_at(x2, nullptr);
    for (int it = 0; it < 80; ++it) {
      if (f1 <= f2) {
        b = x2; x2 = x1; f2 = f1;
        x1 = b - gr * (b - a);
        f1 = solve_at(x1, nullptr);
      } else {
        a = x1; x1 = x2; f1 = f2;
        x2 = a + gr * (b - a);
        f2 = solve_at(x2, nullptr);
      }
    }
    best_eps = 0.5 * (a + b);
    best_rss = solve_at(best_eps, &best.z_inf);
    best.epsilon_hat = best_eps;
  }
  best.residual = std::sqrt(best_rss / static_cast<double>(n));
  best.at_upper_constraint = best.epsilon_hat > 2.95;

  if (best.residual > opts.residual_threshold) {
    std::ostringstream msg;
    msg << "fit residual " << best.residual << " exceeds threshold "
        << opts.residual_threshold;
    fail(errc::extrapolation_unreliable, msg.str());
  }
  if (opts.require_monotone_tail) {
    // |Z_R - Z_inf| must not grow over the last three samples.
    for (int i = n - 2; i >= n - 3 && i >= 0; --i) {
      if (std::abs(values[i + 1] - best.z_inf) >
          std::abs(values[i] - best.z_inf) + 1e-12)
        fail(errc::extrapolation_unreliable, "tail is not monotone toward the fit limit");
    }
  }
  return best;
}

}  // namespace ssf
