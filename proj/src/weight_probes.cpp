#include "ssf/weight_probes.hpp"

#include <Eigen/Eigenvalues>
#include <complex>
#include <sstream>

#include "ssf/hamiltonian.hpp"

namespace ssf {

void validate_beta(double beta, double alpha, int dimension) {
  const double hi = 0.5 * (alpha - static_cast<double>(dimension));
  if (!(beta > 1.5) || !(beta < hi)) {
    std::ostringstream msg;
    msg << "beta = " << beta << " outside the admissible window (1.5, " << hi << ")";
    fail(errc::invalid_beta, msg.str());
  }
}

double beta_window_midpoint(double alpha, int dimension) {
  return 0.5 * (1.5 + 0.5 * (alpha - static_cast<double>(dimension)));
}

namespace {

Eigen::VectorXd bracket_weights(const Grid& grid, double exponent) {
  Eigen::VectorXd w(grid.points);
  for (int i = 0; i < grid.points; ++i)
    w[i] = std::pow(bracket(grid.node(i)), exponent);
  return w;
}

// A = U mu(Lambda) U^T from a full eigendecomposition.
Eigen::MatrixXd transformed_operator(const EigenSystem& sys,
                                     const TransformParams& params) {
  Eigen::VectorXd mu(sys.size());
  for (int j = 0; j < sys.size(); ++j)
    mu[j] = transformed_energy(sys.eigenvalues[j], params);
  return sys.eigenvectors * mu.asDiagonal() * sys.eigenvectors.transpose();
}

Eigen::MatrixXcd transformed_resolvent(const EigenSystem& sys,
                                       const TransformParams& params,
                                       std::complex<double> z) {
  Eigen::VectorXcd r(sys.size());
  for (int j = 0; j < sys.size(); ++j)
    r[j] = 1.0 / (transformed_energy(sys.eigenvalues[j], params) - z);
  return sys.eigenvectors * r.asDiagonal() * sys.eigenvectors.transpose();
}

}  // namespace

WeightProbe w_trace_probe(const Grid& base_grid, int refinements,
                          const Potential& potential,
                          const TransformParams& params, double beta,
                          int dimension) {
  if (!potential.certificate.valid)
    fail(errc::invalid_beta, "potential carries no decay certificate");
  validate_beta(beta, potential.certificate.alpha, dimension);
  if (refinements < 2) fail(errc::invalid_grid, "need at least 2 refinements");

  WeightProbe probe;
  probe.beta = beta;
  int n = base_grid.points;
  for (int level = 0; level < refinements; ++level, n = 2 * n + 1) {
    // N -> 2N+1 keeps (N+1) h = const exact under halving.
    Grid g = base_grid;
    g.points = n;
    const HamiltonianMatrix H = build_perturbed(g, potential);
    const HamiltonianMatrix H0 = build_free(g);
    const EigenSystem eigH = eigendecompose(H);
    const EigenSystem eigH0 = eigendecompose(H0);
    validate_transform(params, std::min(eigH.min_eigenvalue(), eigH0.min_eigenvalue()));

    const Eigen::VectorXd w = bracket_weights(g, beta);
    Eigen::MatrixXd W = transformed_operator(eigH, params) -
                        transformed_operator(eigH0, params);
    W = w.asDiagonal() * W * w.asDiagonal();
    // W is symmetric: the trace norm is the sum of |eigenvalues|.
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(W, Eigen::EigenvaluesOnly);
    if (es.info() != Eigen::Success)
      fail(errc::solver_failure, "weighted-difference eigensolve failed");
    probe.grid_sizes.push_back(n);
    probe.singular_value_sums.push_back(es.eigenvalues().cwiseAbs().sum());
  }
  return probe;
}

std::vector<double> boundary_limit_probe(const Grid& grid,
                                         const EigenSystem& eigH,
                                         const EigenSystem& eigH0,
                                         const TransformParams& params,
                                         double lambda, double beta,
                                         std::span<const double> eta_schedule) {
  if (eigH.vector_count() != eigH.size() || eigH0.vector_count() != eigH0.size())
    fail(errc::solver_failure, "boundary probe needs full eigenvector sets");
  validate_transform(params, std::min(eigH.min_eigenvalue(), eigH0.min_eigenvalue()));

  const Eigen::VectorXd w = bracket_weights(grid, -beta);
  std::vector<double> norms;
  norms.reserve(eta_schedule.size());
  for (double eta : eta_schedule) {
    if (!(eta > 0.0)) fail(errc::boundary_limit_unstable, "heights must be positive");
    const std::complex<double> z =
        transformed_energy(std::complex<double>(lambda, eta), params);
    const Eigen::MatrixXcd T = w.asDiagonal() *
                               transformed_resolvent(eigH0, params, z) *
                               transformed_resolvent(eigH, params, z) *
                               w.asDiagonal();
    // Largest singular value via the Hermitian square.
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(T.adjoint() * T,
                                                       Eigen::EigenvaluesOnly);
    if (es.info() != Eigen::Success)
      fail(errc::solver_failure, "resolvent-product eigensolve failed");
    norms.push_back(std::sqrt(std::max(0.0, es.eigenvalues().maxCoeff())));
  }
  return norms;
}

}  // namespace ssf
