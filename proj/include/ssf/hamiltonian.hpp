#ifndef SSF_HAMILTONIAN_HPP
#define SSF_HAMILTONIAN_HPP

#include <Eigen/Dense>

#include "ssf/grid.hpp"
#include "ssf/potential.hpp"

namespace ssf {

enum class OperatorLabel { free_op, perturbed_op };

// Symmetric tridiagonal discretization of -d^2/dx^2 (+ centrifugal term on
// radial grids) (+ V on the diagonal). The off-diagonal is the constant
// -1/h^2 of the 3-point stencil, so H - H0 is exactly diagonal.
struct HamiltonianMatrix {
  Grid grid;
  Eigen::VectorXd diagonal;
  double off_diagonal = 0.0;
  OperatorLabel label = OperatorLabel::free_op;

  int size() const { return static_cast<int>(diagonal.size()); }

  Eigen::MatrixXd dense() const {
    const int n = size();
    Eigen::MatrixXd m = Eigen::MatrixXd::Zero(n, n);
    m.diagonal() = diagonal;
    for (int i = 0; i + 1 < n; ++i) m(i, i + 1) = m(i + 1, i) = off_diagonal;
    return m;
  }

  Eigen::VectorXd apply(const Eigen::VectorXd& v) const {
    const int n = size();
    Eigen::VectorXd y = diagonal.cwiseProduct(v);
    for (int i = 0; i + 1 < n; ++i) {
      y[i] += off_diagonal * v[i + 1];
      y[i + 1] += off_diagonal * v[i];
    }
    return y;
  }

  // Gershgorin bound on the spectral radius.
  double norm_bound() const {
    double b = 0.0;
    const int n = size();
    for (int i = 0; i < n; ++i) {
      double row = std::abs(diagonal[i]);
      if (i > 0) row += std::abs(off_diagonal);
      if (i + 1 < n) row += std::abs(off_diagonal);
      b = std::max(b, row);
    }
    return b;
  }
};

HamiltonianMatrix build_free(const Grid& grid);
HamiltonianMatrix build_perturbed(const Grid& grid, const Potential& potential);

}  // namespace ssf

#endif
