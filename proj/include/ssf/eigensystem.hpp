#ifndef SSF_EIGENSYSTEM_HPP
#define SSF_EIGENSYSTEM_HPP

#include <Eigen/Dense>
#include <limits>

#include "ssf/hamiltonian.hpp"

namespace ssf {

// Ascending eigendecomposition. Eigenvalues are always complete; eigenvector
// columns may cover only the bottom of the spectrum (vector_count() columns,
// matching eigenvalues[0..m-1]) when a cap was requested. Vectors satisfy
// ||H v - lambda v|| <= 1e-8 ||H|| and are orthonormal.
struct EigenSystem {
  Eigen::VectorXd eigenvalues;   // size N, ascending
  Eigen::MatrixXd eigenvectors;  // N x m, m <= N
  OperatorLabel source = OperatorLabel::free_op;
  double operator_norm = 0.0;    // max |eigenvalue|

  int size() const { return static_cast<int>(eigenvalues.size()); }
  int vector_count() const { return static_cast<int>(eigenvectors.cols()); }
  double min_eigenvalue() const { return eigenvalues[0]; }
  double max_eigenvalue() const { return eigenvalues[size() - 1]; }
};

// Full decomposition: all eigenvalues and all eigenvectors.
EigenSystem eigendecompose(const HamiltonianMatrix& H);

// All eigenvalues; eigenvectors only for eigenvalues <= vector_energy_cap.
// Pass -inf for an eigenvalues-only decomposition.
EigenSystem eigendecompose(const HamiltonianMatrix& H, double vector_energy_cap);

inline double eigenvalues_only_cap() {
  return -std::numeric_limits<double>::infinity();
}

}  // namespace ssf

#endif
