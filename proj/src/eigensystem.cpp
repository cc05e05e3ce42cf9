#include "ssf/eigensystem.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

#include "ssf/errors.hpp"

namespace ssf {

namespace {

// Splitmix64: deterministic start vectors for inverse iteration.
struct SplitMix {
  std::uint64_t state;
  double next() {
    state += 0x9e3779b97f4a7c15ULL;
    std::uint64_t z = state;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    z = z ^ (z >> 31);
    return static_cast<double>(z >> 11) * 0x1.0p-53 - 0.5;
  }
};

// LU factorization of (T - shift I) with partial pivoting for a symmetric
// tridiagonal T = (diag, off). Pivoting introduces one extra superdiagonal.
// Vanishing pivots are floored relative to the matrix scale, keeping the
// solve amplitude near 1/eps rather than overflowing.
struct TridiagLU {
  Eigen::VectorXd dd, du, du2, dl;
  std::vector<bool> swapped;

  TridiagLU(const Eigen::VectorXd& diag, double off, double shift, double scale) {
    const int n = static_cast<int>(diag.size());
    const double floor =
        std::numeric_limits<double>::epsilon() * std::max(scale, 1e-300);
    dd = diag.array() - shift;
    du = Eigen::VectorXd::Constant(std::max(n - 1, 0), off);
    dl = Eigen::VectorXd::Constant(std::max(n - 1, 0), off);
    du2 = Eigen::VectorXd::Zero(std::max(n - 2, 0));
    swapped.assign(std::max(n - 1, 0), false);
    for (int i = 0; i + 1 < n; ++i) {
      if (std::abs(dd[i]) >= std::abs(dl[i])) {
        if (std::abs(dd[i]) < floor) dd[i] = dd[i] < 0.0 ? -floor : floor;
        const double m = dl[i] / dd[i];
        dl[i] = m;
        dd[i + 1] -= m * du[i];
      } else {
        swapped[i] = true;
        const double m = dd[i] / dl[i];
        dd[i] = dl[i];
        dl[i] = m;
        const double tmp = du[i];
        du[i] = dd[i + 1];
        dd[i + 1] = tmp - m * dd[i + 1];
        if (i + 2 < n) {
          du2[i] = du[i + 1];
          du[i + 1] = -m * du[i + 1];
        }
      }
    }
    if (n > 0 && std::abs(dd[n - 1]) < floor)
      dd[n - 1] = dd[n - 1] < 0.0 ? -floor : floor;
  }

  void solve_in_place(Eigen::VectorXd& b) const {
    const int n = static_cast<int>(b.size());
    for (int i = 0; i + 1 < n; ++i) {
      if (swapped[i]) std::swap(b[i], b[i + 1]);
      b[i + 1] -= dl[i] * b[i];
    }
    for (int i = n - 1; i >= 0; --i) {
      double v = b[i];
      if (i + 1 < n) v -= du[i] * b[i + 1];
      if (i + 2 < n) v -= du2[i] * b[i + 2];
      b[i] = v / dd[i];
    }
  }
};

Eigen::VectorXd apply_tridiag(const Eigen::VectorXd& diag, double off,
                              const Eigen::VectorXd& v) {
  const int n = static_cast<int>(v.size());
  Eigen::VectorXd y = diag.cwiseProduct(v);
  for (int i = 0; i + 1 < n; ++i) {
    y[i] += off * v[i + 1];
    y[i + 1] += off * v[i];
  }
  return y;
}

// Inverse iteration for the vector at eigenvalues[j], orthogonalized against
// the previously computed columns of the same near-degenerate cluster.
void inverse_iteration_vector(const Eigen::VectorXd& diag, double off,
                              const Eigen::VectorXd& eigenvalues, int j,
                              int cluster_begin, Eigen::MatrixXd& vectors,
                              double scale) {
  const int n = static_cast<int>(diag.size());
  const double eps = std::numeric_limits<double>::epsilon();
  // Tiny shift separation inside a cluster, as in standard inverse iteration.
  const double shift =
      eigenvalues[j] + static_cast<double>(j - cluster_begin) * 10.0 * eps * scale;

  for (int attempt = 0; attempt < 3; ++attempt) {
    TridiagLU lu(diag, off, shift, scale);
    SplitMix rng{0x2545f4914f6cdd1dULL ^ (static_cast<std::uint64_t>(j) * 0x100000001b3ULL + attempt)};
    Eigen::VectorXd v(n);
    for (int i = 0; i < n; ++i) v[i] = rng.next();
    v.normalize();
    for (int it = 0; it < 5; ++it) {
      lu.solve_in_place(v);
      // rescale by the peak first: solve amplitudes reach 1/eps
      const double peak = v.cwiseAbs().maxCoeff();
      if (!(peak > 0.0) || !std::isfinite(peak)) break;
      v /= peak;
      for (int m = cluster_begin; m < j; ++m)
        v -= vectors.col(m).dot(v) * vectors.col(m);
      const double nv = v.norm();
      if (!(nv > 0.0) || !std::isfinite(nv)) break;
      v /= nv;
      const double resid = (apply_tridiag(diag, off, v) - eigenvalues[j] * v).norm();
      if (it >= 1 && resid <= 1e-9 * scale) {
        vectors.col(j) = v;
        return;
      }
    }
    const double resid = (apply_tridiag(diag, off, v) - eigenvalues[j] * v).norm();
    if (std::isfinite(resid) && resid <= 1e-8 * scale) {
      vectors.col(j) = v;
      return;
    }
  }
  std::ostringstream msg;
  msg << "inverse iteration failed for eigenvalue index " << j;
  fail(errc::solver_failure, msg.str());
}

EigenSystem decompose_diagonal(const HamiltonianMatrix& H, double cap) {
  const int n = H.size();
  std::vector<int> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](int a, int b) { return H.diagonal[a] < H.diagonal[b]; });
  EigenSystem sys;
  sys.source = H.label;
  sys.eigenvalues.resize(n);
  for (int i = 0; i < n; ++i) sys.eigenvalues[i] = H.diagonal[order[i]];
  sys.operator_norm =
      std::max(std::abs(sys.eigenvalues[0]), std::abs(sys.eigenvalues[n - 1]));
  int m = 0;
  while (m < n && sys.eigenvalues[m] <= cap) ++m;
  sys.eigenvectors = Eigen::MatrixXd::Zero(n, m);
  for (int j = 0; j < m; ++j) sys.eigenvectors(order[j], j) = 1.0;
  return sys;
}

}  // namespace

EigenSystem eigendecompose(const HamiltonianMatrix& H, double vector_energy_cap) {
  const int n = H.size();
  if (n < 1) fail(errc::invalid_grid, "empty matrix");
  if (H.off_diagonal == 0.0) return decompose_diagonal(H, vector_energy_cap);

  EigenSystem sys;
  sys.source = H.label;

  Eigen::VectorXd sub = Eigen::VectorXd::Constant(n - 1, H.off_diagonal);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver;
  solver.computeFromTridiagonal(H.diagonal, sub, Eigen::EigenvaluesOnly);
  if (solver.info() != Eigen::Success)
    fail(errc::solver_failure, "tridiagonal eigenvalue iteration did not converge");
  sys.eigenvalues = solver.eigenvalues();
  sys.operator_norm =
      std::max(std::abs(sys.eigenvalues[0]), std::abs(sys.eigenvalues[n - 1]));

  int m = 0;
  while (m < n && sys.eigenvalues[m] <= vector_energy_cap) ++m;
  sys.eigenvectors.resize(n, m);

  const double scale = std::max(sys.operator_norm, 1e-300);
  const double cluster_gap = 1e-5 * scale;
  int cluster_begin = 0;
  for (int j = 0; j < m; ++j) {
    if (j > 0 && sys.eigenvalues[j] - sys.eigenvalues[j - 1] > cluster_gap)
      cluster_begin = j;
    inverse_iteration_vector(H.diagonal, H.off_diagonal, sys.eigenvalues, j,
                             cluster_begin, sys.eigenvectors, scale);
  }

  // Residual invariant, rechecked on the assembled system.
  for (int j = 0; j < m; ++j) {
    const double resid =
        (H.apply(sys.eigenvectors.col(j)) - sys.eigenvalues[j] * sys.eigenvectors.col(j))
            .norm();
    if (!(resid <= 1e-8 * scale)) {
      std::ostringstream msg;
      msg << "eigenvector residual " << resid << " exceeds 1e-8 * ||H|| = "
          << 1e-8 * scale << " at index " << j;
      fail(errc::solver_failure, msg.str());
    }
  }
  return sys;
}

EigenSystem eigendecompose(const HamiltonianMatrix& H) {
  return eigendecompose(H, std::numeric_limits<double>::infinity());
}

}  // namespace ssf
