#include "ssf/hamiltonian.hpp"

namespace ssf {

HamiltonianMatrix build_free(const Grid& grid) {
  validate_grid(grid);
  const int n = grid.points;
  const double h = grid.spacing();
  HamiltonianMatrix H;
  H.grid = grid;
  H.label = OperatorLabel::free_op;
  H.off_diagonal = -1.0 / (h * h);
  H.diagonal = Eigen::VectorXd::Constant(n, 2.0 / (h * h));
  if (grid.kind == GridKind::radial && grid.angular_momentum > 0) {
    const double ll1 = static_cast<double>(grid.angular_momentum) *
                       static_cast<double>(grid.angular_momentum + 1);
    for (int i = 0; i < n; ++i) {
      const double r = grid.node(i);
      H.diagonal[i] += ll1 / (r * r);
    }
  }
  return H;
}

HamiltonianMatrix build_perturbed(const Grid& grid, const Potential& potential) {
  HamiltonianMatrix H = build_free(grid);
  if (grid.kind == GridKind::line) {
    if (!potential.even_parity)
      fail(errc::invalid_potential, "line grids require an even potential");
    // Spot-check: symmetric nodes must carry equal values.
    const int n = grid.points;
    for (int i = 0; i < std::min(n / 2, 16); ++i) {
      const double vl = potential(grid.node(i));
      const double vr = potential(grid.node(n - 1 - i));
      if (std::abs(vl - vr) > 1e-12 * std::max(1.0, potential.sup_abs()))
        fail(errc::invalid_potential, "potential is not even on the grid");
    }
  }
  for (int i = 0; i < grid.points; ++i) H.diagonal[i] += potential(grid.node(i));
  H.label = OperatorLabel::perturbed_op;
  return H;
}

}  // namespace ssf
