#ifndef SSF_GRID_HPP
#define SSF_GRID_HPP

#include <Eigen/Dense>

#include "ssf/errors.hpp"

namespace ssf {

inline constexpr double kPi = 3.14159265358979323846;

enum class GridKind { line, radial };

// Uniform Dirichlet grid. Line grids cover (-L, L) with nodes
// x_i = -L + i h, h = 2L/(N+1); radial grids cover (0, L) with nodes
// r_i = i h, h = L/(N+1). Boundary nodes carry the Dirichlet condition and
// are not stored.
struct Grid {
  GridKind kind = GridKind::line;
  double half_width = 0.0;      // L
  int points = 0;               // N
  int angular_momentum = 0;     // radial channels only

  double spacing() const {
    const double span = (kind == GridKind::line) ? 2.0 * half_width : half_width;
    return span / static_cast<double>(points + 1);
  }

  double node(int i) const {
    const double h = spacing();
    return (kind == GridKind::line)
               ? -half_width + h * static_cast<double>(i + 1)
               : h * static_cast<double>(i + 1);
  }

  Eigen::VectorXd nodes() const {
    Eigen::VectorXd x(points);
    for (int i = 0; i < points; ++i) x[i] = node(i);
    return x;
  }
};

inline void validate_grid(const Grid& g) {
  if (g.points < 3) fail(errc::invalid_grid, "need at least 3 interior nodes");
  if (!(g.half_width > 0.0)) fail(errc::invalid_grid, "box size must be positive");
  if (!(g.spacing() > 0.0)) fail(errc::invalid_grid, "node spacing must be positive");
  if (g.angular_momentum < 0) fail(errc::invalid_grid, "angular momentum must be nonnegative");
  if (g.kind == GridKind::line && g.angular_momentum != 0)
    fail(errc::invalid_grid, "line grids carry no angular momentum");
}

inline Grid make_line_grid(double half_width, int points) {
  Grid g{GridKind::line, half_width, points, 0};
  validate_grid(g);
  return g;
}

inline Grid make_radial_grid(double half_width, int points, int angular_momentum) {
  Grid g{GridKind::radial, half_width, points, angular_momentum};
  validate_grid(g);
  return g;
}

// Mean spacing of the free spectrum near energy lambda: pi sqrt(lambda)/L on
// line grids, 2 pi sqrt(lambda)/L on radial half-lines.
inline double local_free_spacing(const Grid& g, double lambda) {
  const double k = std::sqrt(std::max(lambda, 1e-12));
  const double factor = (g.kind == GridKind::line) ? 1.0 : 2.0;
  return factor * kPi * k / g.half_width;
}

}  // namespace ssf

#endif
