#include "ssf/contour.hpp"

namespace ssf {

Contour make_contour(const EigenSystem& eigH, const EigenSystem& eigH0,
                     const TransformParams& params, double lambda, double eta) {
  if (!(eta > 0.0)) fail(errc::pole_proximity, "contour height must be positive");
  if (!(lambda + params.shift > 1e-9))
    fail(errc::shift_too_small, "lambda + shift must stay positive");
  Contour c;
  c.start = contour_anchor(eigH, eigH0, params);
  c.eta = eta;
  c.end = {transformed_energy(lambda, params), eta};
  c.nodes = {std::complex<double>{c.start, 0.0},
             std::complex<double>{c.start, eta}, c.end};
  return c;
}

}  // namespace ssf
