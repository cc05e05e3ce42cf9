#include "ssf/transform.hpp"

namespace ssf {

Eigen::VectorXd transform_spectrum(const EigenSystem& sys, const TransformParams& p) {
  validate_transform(p, sys.min_eigenvalue());
  Eigen::VectorXd out(sys.size());
  for (int j = 0; j < sys.size(); ++j)
    out[j] = transformed_energy(sys.eigenvalues[j], p);
  return out;
}

}  // namespace ssf
