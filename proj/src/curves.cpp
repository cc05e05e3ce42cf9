#include "ssf/curves.hpp"

#include "ssf/errors.hpp"

namespace ssf {

const char* route_name(SsfRoute r) {
  switch (r) {
    case SsfRoute::contour: return "contour";
    case SsfRoute::determinant: return "determinant";
    case SsfRoute::counting: return "counting";
    case SsfRoute::phase: return "phase";
  }
  return "unknown";
}

void validate_curve(const SSFCurve& c) {
  if (c.lambdas.size() < 2) fail(errc::domain_coverage, "curve needs at least 2 samples");
  if (c.lambdas.size() != c.values.size())
    fail(errc::domain_coverage, "curve sample count mismatch");
  for (Eigen::Index i = 0; i + 1 < c.lambdas.size(); ++i)
    if (!(c.lambdas[i] < c.lambdas[i + 1]))
      fail(errc::domain_coverage, "curve grid must be strictly increasing");
  for (Eigen::Index i = 0; i < c.values.size(); ++i)
    if (!std::isfinite(c.values[i]))
      fail(errc::domain_coverage, "curve carries non-finite samples");
}

}  // namespace ssf
