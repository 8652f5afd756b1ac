#include "plsga/dtgeom.hpp"

#include <algorithm>
#include <cmath>

#include "plsga/error.hpp"

namespace plsga {

void DtGeomParams::validate() const {
  if (!(p > 0.0 && p <= 1.0)) {
    throw ParameterError("geometric success probability must lie in (0, 1]");
  }
  if (lower > 0 || upper < 0) {
    throw ParameterError("truncation points must satisfy lower <= 0 <= upper");
  }
}

double dtgeom_pmf(int k, const DtGeomParams& params) {
  params.validate();
  if (k < params.lower || k > params.upper) {
    return 0.0;
  }
  const double p = params.p;
  if (p == 1.0) {
    return k == 0 ? 1.0 : 0.0;
  }
  const double q = 1.0 - p;
  const int l = params.lower;
  const int u = params.upper;
  const double numerator =
      p * (std::pow(q, 2 + k + l - 2 * std::max(l, k - u)) - std::pow(q, k + l - 2 * std::min(0, k)));
  const double denominator = (p - 2.0) * (1.0 - std::pow(q, 1 + u)) * (p - 1.0 + std::pow(q, l));
  return numerator / denominator;
}

int dtgeom_sample(const DtGeomParams& params, RandomStream& rng) {
  params.validate();
  if (params.lower == params.upper) {
    return params.lower;
  }
  const double draw = rng.uniform();
  double cumulative = 0.0;
  for (int k = params.lower; k < params.upper; ++k) {
    cumulative += dtgeom_pmf(k, params);
    if (draw < cumulative) {
      return k;
    }
  }
  return params.upper;
}

}  // namespace plsga
