#pragma once

#include "plsga/random.hpp"

namespace plsga {

/// Double truncated geometric distribution: the law of G_u - G_{-l}, where G_t
/// is a geometric(p) variable truncated to {0..t}. 1 - p is the mutation
/// probability; the support is [lower, upper] with lower <= 0 <= upper.
struct DtGeomParams {
  double p = 1.0;
  int lower = 0;
  int upper = 0;

  /// Throws ParameterError unless 0 < p <= 1 and lower <= 0 <= upper.
  void validate() const;
};

/// g(k); zero outside [lower, upper].
double dtgeom_pmf(int k, const DtGeomParams& params);

/// Inverse-CDF draw over the finite support.
int dtgeom_sample(const DtGeomParams& params, RandomStream& rng);

}  // namespace plsga
