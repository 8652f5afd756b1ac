#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "plsga/dataset.hpp"
#include "plsga/random.hpp"

namespace plsga {

/// Standard normal draw (Box-Muller) from a RandomStream.
double standard_normal(RandomStream& rng);

/// Linear benchmark: X has independent standard normal entries and
/// y = X[:, active] * coefficients + e, where e is normal noise with standard
/// deviation noise_ratio times the sample standard deviation of the signal.
struct SyntheticSpec {
  std::size_t n = 60;
  std::size_t p = 100;
  std::size_t active_count = 5;
  /// Coefficient magnitudes; signs alternate starting positive. Cycled when
  /// shorter than active_count.
  std::vector<double> coefficients{1.0};
  double noise_ratio = 0.5;
  std::uint64_t seed = 20150317;
};

struct SyntheticData {
  Dataset data;
  std::vector<std::size_t> active;  // sorted
  Eigen::VectorXd signal;
};

SyntheticData make_linear_benchmark(const SyntheticSpec& spec);

}  // namespace plsga
