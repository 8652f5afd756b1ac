#include "plsga/synthetic.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>

#include "plsga/error.hpp"

namespace plsga {

double standard_normal(RandomStream& rng) {
  const double u1 = 1.0 - rng.uniform();  // (0, 1]
  const double u2 = rng.uniform();
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
}

SyntheticData make_linear_benchmark(const SyntheticSpec& spec) {
  if (spec.active_count < 1 || spec.active_count > spec.p || spec.coefficients.empty()) {
    throw ParameterError("synthetic benchmark needs 1 <= active_count <= p and at least one coefficient");
  }
  RandomStream rng(spec.seed);
  const auto n = static_cast<Eigen::Index>(spec.n);
  const auto p = static_cast<Eigen::Index>(spec.p);

  std::vector<std::size_t> columns(spec.p);
  std::iota(columns.begin(), columns.end(), std::size_t{0});
  shuffle(std::span<std::size_t>(columns), rng);
  std::vector<std::size_t> active(columns.begin(), columns.begin() + static_cast<std::ptrdiff_t>(spec.active_count));
  std::sort(active.begin(), active.end());

  Eigen::MatrixXd x(n, p);
  for (Eigen::Index j = 0; j < p; ++j) {
    for (Eigen::Index i = 0; i < n; ++i) {
      x(i, j) = standard_normal(rng);
    }
  }
  Eigen::VectorXd signal = Eigen::VectorXd::Zero(n);
  for (std::size_t k = 0; k < active.size(); ++k) {
    const double magnitude = spec.coefficients[k % spec.coefficients.size()];
    const double beta = k % 2 == 0 ? magnitude : -magnitude;
    signal += beta * x.col(static_cast<Eigen::Index>(active[k]));
  }
  const double centered = (signal.array() - signal.mean()).square().sum();
  const double signal_sd = std::sqrt(centered / static_cast<double>(n - 1));
  Eigen::VectorXd y = signal;
  for (Eigen::Index i = 0; i < n; ++i) {
    y(i) += spec.noise_ratio * signal_sd * standard_normal(rng);
  }
  return {Dataset(std::move(x), std::move(y)), std::move(active), std::move(signal)};
}

}  // namespace plsga
