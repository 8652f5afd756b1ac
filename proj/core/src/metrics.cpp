#include "plsga/metrics.hpp"

#include <cmath>

#include "plsga/error.hpp"

namespace plsga {

SepResult sep(const Eigen::VectorXd& y, const Eigen::VectorXd& y_hat) {
  if (y.size() != y_hat.size()) {
    throw MetricError("observed and predicted vectors differ in length");
  }
  if (y.size() < 2) {
    throw MetricError("SEP needs at least two residuals");
  }
  const Eigen::ArrayXd residuals = (y - y_hat).array();
  SepResult result;
  result.bias = residuals.mean();
  result.sep = std::sqrt((residuals - result.bias).square().sum() / static_cast<double>(y.size() - 1));
  return result;
}

double rmsep(const Eigen::VectorXd& y, const Eigen::VectorXd& y_hat) {
  if (y.size() != y_hat.size()) {
    throw MetricError("observed and predicted vectors differ in length");
  }
  if (y.size() < 1) {
    throw MetricError("RMSEP needs at least one residual");
  }
  return std::sqrt((y - y_hat).squaredNorm() / static_cast<double>(y.size()));
}

}  // namespace plsga
