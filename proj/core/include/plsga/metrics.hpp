#pragma once

#include <Eigen/Dense>

namespace plsga {

struct SepResult {
  double sep = 0.0;
  double bias = 0.0;
};

/// Standard error of prediction: the standard deviation (N-1 denominator) of
/// the residuals y - y_hat around their mean, the bias.
SepResult sep(const Eigen::VectorXd& y, const Eigen::VectorXd& y_hat);

/// Root mean squared error of prediction.
double rmsep(const Eigen::VectorXd& y, const Eigen::VectorXd& y_hat);

}  // namespace plsga
