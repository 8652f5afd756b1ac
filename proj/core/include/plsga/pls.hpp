#pragma once

#include <cstddef>

#include <Eigen/Dense>

namespace plsga {

/// Single-response PLS regression fitted on mean-centered data, holding the
/// coefficient vectors of every model with 1..components() components.
class PlsModel {
 public:
  PlsModel(Eigen::VectorXd x_means, double y_mean, Eigen::MatrixXd coefficients, std::size_t requested_components);

  /// Number of usable components. Smaller than requested_components() when
  /// the fit was truncated because the weight vector vanished.
  std::size_t components() const noexcept { return static_cast<std::size_t>(coefficients_.cols()); }
  std::size_t requested_components() const noexcept { return requested_; }
  bool truncated() const noexcept { return components() < requested_; }

  const Eigen::VectorXd& x_means() const noexcept { return x_means_; }
  double y_mean() const noexcept { return y_mean_; }
  /// q x components(); column a-1 holds the coefficients of the a-component model.
  const Eigen::MatrixXd& coefficients() const noexcept { return coefficients_; }
  const Eigen::VectorXd& intercepts() const noexcept { return intercepts_; }

  /// Predictions of the a-component model (1-based a).
  Eigen::VectorXd predict(const Eigen::MatrixXd& x_new, std::size_t a) const;
  /// Predictions of all models; column a-1 belongs to the a-component model.
  Eigen::MatrixXd predict_all(const Eigen::MatrixXd& x_new) const;

 private:
  Eigen::VectorXd x_means_;
  double y_mean_;
  Eigen::MatrixXd coefficients_;
  Eigen::VectorXd intercepts_;
  std::size_t requested_;
};

enum class PlsFitter { simpls, oracle };

/// Weight vectors whose norm falls below this fraction of the first weight's
/// norm end the fit early.
inline constexpr double kWeightNormTolerance = 1e-12;

/// SIMPLS for a single response. Loadings are orthogonalised against all
/// previous loadings with modified Gram-Schmidt; `reorthogonalize` runs a
/// second MGS sweep.
PlsModel fit_simpls(const Eigen::MatrixXd& x, const Eigen::VectorXd& y, std::size_t max_components,
                    bool reorthogonalize = false);

/// Deflation-based NIPALS PLS1 with explicit X deflation. Slower than
/// fit_simpls, used to cross-check it.
PlsModel fit_pls_oracle(const Eigen::MatrixXd& x, const Eigen::VectorXd& y, std::size_t max_components);

PlsModel fit_pls(PlsFitter fitter, const Eigen::MatrixXd& x, const Eigen::VectorXd& y, std::size_t max_components);

struct OlsModel {
  Eigen::VectorXd coefficients;  // intercept first
  double rss = 0.0;
};

/// Least squares with intercept. Throws SingularDesignError on rank-deficient designs.
OlsModel fit_ols(const Eigen::MatrixXd& x, const Eigen::VectorXd& y);

}  // namespace plsga
