#pragma once

#include <cstddef>

#include <Eigen/Dense>

#include "plsga/dataset.hpp"
#include "plsga/pls.hpp"

namespace plsga {

/// Cross-validated mean squared error of prediction for 1..A_max components.
struct MsepCurve {
  Eigen::VectorXd msep;             // msep(a-1) = MSEP_a
  Eigen::MatrixXd per_segment_msep; // K x A_max, segment-mean squared errors

  std::size_t segments() const noexcept { return static_cast<std::size_t>(per_segment_msep.rows()); }
  std::size_t max_components() const noexcept { return static_cast<std::size_t>(msep.size()); }

  /// Builds a curve from per-segment values; msep is their unweighted column mean.
  static MsepCurve from_segments(Eigen::MatrixXd per_segment_msep);
};

struct ComponentChoice {
  std::size_t a_opt = 1;  // 1-based
  std::size_t a_min = 1;  // 1-based argmin of msep, smallest on ties
  Eigen::VectorXd se;
};

/// Largest admissible component count for inner K-fold CV on n_cal rows of q
/// variables: min(q, floor(n_cal (K-1)/K) - 1, cap). Zero when no model fits.
std::size_t default_max_components(std::size_t n_cal, std::size_t q, std::size_t k, std::size_t cap);

/// K-fold CV: for every segment k a PLS model is fitted on the other segments
/// and used to predict segment k with 1..A_max components.
MsepCurve cv_msep(const Eigen::MatrixXd& x, const Eigen::VectorXd& y, const CvSegmentation& segmentation,
                  std::size_t max_components, PlsFitter fitter = PlsFitter::simpls);

/// SE_a = sqrt( sum_k (MSEP_a - segmean_{k,a})^2 / (K-1) ).
Eigen::VectorXd se_of_msep(const MsepCurve& curve);

/// One-standard-error rule: smallest a with MSEP_a <= MSEP_m + SE_m / sqrt(K),
/// m = argmin MSEP.
ComponentChoice choose_components(const MsepCurve& curve);

}  // namespace plsga
