#pragma once

#include <cstddef>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

#include "plsga/random.hpp"

namespace plsga {

using Index = std::size_t;
using IndexList = std::vector<Index>;

/// Immutable regression data: N observations of p predictors and one response.
class Dataset {
 public:
  static constexpr Index kMinObservations = 4;

  Dataset(Eigen::MatrixXd x, Eigen::VectorXd y, std::vector<std::string> variable_names,
          std::vector<std::string> observation_ids);

  /// Convenience constructor generating names "V1".."Vp" and ids "1".."N".
  Dataset(Eigen::MatrixXd x, Eigen::VectorXd y);

  const Eigen::MatrixXd& x() const noexcept { return x_; }
  const Eigen::VectorXd& y() const noexcept { return y_; }
  const std::vector<std::string>& variable_names() const noexcept { return variable_names_; }
  const std::vector<std::string>& observation_ids() const noexcept { return observation_ids_; }

  Index n_observations() const noexcept { return static_cast<Index>(x_.rows()); }
  Index n_variables() const noexcept { return static_cast<Index>(x_.cols()); }

  /// Rows in the given order; the result must itself satisfy the invariants.
  Dataset select_rows(std::span<const Index> rows) const;

 private:
  Eigen::MatrixXd x_;
  Eigen::VectorXd y_;
  std::vector<std::string> variable_names_;
  std::vector<std::string> observation_ids_;
};

/// Reads a comma-separated file with a header row. Every column other than the
/// response and the optional id column becomes a predictor.
Dataset load_csv(const std::filesystem::path& path, std::string_view response_column,
                 std::optional<std::string> id_column = std::nullopt);

/// Writes `id,<predictors>,<response>` with shortest round-trip numbers, so
/// load_csv(path, response_column, "id") restores the dataset exactly.
void save_csv(const Dataset& data, const std::filesystem::path& path, std::string_view response_column);

/// K pairwise disjoint segments covering 0..n_total-1 with sizes that differ by at most one.
struct CvSegmentation {
  std::vector<IndexList> segments;
  Index n_total = 0;

  Index size() const noexcept { return segments.size(); }
  /// All indices not in segment k, in segment order.
  IndexList complement(Index k) const;
};

CvSegmentation make_segments(Index n, Index k, RandomStream& rng);

struct Split {
  IndexList calibration;
  IndexList test;
  double ratio = 0.0;
};

/// Number of calibration rows for a split of n rows: round-half-up of ratio*n.
Index calibration_size(Index n, double ratio);

Split split_random(Index n, double ratio, RandomStream& rng);

/// Gathers the given rows and columns of a matrix.
Eigen::MatrixXd gather(const Eigen::MatrixXd& m, std::span<const Index> rows, std::span<const Index> cols);
Eigen::MatrixXd gather_rows(const Eigen::MatrixXd& m, std::span<const Index> rows);
Eigen::VectorXd gather(const Eigen::VectorXd& v, std::span<const Index> rows);

}  // namespace plsga
