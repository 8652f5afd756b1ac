#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "plsga/dataset.hpp"
#include "plsga/pls.hpp"
#include "plsga/subset.hpp"

namespace plsga {

enum class Criterion { sep_rdcv, sep_srcv, bic_pls, bic_ols };

std::string_view to_string(Criterion c) noexcept;
/// Accepts "rdcv", "srcv", "bic-pls", "bic-ols".
std::optional<Criterion> parse_criterion(std::string_view s) noexcept;

/// What the BIC penalty term counts.
enum class BicPenalty { variables, components };

std::string_view to_string(BicPenalty p) noexcept;
std::optional<BicPenalty> parse_bic_penalty(std::string_view s) noexcept;

struct FitnessConfig {
  std::size_t inner_segments = 10;
  std::size_t outer_segments = 4;  // rdCV only
  std::size_t replications = 30;
  double calibration_ratio = 0.6;  // srCV only
  std::size_t max_components_cap = 30;
  BicPenalty bic_penalty = BicPenalty::variables;
  PlsFitter fitter = PlsFitter::simpls;

  /// Throws ConfigError on out-of-range values.
  void validate() const;
};

/// Per-replicate values of a criterion and their summary. Lower is better.
struct FitnessValue {
  Criterion criterion = Criterion::sep_srcv;
  std::vector<double> replicates;
  double mean = 0.0;
  double sd = 0.0;
  /// Chosen component counts; one entry per replicate (S entries for rdCV,
  /// one per outer fold). Empty for BIC over OLS.
  std::vector<std::vector<std::size_t>> a_opt_per_replicate;
  bool feasible = true;
  /// BIC only: the residual sum of squares was raised to its floor.
  bool rss_floored = false;
  std::string note;

  /// mean if feasible, +infinity otherwise.
  double objective() const noexcept;

  static FitnessValue from_replicates(Criterion c, std::vector<double> replicates,
                                      std::vector<std::vector<std::size_t>> a_opt);
  static FitnessValue infeasible(Criterion c, std::string reason);

  friend bool operator==(const FitnessValue&, const FitnessValue&) = default;
};

/// Residual sum of squares floor per observation used by the BIC criteria.
inline constexpr double kRssFloorPerObservation = 1e-24;

/// N log(RSS/N) + penalty_count log(N), natural logarithm. `floored` reports
/// whether RSS was raised to N * kRssFloorPerObservation.
double bic(double rss, std::size_t n, std::size_t penalty_count, bool* floored = nullptr);

/// Simple repeated CV. Replicate r draws from the stream derive_seed(seed, {r}):
/// first the calibration/test split, then the inner segmentation of the
/// calibration rows.
FitnessValue fitness_srcv(const Dataset& data, const VariableSubset& subset, const FitnessConfig& cfg,
                          std::uint64_t seed);

/// Repeated double CV. Replicate r draws from derive_seed(seed, {r}): first
/// the S outer segments, then one inner segmentation per outer fold in order.
/// SEP is computed on the N pooled outer predictions.
FitnessValue fitness_rdcv(const Dataset& data, const VariableSubset& subset, const FitnessConfig& cfg,
                          std::uint64_t seed);

/// BIC of a PLS model fitted to all rows with A_opt from K-fold CV on all
/// rows; the segmentation draws from derive_seed(seed, {0}).
FitnessValue fitness_bic_pls(const Dataset& data, const VariableSubset& subset, const FitnessConfig& cfg,
                             std::uint64_t seed);

/// BIC of an OLS fit to all rows. Singular designs are infeasible.
FitnessValue fitness_bic_ols(const Dataset& data, const VariableSubset& subset, const FitnessConfig& cfg);

/// Dispatches on the criterion. Safe to call concurrently.
class FitnessEvaluator {
 public:
  FitnessEvaluator(const Dataset& data, Criterion criterion, FitnessConfig cfg);

  FitnessValue operator()(const VariableSubset& subset, std::uint64_t seed) const;

  const Dataset& data() const noexcept { return *data_; }
  Criterion criterion() const noexcept { return criterion_; }
  const FitnessConfig& config() const noexcept { return cfg_; }

 private:
  const Dataset* data_;
  Criterion criterion_;
  FitnessConfig cfg_;
};

}  // namespace plsga
