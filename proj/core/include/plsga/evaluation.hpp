#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "plsga/dataset.hpp"
#include "plsga/fitness.hpp"
#include "plsga/ga.hpp"
#include "plsga/subset.hpp"

namespace plsga {

/// Tukey five-number summary with 1.5 IQR whiskers.
struct BoxplotStats {
  double minimum = 0.0;
  double lower_hinge = 0.0;
  double median = 0.0;
  double upper_hinge = 0.0;
  double maximum = 0.0;
  double lower_whisker = 0.0;
  double upper_whisker = 0.0;
  std::vector<double> outliers;

  friend bool operator==(const BoxplotStats&, const BoxplotStats&) = default;
};

BoxplotStats boxplot_stats(std::span<const double> values);

double median(std::vector<double> values);
/// Unscaled median absolute deviation from the median.
double median_absolute_deviation(const std::vector<double>& values);

struct SubsetVerification {
  VariableSubset subset;
  std::vector<double> replicates;  // SIMPLS-based SEP per replicate
  double mean = 0.0;
  BoxplotStats box;
  /// How often each component count was chosen over all replicates and outer folds.
  std::map<std::size_t, std::size_t> component_counts;
  /// Mean SEP over the same splits using the NIPALS fitter; empty when the
  /// cross-check is off or the subset is infeasible.
  std::optional<double> oracle_mean;
  bool feasible = true;
  std::string note;

  friend bool operator==(const SubsetVerification&, const SubsetVerification&) = default;
};

struct VerifyOptions {
  std::size_t replications = 50;
  std::size_t inner_segments = 10;
  std::size_t outer_segments = 4;
  std::size_t max_components_cap = 30;
  std::uint64_t seed = 0;
  std::size_t workers = 1;
  /// Also run the NIPALS fitter on the same splits.
  bool cross_check = true;
};

struct VerificationReport {
  VerifyOptions options;
  std::vector<SubsetVerification> subsets;
};

/// Repeated double CV of every subset. Subset i uses streams keyed only by
/// (options.seed, i), never by anything from the GA run.
VerificationReport verify_internal(const Dataset& data, std::span<const VariableSubset> subsets,
                                   const VerifyOptions& options);

struct ExternalRepeat {
  std::size_t n_training = 0;
  std::size_t n_validation = 0;
  VariableSubset subset;
  std::size_t components = 0;
  double rmsep_training = 0.0;
  double rmsep_validation = 0.0;
  double rmsep_total = 0.0;

  friend bool operator==(const ExternalRepeat&, const ExternalRepeat&) = default;
};

struct MedianMad {
  double median = 0.0;
  double mad = 0.0;

  friend bool operator==(const MedianMad&, const MedianMad&) = default;
};

struct ExternalOptions {
  double training_ratio = 0.6;
  std::size_t repeats = 10;
  std::uint64_t seed = 0;
  /// When positive, the GA's top subsets are re-ranked by a verification pass
  /// with this many replications before the best one is taken.
  std::size_t verify_replications = 0;
};

struct ExternalReport {
  ExternalOptions options;
  std::vector<ExternalRepeat> repeats;
  MedianMad rmsep_training;
  MedianMad rmsep_validation;
  MedianMad rmsep_total;
};

/// Splits the data into an external training and validation part, runs the GA
/// on the training part only, fits the best subset with a CV-chosen component
/// count and reports RMSEP on both parts and overall. Repeated with fresh splits.
ExternalReport external_validate(const Dataset& data, const GaConfig& cfg, const ExternalOptions& options);

}  // namespace plsga
