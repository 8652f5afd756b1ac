#include "plsga/evaluation.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "plsga/error.hpp"
#include "plsga/metrics.hpp"
#include "plsga/model_selection.hpp"
#include "plsga/parallel.hpp"
#include "plsga/pls.hpp"

namespace plsga {

namespace {

// Value at a 1-based fractional position of sorted data, averaging the two
// neighbours for half positions.
double at_depth(const std::vector<double>& sorted, double depth) {
  const auto lo = static_cast<std::size_t>(std::floor(depth)) - 1;
  const auto hi = static_cast<std::size_t>(std::ceil(depth)) - 1;
  return 0.5 * (sorted[lo] + sorted[hi]);
}

MedianMad summarize(const std::vector<ExternalRepeat>& repeats, double ExternalRepeat::*field) {
  std::vector<double> values;
  for (const ExternalRepeat& r : repeats) values.push_back(r.*field);
  return {median(values), median_absolute_deviation(values)};
}

}  // namespace

BoxplotStats boxplot_stats(std::span<const double> values) {
  BoxplotStats box;
  if (values.empty()) {
    return box;
  }
  std::vector<double> sorted(values.begin(), values.end());
  std::sort(sorted.begin(), sorted.end());
  const auto n = static_cast<double>(sorted.size());
  const double hinge_depth = std::floor((n + 3.0) / 2.0) / 2.0;
  box.minimum = sorted.front();
  box.maximum = sorted.back();
  box.lower_hinge = at_depth(sorted, hinge_depth);
  box.median = at_depth(sorted, (n + 1.0) / 2.0);
  box.upper_hinge = at_depth(sorted, n + 1.0 - hinge_depth);

  const double reach = 1.5 * (box.upper_hinge - box.lower_hinge);
  const double low_fence = box.lower_hinge - reach;
  const double high_fence = box.upper_hinge + reach;
  box.lower_whisker = box.maximum;
  box.upper_whisker = box.minimum;
  for (double v : sorted) {
    if (v < low_fence || v > high_fence) {
      box.outliers.push_back(v);
    } else {
      box.lower_whisker = std::min(box.lower_whisker, v);
      box.upper_whisker = std::max(box.upper_whisker, v);
    }
  }
  return box;
}

double median(std::vector<double> values) {
  if (values.empty()) {
    return std::numeric_limits<double>::quiet_NaN();
  }
  std::sort(values.begin(), values.end());
  const std::size_t n = values.size();
  return n % 2 == 1 ? values[n / 2] : 0.5 * (values[n / 2 - 1] + values[n / 2]);
}

double median_absolute_deviation(const std::vector<double>& values) {
  const double m = median(values);
  std::vector<double> dev;
  dev.reserve(values.size());
  for (double v : values) dev.push_back(std::abs(v - m));
  return median(std::move(dev));
}

VerificationReport verify_internal(const Dataset& data, std::span<const VariableSubset> subsets,
                                   const VerifyOptions& options) {
  FitnessConfig cfg;
  cfg.replications = options.replications;
  cfg.inner_segments = options.inner_segments;
  cfg.outer_segments = options.outer_segments;
  cfg.max_components_cap = options.max_components_cap;
  cfg.validate();

  VerificationReport report;
  report.options = options;
  report.subsets.resize(subsets.size());
  parallel_for(subsets.size(), options.workers, [&](std::size_t i) {
    SubsetVerification& row = report.subsets[i];
    row.subset = subsets[i];
    const std::uint64_t seed = derive_seed(options.seed, {i});
    FitnessConfig simpls_cfg = cfg;
    simpls_cfg.fitter = PlsFitter::simpls;
    const FitnessValue value = fitness_rdcv(data, subsets[i], simpls_cfg, seed);
    row.feasible = value.feasible;
    row.note = value.note;
    if (!value.feasible) {
      row.mean = std::numeric_limits<double>::infinity();
      return;
    }
    row.replicates = value.replicates;
    row.mean = value.mean;
    row.box = boxplot_stats(row.replicates);
    for (const auto& folds : value.a_opt_per_replicate) {
      for (std::size_t a : folds) ++row.component_counts[a];
    }
    if (options.cross_check) {
      FitnessConfig oracle_cfg = cfg;
      oracle_cfg.fitter = PlsFitter::oracle;
      const FitnessValue oracle = fitness_rdcv(data, subsets[i], oracle_cfg, seed);
      row.oracle_mean = oracle.objective();
    }
  });
  return report;
}

ExternalReport external_validate(const Dataset& data, const GaConfig& cfg, const ExternalOptions& options) {
  if (options.repeats < 1) {
    throw ConfigError("external validation needs at least one repeat");
  }
  const Index n = data.n_observations();
  const Index n_train = calibration_size(n, options.training_ratio);
  if (!(options.training_ratio > 0.0 && options.training_ratio < 1.0) || n_train < Dataset::kMinObservations ||
      n - n_train < Dataset::kMinObservations) {
    throw SplitError("external split must leave at least " + std::to_string(Dataset::kMinObservations) +
                     " observations in each part");
  }

  ExternalReport report;
  report.options = options;
  for (std::size_t r = 0; r < options.repeats; ++r) {
    RandomStream split_rng(derive_seed(options.seed, {r, 0}));
    const Split split = split_random(n, options.training_ratio, split_rng);
    const Dataset training = data.select_rows(split.calibration);

    GaConfig run_cfg = cfg;
    run_cfg.master_seed = derive_seed(options.seed, {r, 1});
    const GaResult ga = run_ga(training, run_cfg);
    if (ga.top_subsets.empty()) {
      throw InfeasibleError("genetic algorithm returned no subsets");
    }

    VariableSubset best = ga.top_subsets.front().subset;
    if (options.verify_replications > 0) {
      std::vector<VariableSubset> candidates;
      for (const RankedSubset& s : ga.top_subsets) candidates.push_back(s.subset);
      VerifyOptions vopt;
      vopt.replications = options.verify_replications;
      vopt.inner_segments = cfg.fitness.inner_segments;
      vopt.outer_segments = cfg.fitness.outer_segments;
      vopt.max_components_cap = cfg.fitness.max_components_cap;
      vopt.seed = derive_seed(options.seed, {r, 3});
      vopt.workers = cfg.workers;
      vopt.cross_check = false;
      const VerificationReport verified = verify_internal(training, candidates, vopt);
      const auto it = std::min_element(verified.subsets.begin(), verified.subsets.end(),
                                       [](const SubsetVerification& a, const SubsetVerification& b) {
                                         return a.mean < b.mean;
                                       });
      best = it->subset;
    }

    const IndexList cols = best.columns();
    IndexList train_rows(training.n_observations());
    std::iota(train_rows.begin(), train_rows.end(), Index{0});
    const Eigen::MatrixXd x_train = gather(training.x(), train_rows, cols);
    const Eigen::VectorXd& y_train = training.y();
    const std::size_t a_max = default_max_components(training.n_observations(), cols.size(),
                                                     cfg.fitness.inner_segments, cfg.fitness.max_components_cap);
    if (a_max == 0) {
      throw InfeasibleError("external training set too small for component selection");
    }
    RandomStream cv_rng(derive_seed(options.seed, {r, 2}));
    const CvSegmentation seg = make_segments(training.n_observations(), cfg.fitness.inner_segments, cv_rng);
    const ComponentChoice choice = choose_components(cv_msep(x_train, y_train, seg, a_max, cfg.fitness.fitter));
    const PlsModel model = fit_pls(cfg.fitness.fitter, x_train, y_train, choice.a_opt);
    const std::size_t a = std::min(choice.a_opt, model.components());

    const Eigen::MatrixXd x_val = gather(data.x(), split.test, cols);
    const Eigen::VectorXd y_val = gather(data.y(), split.test);
    const Eigen::VectorXd fit_train = model.predict(x_train, a);
    const Eigen::VectorXd fit_val = model.predict(x_val, a);
    Eigen::VectorXd y_all(static_cast<Eigen::Index>(n));
    Eigen::VectorXd fit_all(static_cast<Eigen::Index>(n));
    y_all << y_train, y_val;
    fit_all << fit_train, fit_val;

    ExternalRepeat rep;
    rep.n_training = split.calibration.size();
    rep.n_validation = split.test.size();
    rep.subset = best;
    rep.components = a;
    rep.rmsep_training = rmsep(y_train, fit_train);
    rep.rmsep_validation = rmsep(y_val, fit_val);
    rep.rmsep_total = rmsep(y_all, fit_all);
    report.repeats.push_back(std::move(rep));
  }
  report.rmsep_training = summarize(report.repeats, &ExternalRepeat::rmsep_training);
  report.rmsep_validation = summarize(report.repeats, &ExternalRepeat::rmsep_validation);
  report.rmsep_total = summarize(report.repeats, &ExternalRepeat::rmsep_total);
  return report;
}

}  // namespace plsga
