#include "plsga/fitness.hpp"

#include <cmath>
#include <limits>
#include <numeric>

#include "plsga/error.hpp"
#include "plsga/metrics.hpp"
#include "plsga/model_selection.hpp"

namespace plsga {

std::string_view to_string(Criterion c) noexcept {
  switch (c) {
    case Criterion::sep_rdcv:
      return "rdcv";
    case Criterion::sep_srcv:
      return "srcv";
    case Criterion::bic_pls:
      return "bic-pls";
    case Criterion::bic_ols:
      return "bic-ols";
  }
  return "unknown";
}

std::optional<Criterion> parse_criterion(std::string_view s) noexcept {
  for (Criterion c : {Criterion::sep_rdcv, Criterion::sep_srcv, Criterion::bic_pls, Criterion::bic_ols}) {
    if (s == to_string(c)) {
      return c;
    }
  }
  return std::nullopt;
}

std::string_view to_string(BicPenalty p) noexcept {
  return p == BicPenalty::components ? "components" : "variables";
}

std::optional<BicPenalty> parse_bic_penalty(std::string_view s) noexcept {
  if (s == "variables") return BicPenalty::variables;
  if (s == "components") return BicPenalty::components;
  return std::nullopt;
}

void FitnessConfig::validate() const {
  if (inner_segments < 2) throw ConfigError("inner-segments must be at least 2");
  if (outer_segments < 2) throw ConfigError("outer-segments must be at least 2");
  if (replications < 1) throw ConfigError("criterion-replications must be at least 1");
  if (!(calibration_ratio > 0.0 && calibration_ratio < 1.0)) {
    throw ConfigError("calibration-ratio must lie strictly between 0 and 1");
  }
  if (max_components_cap < 1) throw ConfigError("max-components must be at least 1");
}

double FitnessValue::objective() const noexcept {
  return feasible ? mean : std::numeric_limits<double>::infinity();
}

FitnessValue FitnessValue::from_replicates(Criterion c, std::vector<double> replicates,
                                           std::vector<std::vector<std::size_t>> a_opt) {
  FitnessValue v;
  v.criterion = c;
  const auto r = static_cast<double>(replicates.size());
  v.mean = std::accumulate(replicates.begin(), replicates.end(), 0.0) / r;
  if (replicates.size() >= 2) {
    double ss = 0.0;
    for (double x : replicates) ss += (x - v.mean) * (x - v.mean);
    v.sd = std::sqrt(ss / (r - 1.0));
  }
  v.replicates = std::move(replicates);
  v.a_opt_per_replicate = std::move(a_opt);
  v.feasible = std::isfinite(v.mean);
  if (!v.feasible) {
    v.note = "non-finite criterion value";
  }
  return v;
}

FitnessValue FitnessValue::infeasible(Criterion c, std::string reason) {
  FitnessValue v;
  v.criterion = c;
  v.mean = std::numeric_limits<double>::infinity();
  v.feasible = false;
  v.note = std::move(reason);
  return v;
}

double bic(double rss, std::size_t n, std::size_t penalty_count, bool* floored) {
  const double nd = static_cast<double>(n);
  const double floor_value = nd * kRssFloorPerObservation;
  const bool raise = !(rss >= floor_value);
  if (floored != nullptr) {
    *floored = raise;
  }
  const double used = raise ? floor_value : rss;
  return nd * std::log(used / nd) + static_cast<double>(penalty_count) * std::log(nd);
}

namespace {

struct TunedModel {
  PlsModel model;
  std::size_t components;
};

// Inner K-fold CV on the calibration rows, one-SE choice, refit.
TunedModel tune_and_fit(const Eigen::MatrixXd& x_cal, const Eigen::VectorXd& y_cal, const FitnessConfig& cfg,
                        RandomStream& rng) {
  const auto n_cal = static_cast<std::size_t>(x_cal.rows());
  const auto q = static_cast<std::size_t>(x_cal.cols());
  const std::size_t a_max = default_max_components(n_cal, q, cfg.inner_segments, cfg.max_components_cap);
  if (a_max == 0) {
    throw InfeasibleError(std::to_string(n_cal) + " calibration rows admit no PLS model with " +
                          std::to_string(cfg.inner_segments) + "-fold CV");
  }
  const CvSegmentation seg = make_segments(n_cal, cfg.inner_segments, rng);
  const MsepCurve curve = cv_msep(x_cal, y_cal, seg, a_max, cfg.fitter);
  const ComponentChoice choice = choose_components(curve);
  PlsModel model = fit_pls(cfg.fitter, x_cal, y_cal, choice.a_opt);
  const std::size_t usable = std::min(choice.a_opt, model.components());
  return {std::move(model), usable};
}

void check_subset(const Dataset& data, const VariableSubset& subset) {
  if (subset.empty()) {
    throw InfeasibleError("empty variable subset");
  }
  if (subset.genes().back() >= data.n_variables()) {
    throw InfeasibleError("variable index " + std::to_string(subset.genes().back()) + " out of range");
  }
}

}  // namespace

FitnessValue fitness_srcv(const Dataset& data, const VariableSubset& subset, const FitnessConfig& cfg,
                          std::uint64_t seed) {
  try {
    check_subset(data, subset);
    const IndexList cols = subset.columns();
    const IndexList all_rows = [&] {
      IndexList rows(data.n_observations());
      std::iota(rows.begin(), rows.end(), Index{0});
      return rows;
    }();
    const Eigen::MatrixXd x = gather(data.x(), all_rows, cols);
    const Eigen::VectorXd& y = data.y();

    std::vector<double> replicates;
    std::vector<std::vector<std::size_t>> a_opts;
    replicates.reserve(cfg.replications);
    for (std::size_t r = 0; r < cfg.replications; ++r) {
      RandomStream rng(derive_seed(seed, {r}));
      const Split split = split_random(data.n_observations(), cfg.calibration_ratio, rng);
      const TunedModel tuned = tune_and_fit(gather_rows(x, split.calibration), gather(y, split.calibration), cfg, rng);
      const Eigen::VectorXd y_hat = tuned.model.predict(gather_rows(x, split.test), tuned.components);
      replicates.push_back(sep(gather(y, split.test), y_hat).sep);
      a_opts.push_back({tuned.components});
    }
    return FitnessValue::from_replicates(Criterion::sep_srcv, std::move(replicates), std::move(a_opts));
  } catch (const Error& e) {
    return FitnessValue::infeasible(Criterion::sep_srcv, e.what());
  }
}

FitnessValue fitness_rdcv(const Dataset& data, const VariableSubset& subset, const FitnessConfig& cfg,
                          std::uint64_t seed) {
  try {
    check_subset(data, subset);
    const Index n = data.n_observations();
    const IndexList cols = subset.columns();
    IndexList all_rows(n);
    std::iota(all_rows.begin(), all_rows.end(), Index{0});
    const Eigen::MatrixXd x = gather(data.x(), all_rows, cols);
    const Eigen::VectorXd& y = data.y();

    std::vector<double> replicates;
    std::vector<std::vector<std::size_t>> a_opts;
    replicates.reserve(cfg.replications);
    for (std::size_t r = 0; r < cfg.replications; ++r) {
      RandomStream rng(derive_seed(seed, {r}));
      const CvSegmentation outer = make_segments(n, cfg.outer_segments, rng);
      Eigen::VectorXd y_hat(static_cast<Eigen::Index>(n));
      std::vector<std::size_t> chosen;
      for (std::size_t s = 0; s < outer.size(); ++s) {
        const IndexList cal = outer.complement(s);
        const IndexList& test = outer.segments[s];
        const TunedModel tuned = tune_and_fit(gather_rows(x, cal), gather(y, cal), cfg, rng);
        const Eigen::VectorXd pred = tuned.model.predict(gather_rows(x, test), tuned.components);
        for (std::size_t i = 0; i < test.size(); ++i) {
          y_hat(static_cast<Eigen::Index>(test[i])) = pred(static_cast<Eigen::Index>(i));
        }
        chosen.push_back(tuned.components);
      }
      replicates.push_back(sep(y, y_hat).sep);
      a_opts.push_back(std::move(chosen));
    }
    return FitnessValue::from_replicates(Criterion::sep_rdcv, std::move(replicates), std::move(a_opts));
  } catch (const Error& e) {
    return FitnessValue::infeasible(Criterion::sep_rdcv, e.what());
  }
}

FitnessValue fitness_bic_pls(const Dataset& data, const VariableSubset& subset, const FitnessConfig& cfg,
                             std::uint64_t seed) {
  try {
    check_subset(data, subset);
    const Index n = data.n_observations();
    IndexList all_rows(n);
    std::iota(all_rows.begin(), all_rows.end(), Index{0});
    const Eigen::MatrixXd x = gather(data.x(), all_rows, subset.columns());

    RandomStream rng(derive_seed(seed, {0}));
    const TunedModel tuned = tune_and_fit(x, data.y(), cfg, rng);
    const double rss = (data.y() - tuned.model.predict(x, tuned.components)).squaredNorm();
    const std::size_t penalty = cfg.bic_penalty == BicPenalty::components ? tuned.components : subset.size();
    bool floored = false;
    const double value = bic(rss, n, penalty, &floored);
    FitnessValue v = FitnessValue::from_replicates(Criterion::bic_pls, {value}, {{tuned.components}});
    v.rss_floored = floored;
    return v;
  } catch (const Error& e) {
    return FitnessValue::infeasible(Criterion::bic_pls, e.what());
  }
}

FitnessValue fitness_bic_ols(const Dataset& data, const VariableSubset& subset, const FitnessConfig& cfg) {
  (void)cfg;
  try {
    check_subset(data, subset);
    const Index n = data.n_observations();
    if (subset.size() + 2 > n) {
      throw InfeasibleError("OLS needs at least |subset| + 2 observations");
    }
    IndexList all_rows(n);
    std::iota(all_rows.begin(), all_rows.end(), Index{0});
    const OlsModel ols = fit_ols(gather(data.x(), all_rows, subset.columns()), data.y());
    bool floored = false;
    const double value = bic(ols.rss, n, subset.size(), &floored);
    FitnessValue v = FitnessValue::from_replicates(Criterion::bic_ols, {value}, {});
    v.rss_floored = floored;
    return v;
  } catch (const Error& e) {
    return FitnessValue::infeasible(Criterion::bic_ols, e.what());
  }
}

FitnessEvaluator::FitnessEvaluator(const Dataset& data, Criterion criterion, FitnessConfig cfg)
    : data_(&data), criterion_(criterion), cfg_(cfg) {
  cfg_.validate();
}

FitnessValue FitnessEvaluator::operator()(const VariableSubset& subset, std::uint64_t seed) const {
  switch (criterion_) {
    case Criterion::sep_rdcv:
      return fitness_rdcv(*data_, subset, cfg_, seed);
    case Criterion::sep_srcv:
      return fitness_srcv(*data_, subset, cfg_, seed);
    case Criterion::bic_pls:
      return fitness_bic_pls(*data_, subset, cfg_, seed);
    case Criterion::bic_ols:
      return fitness_bic_ols(*data_, subset, cfg_);
  }
  return FitnessValue::infeasible(criterion_, "unknown criterion");
}

}  // namespace plsga
