// Acceptance checks. Prints one PASS/FAIL line per criterion and exits
// non-zero if any criterion fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <sstream>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "commands.hpp"
#include "oracles.hpp"
#include "plsga/dtgeom.hpp"
#include "plsga/evaluation.hpp"
#include "plsga/ga.hpp"
#include "plsga/metrics.hpp"
#include "plsga/model_selection.hpp"
#include "plsga/pls.hpp"
#include "plsga/synthetic.hpp"

namespace {

using namespace plsga;
using Clock = std::chrono::steady_clock;

struct Outcome {
  bool pass = false;
  std::string detail;
};

double seconds_since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

// Histories collected by criteria 5 and 6 for criterion 9.
std::vector<std::vector<GenerationStats>> g_histories;

GaConfig benchmark_ga(std::uint64_t seed, Criterion criterion = Criterion::sep_srcv, std::size_t generations = 40) {
  GaConfig cfg;
  cfg.population_size = 200;
  cfg.generations = generations;
  cfg.min_vars = 3;
  cfg.max_vars = 10;
  cfg.criterion = criterion;
  cfg.master_seed = seed;
  return cfg;
}

std::string hex(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%a", v);
  return buf;
}

std::string serialize(const GaResult& r) {
  std::ostringstream s;
  s << "evaluations " << r.evaluations << " dup " << r.duplicates_allowed << '\n';
  for (const auto& g : r.history) {
    s << g.generation << ' ' << hex(g.mean_fitness) << ' ' << hex(g.best_fitness) << ' ' << g.evaluations << ' '
      << g.escapes << ' ' << g.duplicate_escapes << " [";
    for (Gene x : g.best_subset.genes()) s << x << ',';
    s << "]\n";
  }
  auto put = [&](const VariableSubset& sub, const FitnessValue& f) {
    for (Gene x : sub.genes()) s << x << ',';
    s << " | " << f.feasible << ' ' << hex(f.mean) << ' ' << hex(f.sd);
    for (double v : f.replicates) s << ' ' << hex(v);
    for (const auto& a : f.a_opt_per_replicate)
      for (std::size_t c : a) s << ' ' << c;
    s << '\n';
  };
  for (const auto& t : r.top_subsets) put(t.subset, t.fitness);
  for (const auto& e : r.elite) put(e.subset, e.fitness);
  return s.str();
}

std::size_t true_hits(const VariableSubset& subset, const std::vector<std::size_t>& active) {
  std::size_t hits = 0;
  for (std::size_t a : active) hits += subset.contains(static_cast<Gene>(a)) ? 1 : 0;
  return hits;
}

Outcome criterion1() {
  const std::vector<double> ps{0.3, 0.5, 0.7, 0.9, 0.995};
  const std::vector<std::pair<int, int>> bounds{{-1, 1}, {-3, 4}, {-10, 10}, {0, 5}, {-5, 0}, {-27, 20}};
  double worst_norm = 0.0, worst_conv = 0.0;
  for (double p : ps) {
    for (auto [l, u] : bounds) {
      const DtGeomParams params{p, l, u};
      double total = 0.0;
      for (int k = l; k <= u; ++k) {
        const double g = dtgeom_pmf(k, params);
        total += g;
        worst_conv = std::max(worst_conv, std::abs(g - testing::dtgeom_convolution(k, p, l, u)));
      }
      worst_norm = std::max(worst_norm, std::abs(total - 1.0));
    }
  }
  std::ostringstream d;
  d << "max |sum-1| = " << worst_norm << ", max |g-oracle| = " << worst_conv;
  return {worst_norm <= 1e-12 && worst_conv <= 1e-12, d.str()};
}

Outcome criterion2() {
  RandomStream rng(2);
  double worst_oracle = 0.0;
  for (int i = 0; i < 50; ++i) {
    const auto n = static_cast<Eigen::Index>(rng.uniform_index(40) + 11);
    const auto q = static_cast<Eigen::Index>(rng.uniform_index(20) + 1);
    const std::size_t a = std::min<std::size_t>(rng.uniform_index(10) + 1, static_cast<std::size_t>(std::min(q, n - 1)));
    const Eigen::MatrixXd x = testing::random_matrix(n, q, rng);
    const Eigen::VectorXd y = testing::random_vector(n, rng);
    const PlsModel s = fit_simpls(x, y, a);
    const PlsModel o = fit_pls_oracle(x, y, a);
    worst_oracle = std::max(worst_oracle, testing::relative_deviation(s.coefficients(), o.coefficients()));
  }
  double worst_ols = 0.0;
  for (int i = 0; i < 20; ++i) {
    const auto q = static_cast<Eigen::Index>(rng.uniform_index(15) + 1);
    const auto n = q + 5 + static_cast<Eigen::Index>(rng.uniform_index(30));
    const Eigen::MatrixXd x = testing::random_matrix(n, q, rng);
    const Eigen::VectorXd y = testing::random_vector(n, rng);
    const PlsModel s = fit_simpls(x, y, static_cast<std::size_t>(q));
    const Eigen::VectorXd beta = testing::ols_normal_equations(x, y);
    worst_ols = std::max(worst_ols, (s.coefficients().col(q - 1) - beta.tail(q)).cwiseAbs().maxCoeff());
    worst_ols = std::max(worst_ols, std::abs(s.intercepts()(q - 1) - beta(0)));
  }
  std::ostringstream d;
  d << "SIMPLS vs NIPALS max rel dev = " << worst_oracle << " (50 fits), full SIMPLS vs OLS max dev = " << worst_ols;
  return {worst_oracle <= 1e-8 && worst_ols <= 1e-6, d.str()};
}

Outcome criterion3() {
  RandomStream rng(3);
  double worst_identity = 0.0;
  for (int i = 0; i < 1000; ++i) {
    const auto n = static_cast<Eigen::Index>(rng.uniform_index(200) + 2);
    const Eigen::VectorXd y = testing::random_vector(n, rng);
    Eigen::VectorXd y_hat = testing::random_vector(n, rng);
    y_hat.array() += rng.uniform() * 4.0 - 2.0;
    const SepResult s = sep(y, y_hat);
    const double r = rmsep(y, y_hat);
    const double nd = static_cast<double>(n);
    const double rhs = (nd - 1.0) / nd * s.sep * s.sep + s.bias * s.bias;
    worst_identity = std::max(worst_identity, std::abs(r * r - rhs) / std::max(1.0, r * r));
  }
  double worst_cv = 0.0;
  std::size_t exact = 0, entries = 0;
  for (int i = 0; i < 20; ++i) {
    const auto n = static_cast<Eigen::Index>(rng.uniform_index(30) + 20);
    const auto q = static_cast<Eigen::Index>(rng.uniform_index(12) + 2);
    const std::size_t k = rng.uniform_index(6) + 2;
    const Eigen::MatrixXd x = testing::random_matrix(n, q, rng);
    const Eigen::VectorXd y = x.col(0) + 0.5 * testing::random_vector(n, rng);
    const CvSegmentation seg = make_segments(static_cast<Index>(n), k, rng);
    const std::size_t a_max = default_max_components(static_cast<std::size_t>(n) * (k - 1) / k,
                                                     static_cast<std::size_t>(q), k, 30);
    const MsepCurve curve = cv_msep(x, y, seg, a_max);
    const Eigen::MatrixXd oracle = testing::refit_per_segment_msep(x, y, seg, a_max);
    const Eigen::VectorXd oracle_msep = oracle.colwise().mean().transpose();
    worst_cv = std::max(worst_cv, testing::relative_deviation(curve.per_segment_msep, oracle));
    worst_cv = std::max(worst_cv, testing::relative_deviation(curve.msep, oracle_msep));
    for (Eigen::Index r = 0; r < oracle.rows(); ++r)
      for (Eigen::Index c = 0; c < oracle.cols(); ++c) exact += curve.per_segment_msep(r, c) == oracle(r, c) ? 1 : 0;
    for (Eigen::Index c = 0; c < oracle.cols(); ++c) exact += curve.msep(c) == oracle_msep(c) ? 1 : 0;
    entries += static_cast<std::size_t>(oracle.size() + oracle.cols());
  }
  std::ostringstream d;
  d << "identity max rel dev = " << worst_identity << "; CV vs refit oracle: " << exact << "/" << entries
    << " MSEP entries bit-identical, max rel dev " << worst_cv;
  return {worst_identity <= 1e-12 && exact == entries, d.str()};
}

Outcome criterion4() {
  RandomStream rng(4);
  std::size_t mismatches = 0, above_argmin = 0, with_ties = 0;
  for (int i = 0; i < 1000; ++i) {
    const auto k = static_cast<Eigen::Index>(rng.uniform_index(9) + 2);
    const auto a_max = static_cast<Eigen::Index>(rng.uniform_index(12) + 1);
    MsepCurve curve;
    curve.per_segment_msep.resize(k, a_max);
    // Small integer values force ties in both the curve and the segment values.
    for (Eigen::Index r = 0; r < k; ++r)
      for (Eigen::Index c = 0; c < a_max; ++c) curve.per_segment_msep(r, c) = static_cast<double>(rng.uniform_index(4) + 1);
    if (i % 5 == 0) curve.per_segment_msep.col(a_max - 1) = curve.per_segment_msep.col(0);
    curve.msep = curve.per_segment_msep.colwise().mean().transpose();
    for (Eigen::Index a = 0; a < a_max; ++a)
      for (Eigen::Index b = a + 1; b < a_max; ++b) with_ties += curve.msep(a) == curve.msep(b) ? 1 : 0;
    const ComponentChoice got = choose_components(curve);
    const auto [a_opt, a_min] = testing::one_se_rule(curve.per_segment_msep);
    mismatches += (got.a_opt != a_opt || got.a_min != a_min) ? 1 : 0;
    above_argmin += got.a_opt > got.a_min ? 1 : 0;
  }
  std::ostringstream d;
  d << mismatches << " mismatches, " << above_argmin << " with a_opt > argmin, " << with_ties
    << " tied curve pairs over 1000 curves";
  return {mismatches == 0 && above_argmin == 0 && with_ties > 0, d.str()};
}

Outcome criterion5(const SyntheticData& bench) {
  std::size_t identical = 0, total = 0;
  for (std::uint64_t seed : {101u, 202u, 303u}) {
    std::string reference;
    for (std::size_t workers : {1u, 2u, 8u}) {
      GaConfig cfg = benchmark_ga(seed);
      cfg.workers = workers;
      GaResult r = run_ga(bench.data, cfg);
      const std::string bytes = serialize(r);
      g_histories.push_back(r.history);
      if (workers == 1) {
        reference = bytes;
        continue;
      }
      ++total;
      identical += bytes == reference ? 1 : 0;
    }
  }
  std::ostringstream d;
  d << identical << "/" << total << " multi-worker runs byte-identical to the 1-worker run (3 seeds)";
  return {identical == total, d.str()};
}

Outcome criterion6(const SyntheticData& bench) {
  const std::vector<std::uint64_t> seeds{101, 202, 303, 404, 505, 606, 707, 808, 909, 1010};
  constexpr std::size_t kGenerations = 60;
  std::size_t good = 0;
  double srcv_total = 0.0, bic_total = 0.0;
  std::ostringstream per_seed;
  for (std::size_t i = 0; i < seeds.size(); ++i) {
    const GaResult srcv = run_ga(bench.data, benchmark_ga(seeds[i], Criterion::sep_srcv, kGenerations));
    const GaResult bic = run_ga(bench.data, benchmark_ga(seeds[i], Criterion::bic_ols, kGenerations));
    g_histories.push_back(srcv.history);
    g_histories.push_back(bic.history);
    const std::size_t hs = true_hits(srcv.top_subsets.at(0).subset, bench.active);
    const std::size_t hb = true_hits(bic.top_subsets.at(0).subset, bench.active);
    good += hs >= 4 ? 1 : 0;
    srcv_total += static_cast<double>(hs);
    bic_total += static_cast<double>(hb);
    per_seed << (i ? " " : "") << hs << "/" << hb;
  }
  const double n = static_cast<double>(seeds.size());
  std::ostringstream d;
  d << "srCV >= 4 of 5 in " << good << "/10 seeds; mean hits srCV " << srcv_total / n << " vs BIC_OLS "
    << bic_total / n << " (per seed srCV/BIC: " << per_seed.str() << ")";
  return {good >= 8 && bic_total <= srcv_total, d.str()};
}

Outcome criterion7(const SyntheticData& bench) {
  ExternalOptions options;
  options.repeats = 10;
  options.training_ratio = 0.6;
  const ExternalReport report = external_validate(bench.data, benchmark_ga(77), options);
  std::ostringstream d;
  d << "median RMSEP training " << report.rmsep_training.median << " (MAD " << report.rmsep_training.mad
    << "), validation " << report.rmsep_validation.median << " (MAD " << report.rmsep_validation.mad << ")";
  return {report.rmsep_validation.median > report.rmsep_training.median, d.str()};
}

double select_seconds(const std::filesystem::path& dir, const std::string& data, const std::string& criterion) {
  std::ostringstream out, err;
  const std::vector<std::string> args{"select", "--data", data, "--response", "y", "--id-column", "id",
                                      "--criterion", criterion, "--criterion-replications", "30",
                                      "--outer-segments", "4", "--inner-segments", "10", "--population", "200",
                                      "--generations", "40", "--min-vars", "3", "--max-vars", "10", "--seed", "31",
                                      "--workers", "1", "--out", (dir / criterion).string()};
  if (cli::run_cli(args, out, err) != 0) throw std::runtime_error("select failed: " + err.str());
  std::ifstream in(dir / criterion / "manifest.json");
  return nlohmann::json::parse(in).at("phases_seconds").at("select").get<double>();
}

Outcome criterion8(const SyntheticData& bench) {
  const auto dir = std::filesystem::temp_directory_path() / "plsga_acceptance_speed";
  std::filesystem::remove_all(dir);
  std::filesystem::create_directories(dir);
  const std::string data = (dir / "bench.csv").string();
  save_csv(bench.data, data, "y");
  const double srcv = select_seconds(dir, data, "srcv");
  const double rdcv = select_seconds(dir, data, "rdcv");
  std::filesystem::remove_all(dir);
  const double ratio = rdcv / srcv;
  std::ostringstream d;
  d.precision(3);
  d << "select wall-clock srCV " << srcv << " s, rdCV " << rdcv << " s, ratio " << ratio;
  return {srcv < rdcv && ratio >= 2.0, d.str()};
}

Outcome criterion9() {
  std::size_t violations = 0;
  for (const auto& history : g_histories)
    for (std::size_t g = 1; g < history.size(); ++g) violations += history[g].best_fitness > history[g - 1].best_fitness;
  std::ostringstream d;
  d << violations << " increases of the best fitness across " << g_histories.size() << " run histories";
  return {violations == 0 && !g_histories.empty(), d.str()};
}

bool report(int id, double budget_seconds, const std::function<Outcome()>& check) {
  const auto t0 = Clock::now();
  Outcome o;
  try {
    o = check();
  } catch (const std::exception& e) {
    o = {false, std::string("exception: ") + e.what()};
  }
  const double elapsed = seconds_since(t0);
  const bool in_time = elapsed < budget_seconds;
  std::printf("criterion %d: %s  %s  [%.2f s, budget %.0f s%s]\n", id, o.pass && in_time ? "PASS" : "FAIL",
              o.detail.c_str(), elapsed, budget_seconds, in_time ? "" : ", over budget");
  std::fflush(stdout);
  return o.pass && in_time;
}

}  // namespace

int main() {
  const SyntheticData bench = make_linear_benchmark({});
  bool ok = true;
  ok &= report(1, 1, criterion1);
  ok &= report(2, 10, criterion2);
  ok &= report(3, 30, criterion3);
  ok &= report(4, 1, criterion4);
  ok &= report(5, 300, [&] { return criterion5(bench); });
  ok &= report(6, 900, [&] { return criterion6(bench); });
  ok &= report(7, 1200, [&] { return criterion7(bench); });
  ok &= report(8, 1800, [&] { return criterion8(bench); });
  ok &= report(9, 1, criterion9);
  return ok ? 0 : 1;
}
