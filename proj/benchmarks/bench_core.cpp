#include <benchmark/benchmark.h>

#include <numeric>

#include "plsga/dtgeom.hpp"
#include "plsga/fitness.hpp"
#include "plsga/ga.hpp"
#include "plsga/pls.hpp"
#include "plsga/synthetic.hpp"

namespace {

using namespace plsga;

Eigen::MatrixXd random_matrix(Eigen::Index rows, Eigen::Index cols, RandomStream& rng) {
  Eigen::MatrixXd m(rows, cols);
  for (Eigen::Index j = 0; j < cols; ++j)
    for (Eigen::Index i = 0; i < rows; ++i) m(i, j) = standard_normal(rng);
  return m;
}

// range(0) = rows, range(1) = columns; ten components.
template <PlsFitter F>
void BM_PlsFit(benchmark::State& state) {
  RandomStream rng(1);
  const Eigen::MatrixXd x = random_matrix(state.range(0), state.range(1), rng);
  const Eigen::VectorXd y = random_matrix(state.range(0), 1, rng).col(0);
  for (auto _ : state) benchmark::DoNotOptimize(fit_pls(F, x, y, 10));
}
BENCHMARK(BM_PlsFit<PlsFitter::simpls>)->Args({40, 10})->Args({60, 30})->Args({200, 100});
BENCHMARK(BM_PlsFit<PlsFitter::oracle>)->Args({40, 10})->Args({60, 30})->Args({200, 100});

void BM_Ols(benchmark::State& state) {
  RandomStream rng(2);
  const Eigen::MatrixXd x = random_matrix(60, state.range(0), rng);
  const Eigen::VectorXd y = random_matrix(60, 1, rng).col(0);
  for (auto _ : state) benchmark::DoNotOptimize(fit_ols(x, y));
}
BENCHMARK(BM_Ols)->Arg(5)->Arg(10)->Arg(30);

// One criterion evaluation of a 10-variable subset on the default synthetic benchmark.
void BM_Criterion(benchmark::State& state) {
  static const SyntheticData bench = make_linear_benchmark({});
  const auto criterion = static_cast<Criterion>(state.range(0));
  const FitnessEvaluator evaluate(bench.data, criterion, FitnessConfig{});
  std::vector<Gene> genes(10);
  std::iota(genes.begin(), genes.end(), Gene{0});
  const VariableSubset subset(genes);
  std::uint64_t seed = 0;
  for (auto _ : state) benchmark::DoNotOptimize(evaluate(subset, ++seed));
  state.SetLabel(std::string(to_string(criterion)));
}
BENCHMARK(BM_Criterion)
    ->Arg(static_cast<int>(Criterion::sep_srcv))
    ->Arg(static_cast<int>(Criterion::sep_rdcv))
    ->Arg(static_cast<int>(Criterion::bic_pls))
    ->Arg(static_cast<int>(Criterion::bic_ols))
    ->Unit(benchmark::kMillisecond);

void BM_DtGeomSample(benchmark::State& state) {
  const DtGeomParams params{0.995, -27, 70};
  RandomStream rng(3);
  for (auto _ : state) benchmark::DoNotOptimize(dtgeom_sample(params, rng));
}
BENCHMARK(BM_DtGeomSample);

void BM_Generation(benchmark::State& state) {
  static const SyntheticData bench = make_linear_benchmark({});
  GaConfig cfg;
  cfg.population_size = static_cast<std::size_t>(state.range(0));
  cfg.generations = 1;
  cfg.max_vars = 10;
  cfg.criterion = Criterion::bic_ols;
  for (auto _ : state) benchmark::DoNotOptimize(run_ga(bench.data, cfg));
}
BENCHMARK(BM_Generation)->Arg(200)->Arg(1000)->Unit(benchmark::kMillisecond);

}  // namespace
BENCHMARK_MAIN();
