#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string_view>
#include <utility>
#include <vector>

#include "plsga/dataset.hpp"
#include "plsga/fitness.hpp"
#include "plsga/random.hpp"
#include "plsga/subset.hpp"

namespace plsga {

enum class CrossoverKind { single, uniform };

std::string_view to_string(CrossoverKind c) noexcept;
std::optional<CrossoverKind> parse_crossover(std::string_view s) noexcept;

struct GaConfig {
  std::size_t population_size = 4000;
  std::size_t generations = 300;
  std::size_t min_vars = 3;
  std::size_t max_vars = 30;
  /// Per-offspring mutation probability (1 - p of the mutation-count law).
  double mutation_probability = 0.005;
  CrossoverKind crossover = CrossoverKind::single;
  bool exp_transform = true;
  std::size_t elite_size = 10;
  /// Offspring worse than the worse parent by more than this many standard
  /// deviations of the current generation's criterion values are rejected.
  double rejection_factor = 1.0;
  std::size_t max_mate_attempts = 100;
  /// Whether offspring duplicating an elite member count as duplicates.
  bool elite_in_duplicate_check = true;
  std::size_t top_count = 10;
  Criterion criterion = Criterion::sep_srcv;
  FitnessConfig fitness;
  std::uint64_t master_seed = 0;
  std::size_t workers = 1;

  /// Throws ConfigError unless the configuration is usable with p variables.
  void validate(std::size_t p) const;
};

struct Chromosome {
  VariableSubset subset;
  FitnessValue fitness;
  /// Accepted through the livelock escape rather than the regular rules.
  bool escaped = false;
  /// Escaped and identical to another member of its generation or the elite.
  bool duplicate = false;

  double objective() const noexcept { return fitness.objective(); }
};

struct GenerationStats {
  std::size_t generation = 0;
  double mean_fitness = 0.0;
  double best_fitness = 0.0;
  VariableSubset best_subset;
  std::size_t evaluations = 0;
  std::size_t escapes = 0;
  std::size_t duplicate_escapes = 0;
};

struct RankedSubset {
  VariableSubset subset;
  FitnessValue fitness;
};

struct GaResult {
  std::vector<RankedSubset> top_subsets;
  std::vector<GenerationStats> history;
  std::vector<Chromosome> elite;
  /// The bounds admit fewer distinct subsets than the population size.
  bool duplicates_allowed = false;
  std::size_t evaluations = 0;
};

using EvaluateFn = std::function<FitnessValue(const VariableSubset&, std::uint64_t seed)>;

/// Number of distinct subsets of {0..p-1} with size in [min_vars, max_vars],
/// saturated at `cap`.
std::uint64_t count_subsets(std::size_t p, std::size_t min_vars, std::size_t max_vars, std::uint64_t cap);

/// Random distinct subsets with sizes uniform on [min_vars, max_vars]. When
/// the bounds admit fewer subsets than requested, duplicates are allowed and
/// `duplicates_allowed` is set.
std::vector<VariableSubset> init_population(std::size_t p, const GaConfig& cfg, RandomStream& rng,
                                            bool* duplicates_allowed = nullptr);

/// Roulette-wheel probabilities for minimised criterion values. The negated
/// values are standardised, then either exponentiated or shifted to start at
/// zero. Non-finite entries get probability zero.
std::vector<double> selection_probabilities(std::span<const double> criterion_means, bool exp_transform);

using SubsetPair = std::pair<VariableSubset, VariableSubset>;

/// Child 1 takes a's genes at positions [0, cut] and b's after cut; child 2 the reverse.
SubsetPair crossover_single_at(const VariableSubset& a, const VariableSubset& b, std::size_t p, std::size_t cut);
SubsetPair crossover_single(const VariableSubset& a, const VariableSubset& b, std::size_t p, RandomStream& rng);

/// Child 1 takes a's genes where take_first is set and b's elsewhere.
SubsetPair crossover_uniform_with_mask(const VariableSubset& a, const VariableSubset& b,
                                       const std::vector<bool>& take_first);
SubsetPair crossover_uniform(const VariableSubset& a, const VariableSubset& b, std::size_t p, RandomStream& rng);

/// Removes random genes down to max_vars or adds random absent genes up to min_vars.
VariableSubset repair(const VariableSubset& child, std::size_t min_vars, std::size_t max_vars, std::size_t p,
                      RandomStream& rng);

/// Adds or removes k random genes, k drawn from the double truncated geometric
/// law truncated so the size stays within [min_vars, max_vars].
VariableSubset mutate(const VariableSubset& subset, double mutation_probability, std::size_t min_vars,
                      std::size_t max_vars, std::size_t p, RandomStream& rng);

/// Current state of a run: one generation plus the elite, best first.
struct Population {
  std::vector<Chromosome> members;
  std::vector<Chromosome> elite;
};

/// Adds a chromosome to the elite if it is not already a member and beats the
/// worst member (or the elite is not full).
void update_elite(std::vector<Chromosome>& elite, const Chromosome& candidate, std::size_t elite_size);

/// Produces the next generation. Offspring are produced in population_size/2
/// mating slots; slot s of generation g draws only from the stream keyed by
/// (master_seed, g, s), and cross-slot duplicates are settled in slot order,
/// so the outcome does not depend on cfg.workers.
GenerationStats evolve_generation(Population& population, const GaConfig& cfg, std::size_t p,
                                  const EvaluateFn& evaluate, std::size_t generation);

/// Evaluates a fresh population and seeds the elite from it.
Population initial_population(const GaConfig& cfg, std::size_t p, const EvaluateFn& evaluate,
                              bool* duplicates_allowed = nullptr);

GaResult run_ga(const GaConfig& cfg, std::size_t p, const EvaluateFn& evaluate);

/// Throws InfeasibleError when the criterion cannot evaluate any subset within
/// the configured bounds on data with n observations.
void check_geometry(const GaConfig& cfg, std::size_t n);

GaResult run_ga(const Dataset& data, const GaConfig& cfg);

}  // namespace plsga
