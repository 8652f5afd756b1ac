#include "plsga/ga.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>
#include <unordered_set>

#include "plsga/dtgeom.hpp"
#include "plsga/error.hpp"
#include "plsga/model_selection.hpp"
#include "plsga/parallel.hpp"

namespace plsga {

namespace {

// Stream tags separating the initial population from generation slots.
constexpr std::uint64_t kInitTag = 0x696e6974ULL;
constexpr std::uint64_t kEvalTag = 0x6576616cULL;

using SubsetSet = std::unordered_set<VariableSubset, VariableSubsetHash>;

bool better(const Chromosome& a, const Chromosome& b) {
  if (a.objective() != b.objective()) {
    return a.objective() < b.objective();
  }
  return a.subset < b.subset;
}

double sample_sd(std::span<const double> values) {
  double sum = 0.0;
  std::size_t n = 0;
  for (double v : values) {
    if (std::isfinite(v)) {
      sum += v;
      ++n;
    }
  }
  if (n < 2) {
    return 0.0;
  }
  const double mean = sum / static_cast<double>(n);
  double ss = 0.0;
  for (double v : values) {
    if (std::isfinite(v)) ss += (v - mean) * (v - mean);
  }
  return std::sqrt(ss / static_cast<double>(n - 1));
}

// Picks `count` distinct elements of `pool` uniformly at random (partial
// Fisher-Yates); the selection is returned in draw order.
std::vector<Gene> sample_without_replacement(std::vector<Gene> pool, std::size_t count, RandomStream& rng) {
  count = std::min(count, pool.size());
  for (std::size_t i = 0; i < count; ++i) {
    const auto j = i + static_cast<std::size_t>(rng.uniform_index(pool.size() - i));
    std::swap(pool[i], pool[j]);
  }
  pool.resize(count);
  return pool;
}

std::vector<Gene> absent_genes(const VariableSubset& s, std::size_t p) {
  std::vector<Gene> absent;
  absent.reserve(p - s.size());
  auto it = s.genes().begin();
  for (std::size_t g = 0; g < p; ++g) {
    if (it != s.genes().end() && *it == g) {
      ++it;
    } else {
      absent.push_back(static_cast<Gene>(g));
    }
  }
  return absent;
}

VariableSubset add_random(const VariableSubset& s, std::size_t count, std::size_t p, RandomStream& rng) {
  std::vector<Gene> genes = s.genes();
  const std::vector<Gene> added = sample_without_replacement(absent_genes(s, p), count, rng);
  genes.insert(genes.end(), added.begin(), added.end());
  return VariableSubset(std::move(genes));
}

VariableSubset keep_random(const VariableSubset& s, std::size_t keep, RandomStream& rng) {
  return VariableSubset(sample_without_replacement(s.genes(), keep, rng));
}

VariableSubset random_subset(std::size_t p, std::size_t size, RandomStream& rng) {
  // Floyd's algorithm: uniform subset of the given size.
  std::vector<Gene> genes;
  genes.reserve(size);
  std::unordered_set<Gene> chosen;
  for (std::size_t j = p - size; j < p; ++j) {
    const auto t = static_cast<Gene>(rng.uniform_index(j + 1));
    const Gene pick = chosen.contains(t) ? static_cast<Gene>(j) : t;
    chosen.insert(pick);
    genes.push_back(pick);
  }
  return VariableSubset(std::move(genes));
}

}  // namespace

std::string_view to_string(CrossoverKind c) noexcept {
  return c == CrossoverKind::uniform ? "uniform" : "single";
}

std::optional<CrossoverKind> parse_crossover(std::string_view s) noexcept {
  if (s == "single") return CrossoverKind::single;
  if (s == "uniform") return CrossoverKind::uniform;
  return std::nullopt;
}

void GaConfig::validate(std::size_t p) const {
  if (population_size < 4 || population_size % 2 != 0) {
    throw ConfigError("population must be an even number of at least 4");
  }
  if (generations < 1) throw ConfigError("generations must be at least 1");
  if (min_vars < 1 || min_vars > max_vars) throw ConfigError("variable bounds must satisfy 1 <= min-vars <= max-vars");
  if (max_vars > p) {
    throw ConfigError("max-vars (" + std::to_string(max_vars) + ") exceeds the number of variables (" +
                      std::to_string(p) + ")");
  }
  if (!(mutation_probability >= 0.0 && mutation_probability < 1.0)) {
    throw ConfigError("mutation-prob must lie in [0, 1)");
  }
  if (!(rejection_factor >= 0.0)) throw ConfigError("rejection-factor must be nonnegative");
  if (max_mate_attempts < 1) throw ConfigError("max-mate-attempts must be at least 1");
  if (workers < 1) throw ConfigError("workers must be at least 1");
  fitness.validate();
}

std::uint64_t count_subsets(std::size_t p, std::size_t min_vars, std::size_t max_vars, std::uint64_t cap) {
  // Sum of binomial coefficients C(p, s), saturated at cap.
  long double total = 0.0L;
  long double binom = 1.0L;  // C(p, 0)
  for (std::size_t s = 0; s <= std::min(max_vars, p); ++s) {
    if (s > 0) {
      binom = binom * static_cast<long double>(p - s + 1) / static_cast<long double>(s);
    }
    if (s >= min_vars) {
      total += binom;
      if (total >= static_cast<long double>(cap)) {
        return cap;
      }
    }
  }
  return static_cast<std::uint64_t>(std::llround(total));
}

std::vector<VariableSubset> init_population(std::size_t p, const GaConfig& cfg, RandomStream& rng,
                                            bool* duplicates_allowed) {
  if (cfg.max_vars > p || cfg.min_vars < 1 || cfg.min_vars > cfg.max_vars) {
    throw ConfigError("variable bounds are infeasible for " + std::to_string(p) + " variables");
  }
  const bool allow_dups = count_subsets(p, cfg.min_vars, cfg.max_vars, cfg.population_size) < cfg.population_size;
  if (duplicates_allowed != nullptr) {
    *duplicates_allowed = allow_dups;
  }
  std::vector<VariableSubset> population;
  population.reserve(cfg.population_size);
  SubsetSet seen;
  const std::size_t width = cfg.max_vars - cfg.min_vars + 1;
  while (population.size() < cfg.population_size) {
    const std::size_t size = cfg.min_vars + static_cast<std::size_t>(rng.uniform_index(width));
    VariableSubset candidate = random_subset(p, size, rng);
    if (allow_dups || seen.insert(candidate).second) {
      population.push_back(std::move(candidate));
    }
  }
  return population;
}

std::vector<double> selection_probabilities(std::span<const double> criterion_means, bool exp_transform) {
  const std::size_t n = criterion_means.size();
  std::vector<double> weights(n, 0.0);
  if (n == 0) {
    return weights;
  }
  std::vector<std::size_t> finite;
  for (std::size_t i = 0; i < n; ++i) {
    if (std::isfinite(criterion_means[i])) finite.push_back(i);
  }
  const auto uniform_over = [&](const std::vector<std::size_t>& idx) {
    std::fill(weights.begin(), weights.end(), 0.0);
    for (std::size_t i : idx) weights[i] = 1.0 / static_cast<double>(idx.size());
    return weights;
  };
  if (finite.empty()) {
    std::vector<std::size_t> all(n);
    std::iota(all.begin(), all.end(), std::size_t{0});
    return uniform_over(all);
  }

  double mean = 0.0;
  for (std::size_t i : finite) mean += -criterion_means[i];
  mean /= static_cast<double>(finite.size());
  double ss = 0.0;
  for (std::size_t i : finite) ss += (-criterion_means[i] - mean) * (-criterion_means[i] - mean);
  const double sd = finite.size() >= 2 ? std::sqrt(ss / static_cast<double>(finite.size() - 1)) : 0.0;
  if (!(sd > 0.0) || !std::isfinite(sd)) {
    return uniform_over(finite);
  }

  double min_scaled = std::numeric_limits<double>::infinity();
  for (std::size_t i : finite) {
    weights[i] = (-criterion_means[i] - mean) / sd;
    min_scaled = std::min(min_scaled, weights[i]);
  }
  double total = 0.0;
  for (std::size_t i : finite) {
    weights[i] = exp_transform ? std::exp(weights[i]) : weights[i] - min_scaled;
    total += weights[i];
  }
  if (!(total > 0.0) || !std::isfinite(total)) {
    return uniform_over(finite);
  }
  for (double& w : weights) w /= total;
  return weights;
}

SubsetPair crossover_single_at(const VariableSubset& a, const VariableSubset& b, std::size_t p, std::size_t cut) {
  std::vector<Gene> first;
  std::vector<Gene> second;
  for (Gene g : a.genes()) (g <= cut ? first : second).push_back(g);
  for (Gene g : b.genes()) (g <= cut ? second : first).push_back(g);
  (void)p;
  return {VariableSubset(std::move(first)), VariableSubset(std::move(second))};
}

SubsetPair crossover_single(const VariableSubset& a, const VariableSubset& b, std::size_t p, RandomStream& rng) {
  return crossover_single_at(a, b, p, static_cast<std::size_t>(rng.uniform_index(p)));
}

SubsetPair crossover_uniform_with_mask(const VariableSubset& a, const VariableSubset& b,
                                       const std::vector<bool>& take_first) {
  std::vector<Gene> first;
  std::vector<Gene> second;
  for (Gene g : a.genes()) (take_first.at(g) ? first : second).push_back(g);
  for (Gene g : b.genes()) (take_first.at(g) ? second : first).push_back(g);
  return {VariableSubset(std::move(first)), VariableSubset(std::move(second))};
}

SubsetPair crossover_uniform(const VariableSubset& a, const VariableSubset& b, std::size_t p, RandomStream& rng) {
  std::vector<bool> take_first(p);
  for (std::size_t i = 0; i < p; ++i) take_first[i] = rng.coin();
  return crossover_uniform_with_mask(a, b, take_first);
}

VariableSubset repair(const VariableSubset& child, std::size_t min_vars, std::size_t max_vars, std::size_t p,
                      RandomStream& rng) {
  if (child.size() > max_vars) {
    return keep_random(child, max_vars, rng);
  }
  if (child.size() < min_vars) {
    return add_random(child, min_vars - child.size(), p, rng);
  }
  return child;
}

VariableSubset mutate(const VariableSubset& subset, double mutation_probability, std::size_t min_vars,
                      std::size_t max_vars, std::size_t p, RandomStream& rng) {
  const auto size = static_cast<int>(subset.size());
  const DtGeomParams params{1.0 - mutation_probability, static_cast<int>(min_vars) - size,
                            static_cast<int>(max_vars) - size};
  const int k = dtgeom_sample(params, rng);
  if (k > 0) {
    return add_random(subset, static_cast<std::size_t>(k), p, rng);
  }
  if (k < 0) {
    return keep_random(subset, subset.size() - static_cast<std::size_t>(-k), rng);
  }
  return subset;
}

void update_elite(std::vector<Chromosome>& elite, const Chromosome& candidate, std::size_t elite_size) {
  if (elite_size == 0 || !candidate.fitness.feasible) {
    return;
  }
  for (const Chromosome& e : elite) {
    if (e.subset == candidate.subset) return;
  }
  if (elite.size() >= elite_size && !better(candidate, elite.back())) {
    return;
  }
  Chromosome member = candidate;
  member.escaped = false;
  member.duplicate = false;
  elite.insert(std::upper_bound(elite.begin(), elite.end(), member, better), std::move(member));
  if (elite.size() > elite_size) {
    elite.pop_back();
  }
}

namespace {

struct Candidate {
  Chromosome chromosome;
  bool evaluated = false;
};

// State of one mating slot across merge rounds.
struct Slot {
  explicit Slot(std::uint64_t seed) : rng(seed) {}

  RandomStream rng;
  std::size_t needed = 2;
  std::size_t attempts = 0;
  std::size_t evaluations = 0;
  std::vector<Candidate> produced;   // this round's proposals
  std::vector<Chromosome> rejected;  // evaluated non-duplicates that failed the rules
  std::optional<VariableSubset> last_duplicate;
};

class GenerationBuilder {
 public:
  GenerationBuilder(const Population& population, const GaConfig& cfg, std::size_t p, const EvaluateFn& evaluate,
                    std::size_t generation)
      : cfg_(cfg), p_(p), evaluate_(evaluate), generation_(generation) {
    SubsetSet in_population;
    for (const Chromosome& c : population.members) {
      pool_.push_back(&c);
      in_population.insert(c.subset);
    }
    for (const Chromosome& c : population.elite) {
      if (!in_population.contains(c.subset)) pool_.push_back(&c);
    }
    std::vector<double> objectives;
    for (const Chromosome* c : pool_) objectives.push_back(c->objective());
    const std::vector<double> probs = selection_probabilities(objectives, cfg.exp_transform);
    cumulative_.resize(probs.size());
    std::partial_sum(probs.begin(), probs.end(), cumulative_.begin());

    std::vector<double> current;
    for (const Chromosome& c : population.members) current.push_back(c.objective());
    tolerance_ = cfg.rejection_factor * sample_sd(current);

    if (cfg.elite_in_duplicate_check) {
      for (const Chromosome& c : population.elite) committed_.insert(c.subset);
    }
  }

  std::vector<Chromosome> build(GenerationStats& stats) {
    const std::size_t n_slots = cfg_.population_size / 2;
    std::vector<Slot> slots;
    slots.reserve(n_slots);
    for (std::size_t s = 0; s < n_slots; ++s) {
      slots.emplace_back(derive_seed(cfg_.master_seed, {generation_, s}));
    }
    std::vector<std::vector<Chromosome>> accepted(n_slots);

    std::vector<std::size_t> pending(n_slots);
    std::iota(pending.begin(), pending.end(), std::size_t{0});
    while (!pending.empty()) {
      // committed_ is read-only while slots run.
      parallel_for(pending.size(), cfg_.workers, [&](std::size_t i) { run_slot(slots[pending[i]], pending[i]); });

      std::vector<std::size_t> still_pending;
      for (std::size_t s : pending) {
        Slot& slot = slots[s];
        for (Candidate& cand : slot.produced) {
          Chromosome& c = cand.chromosome;
          if (!c.escaped && committed_.contains(c.subset)) {
            slot.last_duplicate = c.subset;
            continue;
          }
          if (c.escaped && committed_.contains(c.subset)) {
            c.duplicate = true;
          }
          committed_.insert(c.subset);
          accepted[s].push_back(std::move(c));
          --slot.needed;
        }
        slot.produced.clear();
        if (slot.needed > 0) still_pending.push_back(s);
      }
      pending = std::move(still_pending);
    }

    std::vector<Chromosome> offspring;
    offspring.reserve(cfg_.population_size);
    for (std::size_t s = 0; s < n_slots; ++s) {
      stats.evaluations += slots[s].evaluations;
      for (Chromosome& c : accepted[s]) {
        stats.escapes += c.escaped ? 1 : 0;
        stats.duplicate_escapes += c.duplicate ? 1 : 0;
        offspring.push_back(std::move(c));
      }
    }
    return offspring;
  }

 private:
  std::size_t pick_parent(RandomStream& rng) const {
    const double u = rng.uniform() * cumulative_.back();
    const auto it = std::upper_bound(cumulative_.begin(), cumulative_.end(), u);
    return std::min(static_cast<std::size_t>(it - cumulative_.begin()), cumulative_.size() - 1);
  }

  bool is_duplicate(const VariableSubset& s, const Slot& slot) const {
    if (committed_.contains(s)) return true;
    return std::any_of(slot.produced.begin(), slot.produced.end(),
                       [&](const Candidate& c) { return c.chromosome.subset == s; });
  }

  void run_slot(Slot& slot, std::size_t slot_index) const {
    while (slot.produced.size() < slot.needed) {
      if (slot.attempts >= cfg_.max_mate_attempts) {
        escape(slot, slot_index);
        return;
      }
      ++slot.attempts;
      const std::size_t i = pick_parent(slot.rng);
      std::size_t j = pick_parent(slot.rng);
      for (int retry = 0; j == i && pool_.size() > 1 && retry < 16; ++retry) {
        j = pick_parent(slot.rng);
      }
      const Chromosome& a = *pool_[i];
      const Chromosome& b = *pool_[j];
      const SubsetPair children = cfg_.crossover == CrossoverKind::uniform
                                      ? crossover_uniform(a.subset, b.subset, p_, slot.rng)
                                      : crossover_single(a.subset, b.subset, p_, slot.rng);
      const double threshold = std::max(a.objective(), b.objective()) + tolerance_;

      for (std::size_t c = 0; c < 2 && slot.produced.size() < slot.needed; ++c) {
        const VariableSubset& raw = c == 0 ? children.first : children.second;
        VariableSubset child = mutate(repair(raw, cfg_.min_vars, cfg_.max_vars, p_, slot.rng),
                                      cfg_.mutation_probability, cfg_.min_vars, cfg_.max_vars, p_, slot.rng);
        if (is_duplicate(child, slot)) {
          slot.last_duplicate = std::move(child);
          continue;
        }
        Chromosome offspring{child, evaluate(slot, slot_index, child, c), false, false};
        if (offspring.fitness.feasible && offspring.objective() <= threshold) {
          slot.produced.push_back({std::move(offspring), true});
        } else {
          slot.rejected.push_back(std::move(offspring));
        }
      }
    }
  }

  // Livelock escape: fill the remaining positions with the best rejected
  // non-duplicates, then with the last duplicate seen.
  void escape(Slot& slot, std::size_t slot_index) const {
    std::sort(slot.rejected.begin(), slot.rejected.end(), better);
    for (const Chromosome& r : slot.rejected) {
      if (slot.produced.size() >= slot.needed) break;
      if (is_duplicate(r.subset, slot)) continue;
      Chromosome c = r;
      c.escaped = true;
      slot.produced.push_back({std::move(c), true});
    }
    while (slot.produced.size() < slot.needed) {
      VariableSubset s = slot.last_duplicate ? *slot.last_duplicate
                                             : (slot.rejected.empty() ? pool_.front()->subset : slot.rejected.front().subset);
      Chromosome c{s, evaluate(slot, slot_index, s, 2 + slot.produced.size()), true, true};
      slot.produced.push_back({std::move(c), true});
    }
  }

  FitnessValue evaluate(Slot& slot, std::size_t slot_index, const VariableSubset& s, std::size_t child) const {
    ++slot.evaluations;
    const std::uint64_t seed =
        derive_seed(cfg_.master_seed, {kEvalTag, generation_, slot_index, slot.attempts, child});
    return evaluate_(s, seed);
  }

  const GaConfig& cfg_;
  std::size_t p_;
  const EvaluateFn& evaluate_;
  std::size_t generation_;
  std::vector<const Chromosome*> pool_;
  std::vector<double> cumulative_;
  double tolerance_ = 0.0;
  SubsetSet committed_;
};

GenerationStats summarize(const Population& population, std::size_t generation) {
  GenerationStats stats;
  stats.generation = generation;
  double sum = 0.0;
  std::size_t finite = 0;
  const Chromosome* best = nullptr;
  for (const Chromosome& c : population.members) {
    if (std::isfinite(c.objective())) {
      sum += c.objective();
      ++finite;
    }
    if (best == nullptr || better(c, *best)) best = &c;
  }
  if (!population.elite.empty() && (best == nullptr || better(population.elite.front(), *best))) {
    best = &population.elite.front();
  }
  stats.mean_fitness = finite > 0 ? sum / static_cast<double>(finite) : std::numeric_limits<double>::infinity();
  stats.best_fitness = best != nullptr ? best->objective() : std::numeric_limits<double>::infinity();
  if (best != nullptr) stats.best_subset = best->subset;
  return stats;
}

}  // namespace

GenerationStats evolve_generation(Population& population, const GaConfig& cfg, std::size_t p,
                                  const EvaluateFn& evaluate, std::size_t generation) {
  GenerationStats counters;
  GenerationBuilder builder(population, cfg, p, evaluate, generation);
  std::vector<Chromosome> offspring = builder.build(counters);

  population.members = std::move(offspring);
  for (const Chromosome& c : population.members) {
    update_elite(population.elite, c, cfg.elite_size);
  }
  GenerationStats stats = summarize(population, generation);
  stats.evaluations = counters.evaluations;
  stats.escapes = counters.escapes;
  stats.duplicate_escapes = counters.duplicate_escapes;
  return stats;
}

Population initial_population(const GaConfig& cfg, std::size_t p, const EvaluateFn& evaluate,
                              bool* duplicates_allowed) {
  RandomStream rng(derive_seed(cfg.master_seed, {kInitTag}));
  std::vector<VariableSubset> subsets = init_population(p, cfg, rng, duplicates_allowed);
  Population population;
  population.members.resize(subsets.size());
  parallel_for(subsets.size(), cfg.workers, [&](std::size_t i) {
    population.members[i].subset = subsets[i];
    population.members[i].fitness = evaluate(subsets[i], derive_seed(cfg.master_seed, {kInitTag, kEvalTag, i}));
  });
  for (const Chromosome& c : population.members) {
    update_elite(population.elite, c, cfg.elite_size);
  }
  return population;
}

GaResult run_ga(const GaConfig& cfg, std::size_t p, const EvaluateFn& evaluate) {
  cfg.validate(p);
  GaResult result;
  Population population = initial_population(cfg, p, evaluate, &result.duplicates_allowed);
  result.evaluations = population.members.size();
  for (std::size_t g = 1; g <= cfg.generations; ++g) {
    GenerationStats stats = evolve_generation(population, cfg, p, evaluate, g);
    result.evaluations += stats.evaluations;
    result.history.push_back(std::move(stats));
  }

  // Rank population and elite together; the first occurrence of a subset wins.
  std::vector<const Chromosome*> all;
  for (const Chromosome& c : population.elite) all.push_back(&c);
  for (const Chromosome& c : population.members) all.push_back(&c);
  std::stable_sort(all.begin(), all.end(), [](const Chromosome* a, const Chromosome* b) { return better(*a, *b); });
  SubsetSet seen;
  for (const Chromosome* c : all) {
    if (result.top_subsets.size() >= cfg.top_count) break;
    if (seen.insert(c->subset).second) {
      result.top_subsets.push_back({c->subset, c->fitness});
    }
  }
  result.elite = std::move(population.elite);
  return result;
}

void check_geometry(const GaConfig& cfg, std::size_t n) {
  const FitnessConfig& f = cfg.fitness;
  const auto fail = [&](const std::string& why) {
    throw InfeasibleError(std::string(to_string(cfg.criterion)) + " cannot be evaluated on " + std::to_string(n) +
                          " observations: " + why);
  };
  switch (cfg.criterion) {
    case Criterion::sep_srcv: {
      const std::size_t n_cal = calibration_size(n, f.calibration_ratio);
      if (n_cal < 2 || n_cal + 2 > n) fail("calibration/test split leaves fewer than 2 rows on one side");
      if (default_max_components(n_cal, cfg.min_vars, f.inner_segments, f.max_components_cap) == 0) {
        fail("calibration set too small for the inner cross-validation");
      }
      break;
    }
    case Criterion::sep_rdcv: {
      if (f.outer_segments > n) fail("more outer segments than observations");
      const std::size_t n_cal = n - (n + f.outer_segments - 1) / f.outer_segments;
      if (default_max_components(n_cal, cfg.min_vars, f.inner_segments, f.max_components_cap) == 0) {
        fail("outer calibration folds too small for the inner cross-validation");
      }
      break;
    }
    case Criterion::bic_pls:
      if (default_max_components(n, cfg.min_vars, f.inner_segments, f.max_components_cap) == 0) {
        fail("too few observations for the inner cross-validation");
      }
      break;
    case Criterion::bic_ols:
      if (cfg.min_vars + 2 > n) fail("OLS needs at least min-vars + 2 observations");
      break;
  }
}

GaResult run_ga(const Dataset& data, const GaConfig& cfg) {
  cfg.validate(data.n_variables());
  check_geometry(cfg, data.n_observations());
  const FitnessEvaluator evaluator(data, cfg.criterion, cfg.fitness);
  const EvaluateFn evaluate = [&evaluator](const VariableSubset& s, std::uint64_t seed) { return evaluator(s, seed); };
  return run_ga(cfg, data.n_variables(), evaluate);
}

}  // namespace plsga
