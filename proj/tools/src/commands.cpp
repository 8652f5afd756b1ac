#include "commands.hpp"

#include <chrono>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <map>
#include <optional>
#include <random>
#include <sstream>

#include <CLI11.hpp>

#include "plsga/dataset.hpp"
#include "plsga/error.hpp"
#include "plsga/evaluation.hpp"
#include "plsga/ga.hpp"
#include "plsga/parallel.hpp"
#include "reports.hpp"
#include "settings.hpp"

#ifndef PLSGA_VERSION
#define PLSGA_VERSION "unknown"
#endif

namespace plsga::cli {

namespace {

namespace fs = std::filesystem;
using Clock = std::chrono::steady_clock;

void declare_common(Settings& s) {
  s.declare("data", "", "CSV file with a header row");
  s.declare("response", "", "name of the response column");
  s.declare("id-column", "", "optional observation id column");
  s.declare("out", ".", "output directory");
  s.declare("seed", "", "master seed; drawn from entropy when empty");
  s.declare("workers", "", "concurrent evaluators; defaults to the available parallelism");
}

void declare_fitness(Settings& s) {
  s.declare("criterion", "srcv", "rdcv, srcv, bic-pls or bic-ols");
  s.declare("criterion-replications", "30", "replications R of srcv and rdcv");
  s.declare("inner-segments", "10", "inner CV segments K");
  s.declare("outer-segments", "4", "outer CV segments S (rdcv)");
  s.declare("calibration-ratio", "0.6", "calibration fraction (srcv)");
  s.declare("max-components", "30", "cap on the number of PLS components");
  s.declare("bic-penalty", "variables", "what the BIC penalty counts: variables or components");
}

void declare_ga(Settings& s) {
  s.declare("min-vars", "3", "smallest subset size");
  s.declare("max-vars", "30", "largest subset size");
  s.declare("population", "4000", "population size (even)");
  s.declare("generations", "300", "number of generations");
  s.declare("mutation-prob", "0.005", "mutation probability");
  s.declare("crossover", "single", "single or uniform");
  s.declare("exp-transform", "on", "exponentiate standardized fitness before selection");
  s.declare("elite-size", "10", "elite members kept across generations");
  s.declare("rejection-factor", "1", "offspring worse than the worse parent by this many SDs are rejected");
  s.declare("max-mate-attempts", "100", "attempts per mating slot before the livelock escape");
  s.declare("elite-duplicate-check", "on", "treat copies of elite members as duplicates");
  s.declare("top-count", "10", "number of ranked subsets reported");
}

struct Context {
  std::string command;
  Settings settings;
  std::optional<std::string> config_path;
  std::uint64_t seed = 0;
  std::string seed_origin;
  std::size_t workers = 1;
  std::map<std::string, double> phases;
  std::string started_at;
};

template <typename F>
auto timed(Context& ctx, const std::string& phase, F&& f) {
  const auto t0 = Clock::now();
  if constexpr (std::is_void_v<decltype(f())>) {
    f();
    ctx.phases[phase] = std::chrono::duration<double>(Clock::now() - t0).count();
  } else {
    auto result = f();
    ctx.phases[phase] = std::chrono::duration<double>(Clock::now() - t0).count();
    return result;
  }
}

std::string utc_now() {
  const std::time_t now = std::time(nullptr);
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

std::string read_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot read '" + path.string() + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

void write_file(const fs::path& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DataError("cannot write '" + path.string() + "'");
  out << content;
}

std::string fnv1a64_hex(std::string_view bytes) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

// Resolves the seed and worker count and records them as materialized values.
void resolve_runtime(Context& ctx) {
  Settings& s = ctx.settings;
  if (s.text("seed").empty()) {
    std::random_device rd;
    ctx.seed = (static_cast<std::uint64_t>(rd()) << 32) ^ rd();
    ctx.seed_origin = "entropy";
  } else {
    ctx.seed = s.u64("seed");
    ctx.seed_origin = std::string(to_string(s.at("seed").source));
  }
  ctx.workers = s.text("workers").empty() ? default_worker_count() : s.count("workers");
  if (ctx.workers < 1) throw ConfigError("workers must be at least 1");
}

Dataset load_dataset(Context& ctx, json& fingerprint) {
  const Settings& s = ctx.settings;
  if (s.text("data").empty()) throw ConfigError("data: a dataset path is required");
  if (s.text("response").empty()) throw ConfigError("response: a response column is required");
  return timed(ctx, "load", [&] {
    const fs::path path = s.text("data");
    const std::string bytes = read_file(path);
    std::optional<std::string> id;
    if (!s.text("id-column").empty()) id = s.text("id-column");
    Dataset data = load_csv(path, s.text("response"), id);
    fingerprint = {{"path", path.string()},
                   {"observations", data.n_observations()},
                   {"variables", data.n_variables()},
                   {"response", s.text("response")},
                   {"fnv1a64", fnv1a64_hex(bytes)}};
    return data;
  });
}

FitnessConfig fitness_config(const Settings& s) {
  FitnessConfig f;
  f.replications = s.count("criterion-replications");
  f.inner_segments = s.count("inner-segments");
  f.outer_segments = s.count("outer-segments");
  f.calibration_ratio = s.real("calibration-ratio");
  f.max_components_cap = s.count("max-components");
  const auto penalty = parse_bic_penalty(s.text("bic-penalty"));
  if (!penalty) throw ConfigError("bic-penalty: expected variables or components, got '" + s.text("bic-penalty") + "'");
  f.bic_penalty = *penalty;
  return f;
}

GaConfig ga_config(const Context& ctx) {
  const Settings& s = ctx.settings;
  GaConfig cfg;
  const auto criterion = parse_criterion(s.text("criterion"));
  if (!criterion) {
    throw ConfigError("criterion: expected rdcv, srcv, bic-pls or bic-ols, got '" + s.text("criterion") + "'");
  }
  cfg.criterion = *criterion;
  cfg.fitness = fitness_config(s);
  cfg.min_vars = s.count("min-vars");
  cfg.max_vars = s.count("max-vars");
  cfg.population_size = s.count("population");
  cfg.generations = s.count("generations");
  cfg.mutation_probability = s.real("mutation-prob");
  const auto crossover = parse_crossover(s.text("crossover"));
  if (!crossover) throw ConfigError("crossover: expected single or uniform, got '" + s.text("crossover") + "'");
  cfg.crossover = *crossover;
  cfg.exp_transform = s.toggle("exp-transform");
  cfg.elite_size = s.count("elite-size");
  cfg.rejection_factor = s.real("rejection-factor");
  cfg.max_mate_attempts = s.count("max-mate-attempts");
  cfg.elite_in_duplicate_check = s.toggle("elite-duplicate-check");
  cfg.top_count = s.count("top-count");
  cfg.master_seed = ctx.seed;
  cfg.workers = ctx.workers;
  return cfg;
}

json manifest(const Context& ctx, const json& dataset, json extra) {
  json settings = json::array();
  for (const Tunable& t : ctx.settings.all()) {
    std::string value = t.value;
    if (t.key == "seed") value = std::to_string(ctx.seed);
    if (t.key == "workers") value = std::to_string(ctx.workers);
    settings.push_back({{"key", t.key}, {"value", value}, {"source", std::string(to_string(t.source))}});
  }
  json phases = json::object();
  for (const auto& [name, seconds] : ctx.phases) phases[name] = seconds;
  json doc{{"command", ctx.command},
           {"version", PLSGA_VERSION},
           {"started_at", ctx.started_at},
           {"config_file", ctx.config_path ? json(*ctx.config_path) : json(nullptr)},
           {"settings", settings},
           {"dataset", dataset},
           {"seed", ctx.seed},
           {"seed_origin", ctx.seed_origin},
           {"workers", ctx.workers},
           {"phases_seconds", phases}};
  doc.update(extra);
  return doc;
}

fs::path output_dir(const Context& ctx) {
  const fs::path dir = ctx.settings.text("out");
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw DataError("cannot create output directory '" + dir.string() + "': " + ec.message());
  return dir;
}

int cmd_select(Context& ctx, std::ostream& out) {
  resolve_runtime(ctx);
  json fingerprint;
  const Dataset data = load_dataset(ctx, fingerprint);
  const GaConfig cfg = ga_config(ctx);
  const GaResult result = timed(ctx, "select", [&] { return run_ga(data, cfg); });

  const fs::path dir = output_dir(ctx);
  timed(ctx, "write", [&] {
    write_file(dir / "history.csv", write_history_csv(history_rows(result.history)));
    write_file(dir / "top_subsets.json",
               write_top_subsets({cfg.criterion, data.variable_names(), result.top_subsets}));
  });
  write_file(dir / "manifest.json",
             manifest(ctx, fingerprint,
                      {{"evaluations", result.evaluations}, {"duplicates_allowed", result.duplicates_allowed}})
                     .dump(2) +
                 "\n");

  if (!result.top_subsets.empty()) {
    const RankedSubset& best = result.top_subsets.front();
    out << "best " << to_string(cfg.criterion) << " = " << format_real(best.fitness.mean) << " with "
        << best.subset.size() << " variables:";
    for (Gene g : best.subset.genes()) out << ' ' << data.variable_names()[g];
    out << "\n";
  }
  out << "wrote " << (dir / "history.csv").string() << ", " << (dir / "top_subsets.json").string() << ", "
      << (dir / "manifest.json").string() << "\n";
  return kExitOk;
}

int cmd_verify(Context& ctx, std::ostream& out) {
  resolve_runtime(ctx);
  const Settings& s = ctx.settings;
  json fingerprint;
  const Dataset data = load_dataset(ctx, fingerprint);
  if (s.text("subsets").empty()) throw ConfigError("subsets: a top_subsets.json path is required");
  const TopSubsetsReport ranked = read_top_subsets(read_file(s.text("subsets")));

  std::vector<VariableSubset> subsets;
  for (std::size_t i = 0; i < ranked.subsets.size(); ++i) {
    const VariableSubset& v = ranked.subsets[i].subset;
    if (!v.empty() && v.genes().back() >= data.n_variables()) {
      throw DataError("subset " + std::to_string(i + 1) + ": variable index " + std::to_string(v.genes().back()) +
                      " is out of range for " + std::to_string(data.n_variables()) + " variables");
    }
    subsets.push_back(v);
  }

  VerifyOptions opt;
  opt.replications = s.count("replications");
  opt.inner_segments = s.count("inner-segments");
  opt.outer_segments = s.count("outer-segments");
  opt.max_components_cap = s.count("max-components");
  opt.cross_check = s.toggle("cross-check");
  opt.seed = ctx.seed;
  opt.workers = ctx.workers;
  const VerificationReport report = timed(ctx, "verify", [&] { return verify_internal(data, subsets, opt); });

  const fs::path dir = output_dir(ctx);
  timed(ctx, "write", [&] {
    write_file(dir / "verification.json", write_verification_json(report, data.variable_names()));
    write_file(dir / "verification.csv", write_verification_csv(verification_rows(report)));
  });
  write_file(dir / "manifest.json", manifest(ctx, fingerprint, json::object()).dump(2) + "\n");

  for (std::size_t i = 0; i < report.subsets.size(); ++i) {
    const SubsetVerification& row = report.subsets[i];
    out << "rank " << i + 1 << ": ";
    if (row.feasible) {
      out << "mean SEP " << format_real(row.mean) << " (median " << format_real(row.box.median) << ")\n";
    } else {
      out << "infeasible: " << row.note << "\n";
    }
  }
  return kExitOk;
}

int cmd_external(Context& ctx, std::ostream& out) {
  resolve_runtime(ctx);
  const Settings& s = ctx.settings;
  json fingerprint;
  const Dataset data = load_dataset(ctx, fingerprint);
  const GaConfig cfg = ga_config(ctx);
  ExternalOptions opt;
  opt.training_ratio = s.real("training-ratio");
  opt.repeats = s.count("repeats");
  opt.verify_replications = s.count("verify-replications");
  opt.seed = ctx.seed;
  const ExternalReport report = timed(ctx, "external", [&] { return external_validate(data, cfg, opt); });

  const fs::path dir = output_dir(ctx);
  const std::string table = format_external_table(report, fs::path(s.text("data")).stem().string());
  timed(ctx, "write", [&] {
    write_file(dir / "external.json", write_external_json(report, data.variable_names()));
    write_file(dir / "external.txt", table);
  });
  write_file(dir / "manifest.json", manifest(ctx, fingerprint, json::object()).dump(2) + "\n");
  out << table;
  return kExitOk;
}

// Registers one CLI11 option per setting; values given on the command line
// are copied into the settings after parsing.
void bind_flags(CLI::App& app, Settings& settings, std::map<std::string, std::string>& storage) {
  for (const Tunable& t : settings.all()) {
    app.add_option("--" + t.key, storage[t.key], t.help + " [default: " + (t.value.empty() ? "none" : t.value) + "]");
  }
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Variable selection for PLS regression with a genetic algorithm", "plsga"};
  app.require_subcommand(1);

  struct Command {
    CLI::App* app;
    Context ctx;
    std::map<std::string, std::string> flags;
    std::string config;
  };
  std::map<std::string, Command> commands;
  const auto add = [&](const std::string& name, const std::string& help, auto declare) {
    Command& c = commands[name];
    c.ctx.command = name;
    declare(c.ctx.settings);
    c.app = app.add_subcommand(name, help);
    c.app->add_option("--config", c.config, "key = value settings file");
    bind_flags(*c.app, c.ctx.settings, c.flags);
  };
  add("select", "run the genetic algorithm and rank variable subsets", [](Settings& s) {
    declare_common(s);
    declare_fitness(s);
    declare_ga(s);
  });
  add("verify", "repeated double CV of previously selected subsets", [](Settings& s) {
    declare_common(s);
    s.declare("subsets", "", "top_subsets.json written by select");
    s.declare("replications", "50", "rdCV replications");
    s.declare("inner-segments", "10", "inner CV segments K");
    s.declare("outer-segments", "4", "outer CV segments S");
    s.declare("max-components", "30", "cap on the number of PLS components");
    s.declare("cross-check", "on", "repeat the rdCV with the NIPALS fitter");
  });
  add("external", "external validation with repeated training/validation splits", [](Settings& s) {
    declare_common(s);
    declare_fitness(s);
    declare_ga(s);
    s.declare("training-ratio", "0.6", "fraction of observations used for variable selection");
    s.declare("repeats", "10", "number of independent splits");
    s.declare("verify-replications", "0", "re-rank the GA's top subsets by rdCV with this many replications");
  });

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    std::ostringstream text;
    const int code = app.exit(e, text, text);
    (code == 0 ? out : err) << text.str();
    return code == 0 ? kExitOk : kExitInput;
  }

  for (auto& [name, c] : commands) {
    if (!c.app->parsed()) continue;
    Context& ctx = c.ctx;
    ctx.started_at = utc_now();
    try {
      if (!c.config.empty()) {
        ctx.config_path = c.config;
        ctx.settings.apply_config_file(c.config);
      }
      for (const auto& [key, value] : c.flags) {
        if (c.app->count("--" + key) > 0) ctx.settings.set_flag(key, value);
      }
      if (name == "select") return cmd_select(ctx, out);
      if (name == "verify") return cmd_verify(ctx, out);
      return cmd_external(ctx, out);
    } catch (const ConfigError& e) {
      err << "plsga " << name << ": configuration error: " << e.what() << "\n";
      return kExitInput;
    } catch (const InfeasibleError& e) {
      err << "plsga " << name << ": infeasible: " << e.what() << "\n";
      return kExitInfeasible;
    } catch (const DataError& e) {
      err << "plsga " << name << ": input error: " << e.what() << "\n";
      return kExitInput;
    } catch (const SplitError& e) {
      err << "plsga " << name << ": input error: " << e.what() << "\n";
      return kExitInput;
    } catch (const std::exception& e) {
      err << "plsga " << name << ": numerical failure: " << e.what() << "\n";
      return kExitNumerical;
    }
  }
  return kExitInput;
}

}  // namespace plsga::cli
