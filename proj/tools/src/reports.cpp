#include "reports.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <iomanip>
#include <limits>
#include <sstream>

#include "plsga/error.hpp"

namespace plsga::cli {

namespace {

std::vector<std::string> names_of(const VariableSubset& s, const std::vector<std::string>& names) {
  std::vector<std::string> out;
  for (Gene g : s.genes()) out.push_back(g < names.size() ? names[g] : std::to_string(g));
  return out;
}

VariableSubset subset_from_json(const json& j) {
  std::vector<Gene> genes;
  for (const json& g : j) {
    if (!g.is_number_unsigned()) throw DataError("subset indices must be non-negative integers");
    genes.push_back(g.get<Gene>());
  }
  return VariableSubset(std::move(genes));
}

json parse_json(std::string_view text) {
  json j = json::parse(text, nullptr, false);
  if (j.is_discarded()) throw DataError("malformed JSON");
  return j;
}

template <typename F>
auto guarded(F&& f) {
  try {
    return f();
  } catch (const json::exception& e) {
    throw DataError(std::string("unexpected JSON layout: ") + e.what());
  }
}

std::vector<std::string_view> split_line(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t pos = 0;
  while (true) {
    const auto comma = line.find(',', pos);
    out.push_back(line.substr(pos, comma == std::string_view::npos ? std::string_view::npos : comma - pos));
    if (comma == std::string_view::npos) break;
    pos = comma + 1;
  }
  return out;
}

std::vector<std::vector<std::string_view>> csv_body(std::string_view text, std::string_view header) {
  std::vector<std::vector<std::string_view>> rows;
  std::size_t pos = 0;
  bool first = true;
  while (pos < text.size()) {
    auto end = text.find('\n', pos);
    if (end == std::string_view::npos) end = text.size();
    const std::string_view line = text.substr(pos, end - pos);
    pos = end + 1;
    if (first) {
      if (line != header) throw DataError("unexpected CSV header '" + std::string(line) + "'");
      first = false;
      continue;
    }
    if (!line.empty()) rows.push_back(split_line(line));
  }
  if (first) throw DataError("empty CSV");
  return rows;
}

double parse_real(std::string_view s) {
  if (s == "inf") return std::numeric_limits<double>::infinity();
  if (s == "-inf") return -std::numeric_limits<double>::infinity();
  if (s == "nan") return std::numeric_limits<double>::quiet_NaN();
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (s.empty() || ec != std::errc() || ptr != s.data() + s.size()) {
    throw DataError("not a number: '" + std::string(s) + "'");
  }
  return v;
}

std::size_t parse_count(std::string_view s) {
  std::size_t v = 0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (s.empty() || ec != std::errc() || ptr != s.data() + s.size()) {
    throw DataError("not a count: '" + std::string(s) + "'");
  }
  return v;
}

json box_to_json(const BoxplotStats& b) {
  json outliers = json::array();
  for (double o : b.outliers) outliers.push_back(encode_real(o));
  return {{"minimum", encode_real(b.minimum)},           {"lower_whisker", encode_real(b.lower_whisker)},
          {"lower_hinge", encode_real(b.lower_hinge)},   {"median", encode_real(b.median)},
          {"upper_hinge", encode_real(b.upper_hinge)},   {"upper_whisker", encode_real(b.upper_whisker)},
          {"maximum", encode_real(b.maximum)},           {"outliers", outliers}};
}

BoxplotStats box_from_json(const json& j) {
  BoxplotStats b;
  b.minimum = decode_real(j.at("minimum"));
  b.lower_whisker = decode_real(j.at("lower_whisker"));
  b.lower_hinge = decode_real(j.at("lower_hinge"));
  b.median = decode_real(j.at("median"));
  b.upper_hinge = decode_real(j.at("upper_hinge"));
  b.upper_whisker = decode_real(j.at("upper_whisker"));
  b.maximum = decode_real(j.at("maximum"));
  for (const json& o : j.at("outliers")) b.outliers.push_back(decode_real(o));
  return b;
}

json median_mad_json(const MedianMad& m) { return {{"median", encode_real(m.median)}, {"mad", encode_real(m.mad)}}; }

MedianMad median_mad_from_json(const json& j) { return {decode_real(j.at("median")), decode_real(j.at("mad"))}; }

}  // namespace

std::string format_real(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, ptr);
}

json encode_real(double v) {
  if (std::isfinite(v)) return v;
  return format_real(v);
}

double decode_real(const json& j) {
  if (j.is_number()) return j.get<double>();
  if (j.is_string()) return parse_real(j.get<std::string>());
  throw DataError("expected a number");
}

json to_json(const FitnessValue& v) {
  json replicates = json::array();
  for (double r : v.replicates) replicates.push_back(encode_real(r));
  return {{"criterion", std::string(to_string(v.criterion))},
          {"mean", encode_real(v.mean)},
          {"sd", encode_real(v.sd)},
          {"replicates", replicates},
          {"a_opt", v.a_opt_per_replicate},
          {"feasible", v.feasible},
          {"rss_floored", v.rss_floored},
          {"note", v.note}};
}

FitnessValue fitness_from_json(const json& j) {
  return guarded([&] {
    FitnessValue v;
    const auto c = parse_criterion(j.at("criterion").get<std::string>());
    if (!c) throw DataError("unknown criterion in fitness record");
    v.criterion = *c;
    v.mean = decode_real(j.at("mean"));
    v.sd = decode_real(j.at("sd"));
    for (const json& r : j.at("replicates")) v.replicates.push_back(decode_real(r));
    v.a_opt_per_replicate = j.at("a_opt").get<std::vector<std::vector<std::size_t>>>();
    v.feasible = j.at("feasible").get<bool>();
    v.rss_floored = j.at("rss_floored").get<bool>();
    v.note = j.at("note").get<std::string>();
    return v;
  });
}

bool operator==(const TopSubsetsReport& a, const TopSubsetsReport& b) {
  if (a.criterion != b.criterion || a.variable_names != b.variable_names || a.subsets.size() != b.subsets.size()) {
    return false;
  }
  for (std::size_t i = 0; i < a.subsets.size(); ++i) {
    if (a.subsets[i].subset != b.subsets[i].subset || !(a.subsets[i].fitness == b.subsets[i].fitness)) return false;
  }
  return true;
}

std::string write_top_subsets(const TopSubsetsReport& report) {
  json subsets = json::array();
  for (std::size_t i = 0; i < report.subsets.size(); ++i) {
    const RankedSubset& r = report.subsets[i];
    subsets.push_back({{"rank", i + 1},
                       {"size", r.subset.size()},
                       {"indices", r.subset.genes()},
                       {"variables", names_of(r.subset, report.variable_names)},
                       {"fitness", to_json(r.fitness)}});
  }
  const json doc{{"criterion", std::string(to_string(report.criterion))},
                 {"variable_names", report.variable_names},
                 {"subsets", subsets}};
  return doc.dump(2) + "\n";
}

TopSubsetsReport read_top_subsets(std::string_view text) {
  const json doc = parse_json(text);
  return guarded([&] {
    TopSubsetsReport report;
    const auto c = parse_criterion(doc.at("criterion").get<std::string>());
    if (!c) throw DataError("unknown criterion in subsets file");
    report.criterion = *c;
    report.variable_names = doc.at("variable_names").get<std::vector<std::string>>();
    for (const json& s : doc.at("subsets")) {
      report.subsets.push_back({subset_from_json(s.at("indices")), fitness_from_json(s.at("fitness"))});
    }
    return report;
  });
}

std::vector<HistoryRow> history_rows(const std::vector<GenerationStats>& history) {
  std::vector<HistoryRow> rows;
  for (const GenerationStats& g : history) rows.push_back({g.generation, g.mean_fitness, g.best_fitness});
  return rows;
}

std::string write_history_csv(const std::vector<HistoryRow>& rows) {
  std::string out = "generation,mean_fitness,best_fitness\n";
  for (const HistoryRow& r : rows) {
    out += std::to_string(r.generation) + "," + format_real(r.mean_fitness) + "," + format_real(r.best_fitness) + "\n";
  }
  return out;
}

std::vector<HistoryRow> read_history_csv(std::string_view text) {
  std::vector<HistoryRow> rows;
  for (const auto& f : csv_body(text, "generation,mean_fitness,best_fitness")) {
    if (f.size() != 3) throw DataError("history rows need 3 fields");
    rows.push_back({parse_count(f[0]), parse_real(f[1]), parse_real(f[2])});
  }
  return rows;
}

std::string write_verification_json(const VerificationReport& report, const std::vector<std::string>& names) {
  const VerifyOptions& o = report.options;
  json subsets = json::array();
  for (std::size_t i = 0; i < report.subsets.size(); ++i) {
    const SubsetVerification& s = report.subsets[i];
    json replicates = json::array();
    for (double r : s.replicates) replicates.push_back(encode_real(r));
    json counts = json::object();
    for (const auto& [a, n] : s.component_counts) counts[std::to_string(a)] = n;
    subsets.push_back({{"rank", i + 1},
                       {"size", s.subset.size()},
                       {"indices", s.subset.genes()},
                       {"variables", names_of(s.subset, names)},
                       {"feasible", s.feasible},
                       {"note", s.note},
                       {"mean", encode_real(s.mean)},
                       {"oracle_mean", s.oracle_mean ? encode_real(*s.oracle_mean) : json(nullptr)},
                       {"box", box_to_json(s.box)},
                       {"component_counts", counts},
                       {"replicates", replicates}});
  }
  const json doc{{"options",
                  {{"replications", o.replications},
                   {"inner_segments", o.inner_segments},
                   {"outer_segments", o.outer_segments},
                   {"max_components", o.max_components_cap},
                   {"seed", o.seed},
                   {"workers", o.workers},
                   {"cross_check", o.cross_check}}},
                 {"subsets", subsets}};
  return doc.dump(2) + "\n";
}

VerificationReport read_verification_json(std::string_view text) {
  const json doc = parse_json(text);
  return guarded([&] {
    VerificationReport report;
    const json& o = doc.at("options");
    report.options.replications = o.at("replications").get<std::size_t>();
    report.options.inner_segments = o.at("inner_segments").get<std::size_t>();
    report.options.outer_segments = o.at("outer_segments").get<std::size_t>();
    report.options.max_components_cap = o.at("max_components").get<std::size_t>();
    report.options.seed = o.at("seed").get<std::uint64_t>();
    report.options.workers = o.at("workers").get<std::size_t>();
    report.options.cross_check = o.at("cross_check").get<bool>();
    for (const json& s : doc.at("subsets")) {
      SubsetVerification row;
      row.subset = subset_from_json(s.at("indices"));
      row.feasible = s.at("feasible").get<bool>();
      row.note = s.at("note").get<std::string>();
      row.mean = decode_real(s.at("mean"));
      if (!s.at("oracle_mean").is_null()) row.oracle_mean = decode_real(s.at("oracle_mean"));
      row.box = box_from_json(s.at("box"));
      for (const auto& [a, n] : s.at("component_counts").items()) {
        row.component_counts[parse_count(a)] = n.get<std::size_t>();
      }
      for (const json& r : s.at("replicates")) row.replicates.push_back(decode_real(r));
      report.subsets.push_back(std::move(row));
    }
    return report;
  });
}

std::vector<VerificationRow> verification_rows(const VerificationReport& report) {
  std::vector<VerificationRow> rows;
  for (std::size_t i = 0; i < report.subsets.size(); ++i) {
    const SubsetVerification& s = report.subsets[i];
    if (!s.feasible) {
      rows.push_back({i + 1, 0, std::numeric_limits<double>::quiet_NaN(), false});
      continue;
    }
    for (std::size_t r = 0; r < s.replicates.size(); ++r) rows.push_back({i + 1, r + 1, s.replicates[r], true});
  }
  return rows;
}

std::string write_verification_csv(const std::vector<VerificationRow>& rows) {
  std::string out = "rank,replicate,sep,feasible\n";
  for (const VerificationRow& r : rows) {
    out += std::to_string(r.rank) + "," + (r.feasible ? std::to_string(r.replicate) : std::string()) + "," +
           (r.feasible ? format_real(r.sep) : std::string()) + "," + (r.feasible ? "1" : "0") + "\n";
  }
  return out;
}

std::vector<VerificationRow> read_verification_csv(std::string_view text) {
  std::vector<VerificationRow> rows;
  for (const auto& f : csv_body(text, "rank,replicate,sep,feasible")) {
    if (f.size() != 4) throw DataError("verification rows need 4 fields");
    VerificationRow r;
    r.rank = parse_count(f[0]);
    r.feasible = f[3] == "1";
    if (r.feasible) {
      r.replicate = parse_count(f[1]);
      r.sep = parse_real(f[2]);
    } else {
      r.sep = std::numeric_limits<double>::quiet_NaN();
    }
    rows.push_back(r);
  }
  return rows;
}

std::string write_external_json(const ExternalReport& report, const std::vector<std::string>& names) {
  json repeats = json::array();
  for (const ExternalRepeat& r : report.repeats) {
    repeats.push_back({{"n_training", r.n_training},
                       {"n_validation", r.n_validation},
                       {"indices", r.subset.genes()},
                       {"variables", names_of(r.subset, names)},
                       {"components", r.components},
                       {"rmsep_training", encode_real(r.rmsep_training)},
                       {"rmsep_validation", encode_real(r.rmsep_validation)},
                       {"rmsep_total", encode_real(r.rmsep_total)}});
  }
  const ExternalOptions& o = report.options;
  const json doc{{"options",
                  {{"training_ratio", o.training_ratio},
                   {"repeats", o.repeats},
                   {"seed", o.seed},
                   {"verify_replications", o.verify_replications}}},
                 {"repeats", repeats},
                 {"rmsep_training", median_mad_json(report.rmsep_training)},
                 {"rmsep_validation", median_mad_json(report.rmsep_validation)},
                 {"rmsep_total", median_mad_json(report.rmsep_total)}};
  return doc.dump(2) + "\n";
}

ExternalReport read_external_json(std::string_view text) {
  const json doc = parse_json(text);
  return guarded([&] {
    ExternalReport report;
    const json& o = doc.at("options");
    report.options.training_ratio = o.at("training_ratio").get<double>();
    report.options.repeats = o.at("repeats").get<std::size_t>();
    report.options.seed = o.at("seed").get<std::uint64_t>();
    report.options.verify_replications = o.at("verify_replications").get<std::size_t>();
    for (const json& r : doc.at("repeats")) {
      ExternalRepeat rep;
      rep.n_training = r.at("n_training").get<std::size_t>();
      rep.n_validation = r.at("n_validation").get<std::size_t>();
      rep.subset = subset_from_json(r.at("indices"));
      rep.components = r.at("components").get<std::size_t>();
      rep.rmsep_training = decode_real(r.at("rmsep_training"));
      rep.rmsep_validation = decode_real(r.at("rmsep_validation"));
      rep.rmsep_total = decode_real(r.at("rmsep_total"));
      report.repeats.push_back(std::move(rep));
    }
    report.rmsep_training = median_mad_from_json(doc.at("rmsep_training"));
    report.rmsep_validation = median_mad_from_json(doc.at("rmsep_validation"));
    report.rmsep_total = median_mad_from_json(doc.at("rmsep_total"));
    return report;
  });
}

std::string format_external_table(const ExternalReport& report, std::string_view label) {
  std::vector<double> n_train, n_val, n_var, n_comp;
  for (const ExternalRepeat& r : report.repeats) {
    n_train.push_back(static_cast<double>(r.n_training));
    n_val.push_back(static_cast<double>(r.n_validation));
    n_var.push_back(static_cast<double>(r.subset.size()));
    n_comp.push_back(static_cast<double>(r.components));
  }
  const auto pm = [](double m, double mad) {
    std::ostringstream s;
    s << std::fixed << std::setprecision(3) << m << " ± " << mad;
    return s.str();
  };
  const auto counts = [](const std::vector<double>& v) {
    std::ostringstream s;
    s << median(v) << " ± " << median_absolute_deviation(v);
    return s.str();
  };
  const std::vector<std::string> header{"Data",      "No. obj. training",   "No. obj. validation",
                                        "No. var.",  "No. comp.",           "RMSEP ext. training",
                                        "RMSEP ext. validation", "RMSEP total"};
  const std::vector<std::string> row{std::string(label),
                                     counts(n_train),
                                     counts(n_val),
                                     counts(n_var),
                                     counts(n_comp),
                                     pm(report.rmsep_training.median, report.rmsep_training.mad),
                                     pm(report.rmsep_validation.median, report.rmsep_validation.mad),
                                     pm(report.rmsep_total.median, report.rmsep_total.mad)};
  std::string out;
  for (std::size_t i = 0; i < header.size(); ++i) out += (i ? " | " : "") + header[i];
  out += "\n";
  for (std::size_t i = 0; i < row.size(); ++i) out += (i ? " | " : "") + row[i];
  out += "\n";
  return out;
}

}  // namespace plsga::cli
