#pragma once

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "plsga/evaluation.hpp"
#include "plsga/fitness.hpp"
#include "plsga/ga.hpp"

namespace plsga::cli {

using nlohmann::json;

/// Doubles as JSON numbers; non-finite values as the strings "inf", "-inf", "nan".
json encode_real(double v);
double decode_real(const json& j);

json to_json(const FitnessValue& v);
FitnessValue fitness_from_json(const json& j);

struct TopSubsetsReport {
  Criterion criterion = Criterion::sep_srcv;
  std::vector<std::string> variable_names;
  std::vector<RankedSubset> subsets;

  friend bool operator==(const TopSubsetsReport& a, const TopSubsetsReport& b);
};

std::string write_top_subsets(const TopSubsetsReport& report);
/// Throws DataError on malformed input.
TopSubsetsReport read_top_subsets(std::string_view text);

struct HistoryRow {
  std::size_t generation = 0;
  double mean_fitness = 0.0;
  double best_fitness = 0.0;

  friend bool operator==(const HistoryRow&, const HistoryRow&) = default;
};

std::vector<HistoryRow> history_rows(const std::vector<GenerationStats>& history);
std::string write_history_csv(const std::vector<HistoryRow>& rows);
std::vector<HistoryRow> read_history_csv(std::string_view text);

std::string write_verification_json(const VerificationReport& report, const std::vector<std::string>& names);
VerificationReport read_verification_json(std::string_view text);

/// One row per subset and replicate; infeasible subsets get a single flagged row.
struct VerificationRow {
  std::size_t rank = 0;
  std::size_t replicate = 0;  // 1-based; 0 on flagged rows
  double sep = 0.0;
  bool feasible = true;

  friend bool operator==(const VerificationRow&, const VerificationRow&) = default;
};

std::vector<VerificationRow> verification_rows(const VerificationReport& report);
std::string write_verification_csv(const std::vector<VerificationRow>& rows);
std::vector<VerificationRow> read_verification_csv(std::string_view text);

std::string write_external_json(const ExternalReport& report, const std::vector<std::string>& names);
ExternalReport read_external_json(std::string_view text);

/// Table of the external validation summary, one data row labelled `label`.
std::string format_external_table(const ExternalReport& report, std::string_view label);

std::string format_real(double v);

}  // namespace plsga::cli
