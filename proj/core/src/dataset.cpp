#include "plsga/dataset.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <numeric>
#include <unordered_set>

#include "plsga/error.hpp"

namespace plsga {

namespace {

std::vector<std::string> default_names(std::string_view prefix, Index count) {
  std::vector<std::string> names;
  names.reserve(count);
  for (Index i = 0; i < count; ++i) {
    names.push_back(std::string(prefix) + std::to_string(i + 1));
  }
  return names;
}

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t");
  if (first == std::string_view::npos) {
    return {};
  }
  const auto last = s.find_last_not_of(" \t");
  return s.substr(first, last - first + 1);
}

// Splits one CSV record. Double quotes delimit fields containing commas; a
// doubled quote inside a quoted field is a literal quote.
std::vector<std::string> split_record(std::string_view line) {
  std::vector<std::string> fields;
  std::string current;
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    const char c = line[i];
    if (quoted) {
      if (c == '"') {
        if (i + 1 < line.size() && line[i + 1] == '"') {
          current.push_back('"');
          ++i;
        } else {
          quoted = false;
        }
      } else {
        current.push_back(c);
      }
    } else if (c == '"') {
      quoted = true;
    } else if (c == ',') {
      fields.emplace_back(trim(current));
      current.clear();
    } else {
      current.push_back(c);
    }
  }
  fields.emplace_back(trim(current));
  return fields;
}

}  // namespace

Dataset::Dataset(Eigen::MatrixXd x, Eigen::VectorXd y, std::vector<std::string> variable_names,
                 std::vector<std::string> observation_ids)
    : x_(std::move(x)),
      y_(std::move(y)),
      variable_names_(std::move(variable_names)),
      observation_ids_(std::move(observation_ids)) {
  const auto n = static_cast<Index>(x_.rows());
  if (n < kMinObservations) {
    throw TooFewObservationsError("dataset has " + std::to_string(n) + " observations; at least " +
                                  std::to_string(kMinObservations) + " are required");
  }
  if (x_.cols() < 1) {
    throw DataError("dataset has no predictor columns");
  }
  if (static_cast<Index>(y_.size()) != n) {
    throw ShapeError("response length does not match the number of rows");
  }
  if (variable_names_.size() != static_cast<Index>(x_.cols())) {
    throw ShapeError("number of variable names does not match the number of columns");
  }
  if (observation_ids_.size() != n) {
    throw ShapeError("number of observation ids does not match the number of rows");
  }
  if (!x_.allFinite() || !y_.allFinite()) {
    throw DataError("dataset contains non-finite values");
  }
  std::unordered_set<std::string> seen;
  for (const auto& name : variable_names_) {
    if (!seen.insert(name).second) {
      throw DataError("duplicate variable name '" + name + "'");
    }
  }
}

Dataset::Dataset(Eigen::MatrixXd x, Eigen::VectorXd y)
    : Dataset(x, y, default_names("V", static_cast<Index>(x.cols())), default_names("", static_cast<Index>(x.rows()))) {}

Dataset Dataset::select_rows(std::span<const Index> rows) const {
  std::vector<std::string> ids;
  ids.reserve(rows.size());
  for (Index r : rows) {
    ids.push_back(observation_ids_.at(r));
  }
  return Dataset(gather_rows(x_, rows), gather(y_, rows), variable_names_, std::move(ids));
}

Dataset load_csv(const std::filesystem::path& path, std::string_view response_column,
                 std::optional<std::string> id_column) {
  std::ifstream in(path);
  if (!in) {
    throw DataError("cannot open '" + path.string() + "'");
  }

  std::string line;
  if (!std::getline(in, line)) {
    throw DataError("'" + path.string() + "' is empty");
  }
  if (!line.empty() && line.back() == '\r') {
    line.pop_back();
  }
  // UTF-8 byte order mark
  if (line.starts_with("\xEF\xBB\xBF")) {
    line.erase(0, 3);
  }
  const std::vector<std::string> header = split_record(line);

  const auto find_column = [&](std::string_view name) {
    const auto it = std::find(header.begin(), header.end(), name);
    if (it == header.end()) {
      throw ColumnNotFoundError(std::string(name));
    }
    return static_cast<Index>(it - header.begin());
  };
  const Index response_idx = find_column(response_column);
  std::optional<Index> id_idx;
  if (id_column) {
    id_idx = find_column(*id_column);
  }

  std::vector<Index> predictor_cols;
  std::vector<std::string> names;
  for (Index c = 0; c < header.size(); ++c) {
    if (c != response_idx && c != id_idx) {
      predictor_cols.push_back(c);
      names.push_back(header[c]);
    }
  }

  std::vector<double> values;
  std::vector<double> response;
  std::vector<std::string> ids;
  std::size_t file_row = 1;
  while (std::getline(in, line)) {
    ++file_row;
    if (!line.empty() && line.back() == '\r') {
      line.pop_back();
    }
    if (trim(line).empty()) {
      continue;
    }
    const std::vector<std::string> fields = split_record(line);
    if (fields.size() != header.size()) {
      throw ParseError(file_row, std::min(fields.size(), header.size()) + 1,
                       "expected " + std::to_string(header.size()) + " fields, found " +
                           std::to_string(fields.size()));
    }
    const auto parse_cell = [&](Index c) {
      const std::string& cell = fields[c];
      double value = 0.0;
      const char* end = cell.data() + cell.size();
      const auto [ptr, ec] = std::from_chars(cell.data(), end, value);
      if (cell.empty() || ec != std::errc() || ptr != end || !std::isfinite(value)) {
        throw ParseError(file_row, c + 1, "'" + cell + "' is not a finite number");
      }
      return value;
    };
    for (Index c : predictor_cols) {
      values.push_back(parse_cell(c));
    }
    response.push_back(parse_cell(response_idx));
    ids.push_back(id_idx ? fields[*id_idx] : std::to_string(response.size()));
  }

  const auto n = static_cast<Eigen::Index>(response.size());
  const auto p = static_cast<Eigen::Index>(predictor_cols.size());
  if (static_cast<Index>(n) < Dataset::kMinObservations) {
    throw TooFewObservationsError("'" + path.string() + "' has " + std::to_string(n) +
                                  " observations; at least " + std::to_string(Dataset::kMinObservations) +
                                  " are required");
  }
  Eigen::MatrixXd x = Eigen::Map<const Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>>(
      values.data(), n, p);
  Eigen::VectorXd y = Eigen::Map<const Eigen::VectorXd>(response.data(), n);
  return Dataset(std::move(x), std::move(y), std::move(names), std::move(ids));
}

IndexList CvSegmentation::complement(Index k) const {
  IndexList rest;
  rest.reserve(n_total - segments.at(k).size());
  for (Index j = 0; j < segments.size(); ++j) {
    if (j != k) {
      rest.insert(rest.end(), segments[j].begin(), segments[j].end());
    }
  }
  return rest;
}

CvSegmentation make_segments(Index n, Index k, RandomStream& rng) {
  if (k < 2 || k > n) {
    throw SegmentationError("cannot split " + std::to_string(n) + " observations into " + std::to_string(k) +
                            " segments");
  }
  IndexList order(n);
  std::iota(order.begin(), order.end(), Index{0});
  shuffle(std::span<Index>(order), rng);

  CvSegmentation seg;
  seg.n_total = n;
  seg.segments.resize(k);
  const Index base = n / k;
  const Index larger = n % k;
  auto it = order.begin();
  for (Index s = 0; s < k; ++s) {
    const Index len = base + (s < larger ? 1 : 0);
    seg.segments[s].assign(it, it + static_cast<std::ptrdiff_t>(len));
    it += static_cast<std::ptrdiff_t>(len);
  }
  return seg;
}

Index calibration_size(Index n, double ratio) {
  return static_cast<Index>(std::floor(ratio * static_cast<double>(n) + 0.5));
}

Split split_random(Index n, double ratio, RandomStream& rng) {
  if (!(ratio > 0.0 && ratio < 1.0)) {
    throw SplitError("calibration ratio must lie strictly between 0 and 1");
  }
  const Index n_cal = calibration_size(n, ratio);
  if (n_cal < 2 || n_cal + 2 > n) {
    throw SplitError("a " + std::to_string(ratio) + " split of " + std::to_string(n) +
                     " observations leaves fewer than 2 rows on one side");
  }
  IndexList order(n);
  std::iota(order.begin(), order.end(), Index{0});
  shuffle(std::span<Index>(order), rng);

  Split split;
  split.ratio = ratio;
  split.calibration.assign(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(n_cal));
  split.test.assign(order.begin() + static_cast<std::ptrdiff_t>(n_cal), order.end());
  return split;
}

Eigen::MatrixXd gather(const Eigen::MatrixXd& m, std::span<const Index> rows, std::span<const Index> cols) {
  Eigen::MatrixXd out(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(cols.size()));
  for (Eigen::Index j = 0; j < out.cols(); ++j) {
    const auto src = static_cast<Eigen::Index>(cols[static_cast<Index>(j)]);
    for (Eigen::Index i = 0; i < out.rows(); ++i) {
      out(i, j) = m(static_cast<Eigen::Index>(rows[static_cast<Index>(i)]), src);
    }
  }
  return out;
}

Eigen::MatrixXd gather_rows(const Eigen::MatrixXd& m, std::span<const Index> rows) {
  Eigen::MatrixXd out(static_cast<Eigen::Index>(rows.size()), m.cols());
  for (Eigen::Index j = 0; j < m.cols(); ++j) {
    for (Eigen::Index i = 0; i < out.rows(); ++i) {
      out(i, j) = m(static_cast<Eigen::Index>(rows[static_cast<Index>(i)]), j);
    }
  }
  return out;
}

Eigen::VectorXd gather(const Eigen::VectorXd& v, std::span<const Index> rows) {
  Eigen::VectorXd out(static_cast<Eigen::Index>(rows.size()));
  for (Eigen::Index i = 0; i < out.size(); ++i) {
    out(i) = v(static_cast<Eigen::Index>(rows[static_cast<Index>(i)]));
  }
  return out;
}

namespace {

std::string csv_field(std::string_view s) {
  if (s.find_first_of(",\"\n\r") == std::string_view::npos) return std::string(s);
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

void append_real(std::string& line, double v) {
  char buf[32];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
  line.append(buf, ptr);
}

}  // namespace

void save_csv(const Dataset& data, const std::filesystem::path& path, std::string_view response_column) {
  std::ofstream out(path, std::ios::binary);
  if (!out) {
    throw DataError("cannot write '" + path.string() + "'");
  }
  std::string line = "id";
  for (const std::string& name : data.variable_names()) line += "," + csv_field(name);
  line += "," + csv_field(response_column) + "\n";
  out << line;
  for (Index i = 0; i < data.n_observations(); ++i) {
    const auto r = static_cast<Eigen::Index>(i);
    line = csv_field(data.observation_ids()[i]);
    for (Eigen::Index j = 0; j < data.x().cols(); ++j) {
      line += ',';
      append_real(line, data.x()(r, j));
    }
    line += ',';
    append_real(line, data.y()(r));
    line += '\n';
    out << line;
  }
}

}  // namespace plsga
