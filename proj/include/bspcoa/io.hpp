#pragma once

// Delimited-text tables in and out. Lines starting with '#' are comments; the
// writers put the run configuration there so every file carries its own
// provenance while still parsing as a plain table.

#include "bspcoa/errors.hpp"
#include "bspcoa/ordination.hpp"

#include <Eigen/Dense>
#include <nlohmann/json.hpp>

#include <charconv>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace bspcoa {

struct TableReadOptions {
  char delimiter = 0;          ///< 0 = auto (tab if the header has one, else comma)
  bool require_nonnegative = true;
};

struct PrevalenceFilterResult {
  FeatureMatrix table;
  std::vector<std::string> dropped;
};

namespace detail {

inline std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\r' || s.front() == '"')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\r' || s.back() == '"')) s.remove_suffix(1);
  return s;
}

inline std::vector<std::string_view> split_line(std::string_view line, char delim) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  for (;;) {
    const std::size_t pos = line.find(delim, start);
    out.push_back(trim(line.substr(start, pos == std::string_view::npos ? pos : pos - start)));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return out;
}

inline bool skippable(std::string_view line) {
  const std::string_view t = trim(line);
  return t.empty() || t.front() == '#';
}

} // namespace detail

inline char detect_delimiter(std::string_view header) {
  return header.find('\t') != std::string_view::npos ? '\t' : ',';
}

/// Raw delimited text: header fields plus data rows, comment and blank lines
/// skipped, every row checked to match the header width.
struct TextTable {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;
  std::vector<std::size_t> line_numbers; ///< 1-based source line of each row
  std::size_t header_line = 0;
  char delimiter = ',';
};

inline TextTable read_text_table(const std::filesystem::path &path, char delimiter = 0) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open input file '" + path.string() + "'");
  const std::string where = path.string();
  TextTable t;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (detail::skippable(line)) continue;
    if (t.header.empty()) {
      t.delimiter = delimiter ? delimiter : detect_delimiter(line);
      for (auto f : detail::split_line(line, t.delimiter)) t.header.emplace_back(f);
      t.header_line = lineno;
      continue;
    }
    const auto fields = detail::split_line(line, t.delimiter);
    if (fields.size() != t.header.size())
      throw DataError(where + ":" + std::to_string(lineno) + ": expected " + std::to_string(t.header.size()) +
                      " fields, found " + std::to_string(fields.size()));
    t.rows.emplace_back(fields.begin(), fields.end());
    t.line_numbers.push_back(lineno);
  }
  if (t.header.empty()) throw DataError(where + ": no header row");
  return t;
}

inline double parse_number(std::string_view f, const std::string &location) {
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(f.data(), f.data() + f.size(), v);
  if (f.empty() || ec != std::errc() || ptr != f.data() + f.size() || !std::isfinite(v))
    throw DataError(location + ": '" + std::string(f) + "' is not a finite number");
  return v;
}

/// Sample-by-feature table: first row = feature labels (leading corner cell
/// ignored), first column = sample IDs.
inline FeatureMatrix read_table(const std::filesystem::path &path, const TableReadOptions &opt = {}) {
  const TextTable raw = read_text_table(path, opt.delimiter);
  const std::string where = path.string();
  const std::string head_loc = where + ":" + std::to_string(raw.header_line);
  if (raw.header.size() < 2) throw DataError(head_loc + ": header has no feature columns");

  FeatureMatrix t;
  std::unordered_map<std::string, std::size_t> seen_cols;
  for (std::size_t c = 1; c < raw.header.size(); ++c) {
    const std::string &label = raw.header[c];
    if (label.empty()) throw DataError(head_loc + ": empty label in column " + std::to_string(c + 1));
    if (!seen_cols.emplace(label, c).second)
      throw DataError(head_loc + ": duplicate column label '" + label + "' in column " + std::to_string(c + 1));
    t.col_ids.push_back(label);
  }
  if (raw.rows.empty()) throw DataError(where + ": no data rows");

  const auto n = static_cast<Index>(raw.rows.size());
  const auto p = static_cast<Index>(t.col_ids.size());
  t.values.resize(n, p);
  std::unordered_map<std::string, std::size_t> seen_rows;
  for (Index i = 0; i < n; ++i) {
    const auto &fields = raw.rows[static_cast<std::size_t>(i)];
    const std::size_t lineno = raw.line_numbers[static_cast<std::size_t>(i)];
    const std::string &id = fields[0];
    if (id.empty()) throw DataError(where + ":" + std::to_string(lineno) + ": empty sample ID");
    if (!seen_rows.emplace(id, lineno).second)
      throw DataError(where + ":" + std::to_string(lineno) + ": duplicate sample ID '" + id +
                      "' (first seen on line " + std::to_string(seen_rows[id]) + ")");
    for (Index c = 0; c < p; ++c) {
      const std::string loc = where + ":" + std::to_string(lineno) + ", column " + std::to_string(c + 2) +
                              " (" + t.col_ids[static_cast<std::size_t>(c)] + ")";
      const double v = parse_number(fields[static_cast<std::size_t>(c) + 1], loc);
      if (opt.require_nonnegative && v < 0.0)
        throw DataError(loc + ": negative value " + fields[static_cast<std::size_t>(c) + 1]);
      t.values(i, c) = v;
    }
    t.row_ids.push_back(id);
  }
  return t;
}

inline CountTable ingest_count_table(const std::filesystem::path &path, char delimiter = 0) {
  return read_table(path, TableReadOptions{delimiter, true});
}

/// Drop features present (> 0) in fewer than `threshold` of the samples.
inline PrevalenceFilterResult prevalence_filter(const FeatureMatrix &t, double threshold) {
  if (!(threshold >= 0.0 && threshold <= 1.0)) throw UsageError("prevalence threshold must lie in [0, 1]");
  const double n = static_cast<double>(t.rows());
  std::vector<Index> keep;
  PrevalenceFilterResult out;
  for (Index j = 0; j < t.cols(); ++j) {
    const double present = static_cast<double>((t.values.col(j).array() > 0.0).count());
    if (present / n < threshold) out.dropped.push_back(t.col_ids[static_cast<std::size_t>(j)]);
    else keep.push_back(j);
  }
  if (keep.empty()) throw DataError("prevalence filter removed every feature");
  out.table.row_ids = t.row_ids;
  out.table.values.resize(t.rows(), static_cast<Index>(keep.size()));
  for (std::size_t c = 0; c < keep.size(); ++c) {
    out.table.values.col(static_cast<Index>(c)) = t.values.col(keep[c]);
    out.table.col_ids.push_back(t.col_ids[static_cast<std::size_t>(keep[c])]);
  }
  return out;
}

/// Shortest decimal that parses back to the same double; NaN prints as NA.
inline std::string format_number(double v) {
  if (std::isnan(v)) return "NA";
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

/// Buffers `# config: {...}` followed by the rows; flush with write_file.
class CsvWriter {
public:
  explicit CsvWriter(const nlohmann::ordered_json &config) {
    out_ << "# config: " << config.dump() << '\n';
  }

  CsvWriter &row(const std::vector<std::string> &cells) {
    for (std::size_t i = 0; i < cells.size(); ++i) out_ << (i ? "," : "") << cells[i];
    out_ << '\n';
    return *this;
  }

  std::string str() const { return out_.str(); }

private:
  std::ostringstream out_;
};

inline void write_file(const std::filesystem::path &path, const std::string &content) {
  std::ofstream f(path, std::ios::binary | std::ios::trunc);
  if (!f) throw DataError("cannot write '" + path.string() + "'");
  f << content;
  if (!f) throw DataError("write failed for '" + path.string() + "'");
}

} // namespace bspcoa
