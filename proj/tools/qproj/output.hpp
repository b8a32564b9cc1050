#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "json.hpp"

namespace qproj::cli {

using nlohmann::json;

// Comma-separated table with a header row, numbers in round-trip precision.
class CsvWriter {
 public:
  CsvWriter(const std::filesystem::path& path, const std::vector<std::string>& header);
  void row(const std::vector<double>& values);
  const std::filesystem::path& path() const { return path_; }
  void save() const;

 private:
  std::filesystem::path path_;
  std::size_t columns_;
  std::string buffer_;
};

std::string format_number(double v);

// Writes {"schema": 1, ...} pretty-printed.
void write_json(const std::filesystem::path& path, json body);

// json number, or null for non-finite values.
json number_or_null(double v);

struct Series {
  std::string label;
  std::vector<double> x;
  std::vector<double> y;
};

struct ReferenceLine {
  std::string label;
  double y = 0.0;
};

// Minimal line plot: axes, ticks, polylines and horizontal reference lines.
void write_svg_plot(const std::filesystem::path& path, const std::string& title, const std::string& xlabel,
                    const std::string& ylabel, const std::vector<Series>& series,
                    const std::vector<ReferenceLine>& references = {});

// Two-column (coordinate, density) file; an optional non-numeric header line is skipped.
struct Table2 {
  std::vector<double> x;
  std::vector<double> y;
};

Table2 read_two_column_csv(const std::filesystem::path& path);

}  // namespace qproj::cli
