// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "hfhom/bloch_synthesis.hpp"

namespace hfhom
{

/// Writes content to a sibling temporary file and renames it over path.
/// Throws IoError.
void write_atomic(const std::filesystem::path &path, const std::string &content);

/// Row-major CSV table with a fixed header. Numbers use round-trip precision.
class CsvTable
{
public:
  explicit CsvTable(std::vector<std::string> header);

  /// Starts a new row; cells are appended with add().
  CsvTable &row();
  CsvTable &add(double v);
  CsvTable &add(long v);
  CsvTable &add(int v) { return add(static_cast<long>(v)); }
  CsvTable &add(bool v);
  CsvTable &add(const std::string &v);
  CsvTable &add(const char *v) { return add(std::string(v)); }

  size_t rows() const noexcept { return rows_.size(); }
  /// Throws ValidationError if a row has the wrong width.
  std::string str() const;
  void write(const std::filesystem::path &path) const { write_atomic(path, str()); }

private:
  std::vector<std::string> header_;
  std::vector<std::vector<std::string>> rows_;
};

std::string format_number(double v);

/// x, re, im, abs columns, every stride-th sample.
CsvTable field_table(const WaveField &field, long stride = 1);
/// k, re, im columns of a spectral profile.
CsvTable profile_table(const SpectralProfile &profile);

struct ChartSeries
{
  std::string label;
  std::vector<double> x;
  std::vector<double> y;
};

/// Minimal standalone SVG line chart; log axes take log10 of positive data.
std::string svg_line_chart(const std::vector<ChartSeries> &series, const std::string &title, bool log_x = false,
                           bool log_y = false);

}  // namespace hfhom
