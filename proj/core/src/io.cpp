// SPDX-License-Identifier: Apache-2.0
#include "hfhom/io.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>
#include <system_error>

#include "hfhom/errors.hpp"

namespace hfhom
{

void write_atomic(const std::filesystem::path &path, const std::string &content)
{
  namespace fs = std::filesystem;
  std::error_code ec;
  if (path.has_parent_path())
  {
    fs::create_directories(path.parent_path(), ec);
    if (ec)
      throw Error(Errc::IoError, "cannot create " + path.parent_path().string() + ": " + ec.message());
  }
  fs::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out)
      throw Error(Errc::IoError, "cannot open " + tmp.string());
    out << content;
    out.flush();
    if (!out)
      throw Error(Errc::IoError, "write failed for " + tmp.string());
  }
  fs::rename(tmp, path, ec);
  if (ec)
  {
    fs::remove(tmp, ec);
    throw Error(Errc::IoError, "cannot rename into " + path.string());
  }
}

std::string format_number(double v)
{
  if (std::isnan(v))
    return "nan";
  if (std::isinf(v))
    return v > 0 ? "inf" : "-inf";
  char buf[32];
  auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

CsvTable::CsvTable(std::vector<std::string> header) : header_(std::move(header)) {}

CsvTable &CsvTable::row()
{
  rows_.emplace_back();
  return *this;
}

CsvTable &CsvTable::add(double v)
{
  if (rows_.empty())
    row();
  rows_.back().push_back(format_number(v));
  return *this;
}

CsvTable &CsvTable::add(long v)
{
  if (rows_.empty())
    row();
  rows_.back().push_back(std::to_string(v));
  return *this;
}

CsvTable &CsvTable::add(bool v)
{
  if (rows_.empty())
    row();
  rows_.back().push_back(v ? "1" : "0");
  return *this;
}

CsvTable &CsvTable::add(const std::string &v)
{
  if (rows_.empty())
    row();
  if (v.find_first_of(",\"\n") == std::string::npos)
  {
    rows_.back().push_back(v);
    return *this;
  }
  std::string q = "\"";
  for (char c : v)
  {
    if (c == '"')
      q += '"';
    q += c;
  }
  rows_.back().push_back(q + "\"");
  return *this;
}

std::string CsvTable::str() const
{
  std::ostringstream os;
  auto line = [&os](const std::vector<std::string> &cells) {
    for (size_t i = 0; i < cells.size(); ++i)
      os << (i ? "," : "") << cells[i];
    os << '\n';
  };
  line(header_);
  for (const auto &r : rows_)
  {
    if (r.size() != header_.size())
      throw Error(Errc::ValidationError, "CSV row width differs from the header");
    line(r);
  }
  return os.str();
}

CsvTable field_table(const WaveField &field, long stride)
{
  if (stride < 1)
    throw Error(Errc::InvalidArgument, "stride must be positive");
  CsvTable t({"x", "re", "im", "abs"});
  for (long j = 0; j < static_cast<long>(field.values.size()); j += stride)
  {
    const cplx v = field.values[static_cast<size_t>(j)];
    t.row().add(field.grid.x(j)).add(v.real()).add(v.imag()).add(std::abs(v));
  }
  return t;
}

CsvTable profile_table(const SpectralProfile &profile)
{
  CsvTable t({"k", "re", "im"});
  for (int m = -profile.m_max; m <= profile.m_max; ++m)
  {
    const cplx a = profile.amp(m);
    t.row().add(profile.k(m)).add(a.real()).add(a.imag());
  }
  return t;
}

std::string svg_line_chart(const std::vector<ChartSeries> &series, const std::string &title, bool log_x, bool log_y)
{
  const double W = 640, H = 420, ml = 60, mr = 20, mt = 40, mb = 50;
  auto tx = [log_x](double v) { return log_x ? std::log10(v) : v; };
  auto ty = [log_y](double v) { return log_y ? std::log10(v) : v; };
  auto ok = [&](double x, double y) {
    return std::isfinite(x) && std::isfinite(y) && (!log_x || x > 0) && (!log_y || y > 0);
  };
  double x0 = std::numeric_limits<double>::infinity(), x1 = -x0, y0 = x0, y1 = -x0;
  for (const auto &s : series)
    for (size_t i = 0; i < std::min(s.x.size(), s.y.size()); ++i)
      if (ok(s.x[i], s.y[i]))
      {
        x0 = std::min(x0, tx(s.x[i]));
        x1 = std::max(x1, tx(s.x[i]));
        y0 = std::min(y0, ty(s.y[i]));
        y1 = std::max(y1, ty(s.y[i]));
      }
  if (!(x1 >= x0))
  {
    x0 = 0;
    x1 = 1;
    y0 = 0;
    y1 = 1;
  }
  if (x1 == x0)
    x1 = x0 + 1;
  if (y1 == y0)
    y1 = y0 + 1;
  auto px = [&](double v) { return ml + (tx(v) - x0) / (x1 - x0) * (W - ml - mr); };
  auto py = [&](double v) { return H - mb - (ty(v) - y0) / (y1 - y0) * (H - mt - mb); };

  static const char *colors[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#17becf"};
  std::ostringstream os;
  os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << W << "\" height=\"" << H << "\">\n";
  os << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  os << "<text x=\"" << W / 2 << "\" y=\"24\" text-anchor=\"middle\" font-size=\"15\">" << title << "</text>\n";
  os << "<rect x=\"" << ml << "\" y=\"" << mt << "\" width=\"" << W - ml - mr << "\" height=\"" << H - mt - mb
     << "\" fill=\"none\" stroke=\"black\"/>\n";
  auto label = [](double v, bool lg) { return format_number(lg ? std::pow(10.0, v) : v); };
  os << "<text x=\"" << ml << "\" y=\"" << H - mb + 18 << "\" font-size=\"11\">" << label(x0, log_x) << "</text>\n";
  os << "<text x=\"" << W - mr << "\" y=\"" << H - mb + 18 << "\" font-size=\"11\" text-anchor=\"end\">"
     << label(x1, log_x) << "</text>\n";
  os << "<text x=\"" << ml - 4 << "\" y=\"" << H - mb << "\" font-size=\"11\" text-anchor=\"end\">" << label(y0, log_y)
     << "</text>\n";
  os << "<text x=\"" << ml - 4 << "\" y=\"" << mt + 10 << "\" font-size=\"11\" text-anchor=\"end\">"
     << label(y1, log_y) << "</text>\n";
  for (size_t si = 0; si < series.size(); ++si)
  {
    const auto &s = series[si];
    const char *c = colors[si % 6];
    os << "<polyline fill=\"none\" stroke=\"" << c << "\" stroke-width=\"1.5\" points=\"";
    for (size_t i = 0; i < std::min(s.x.size(), s.y.size()); ++i)
      if (ok(s.x[i], s.y[i]))
        os << px(s.x[i]) << ',' << py(s.y[i]) << ' ';
    os << "\"/>\n";
    os << "<text x=\"" << W - mr - 6 << "\" y=\"" << mt + 16 + 14 * static_cast<double>(si)
       << "\" font-size=\"12\" text-anchor=\"end\" fill=\"" << c << "\">" << s.label << "</text>\n";
  }
  os << "</svg>\n";
  return os.str();
}

}  // namespace hfhom
