// SPDX-License-Identifier: Apache-2.0
#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <limits>
#include <sstream>

#include "hfhom/errors.hpp"
#include "hfhom/io.hpp"

using namespace hfhom;
namespace fs = std::filesystem;

namespace
{
std::string slurp(const fs::path &p)
{
  std::ifstream f(p);
  std::stringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

fs::path scratch(const std::string &name)
{
  const auto d = fs::temp_directory_path() / ("hfhom_io_test_" + name);
  fs::remove_all(d);
  return d;
}
}  // namespace

TEST_CASE("number formatting round-trips")
{
  for (double v : {0.1, 1.0 / 3.0, 1e-300, -2.5e17, 0.0})
    CHECK(std::stod(format_number(v)) == v);
  CHECK(format_number(std::numeric_limits<double>::quiet_NaN()) == "nan");
  CHECK(format_number(std::numeric_limits<double>::infinity()) == "inf");
}

TEST_CASE("csv tables")
{
  CsvTable t({"eps", "error", "admissible", "note"});
  t.row().add(0.0625).add(1e-3).add(true).add("a");
  t.row().add(0.03125).add(5e-4).add(false).add("b");
  CHECK(t.rows() == 2);
  CHECK(t.str() == "eps,error,admissible,note\n0.0625,0.001,1,a\n0.03125,5e-04,0,b\n");

  t.row().add(1.0);
  CHECK_THROWS_AS((void)t.str(), Error);
}

TEST_CASE("atomic writes create directories and replace files")
{
  const auto d = scratch("atomic");
  const auto p = d / "nested" / "out.txt";
  write_atomic(p, "first");
  CHECK(slurp(p) == "first");
  write_atomic(p, "second");
  CHECK(slurp(p) == "second");
  for (const auto &e : fs::directory_iterator(p.parent_path()))
    CHECK(e.path().filename() == "out.txt");
  fs::remove_all(d);

  const auto blocker = scratch("blocker");
  write_atomic(blocker, "file");
  CHECK_THROWS_AS(write_atomic(blocker / "child.txt", "x"), Error);
  fs::remove_all(blocker);
}

TEST_CASE("field and profile tables")
{
  WaveField f;
  f.grid = make_torus(0.5, 1.0, 8);
  f.values.assign(static_cast<size_t>(f.grid.M()), cplx(3.0, 4.0));
  const auto t = field_table(f, 4);
  CHECK(t.rows() == static_cast<size_t>(f.grid.M() / 4));
  CHECK(t.str().find(",3,4,5\n") != std::string::npos);

  ProfileSpec ps;
  const auto p = make_profile(ps, 0.5);
  CHECK(profile_table(p).rows() == p.amplitudes.size());
}

TEST_CASE("svg chart")
{
  const std::string s = svg_line_chart({{"err", {1, 2, 4}, {1, 0.5, 0.25}}}, "sweep", true, true);
  CHECK(s.rfind("<svg", 0) == 0);
  CHECK(s.find("</svg>") != std::string::npos);
  CHECK(s.find("err") != std::string::npos);
}
