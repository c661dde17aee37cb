// SPDX-License-Identifier: Apache-2.0
#include "config.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>

#include "hfhom/errors.hpp"
#include "hfhom/io.hpp"

namespace hfhom::cli
{

namespace
{

std::string trim(const std::string &s)
{
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos)
    return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

std::string unquote(const std::string &v)
{
  if (v.size() >= 2 && ((v.front() == '"' && v.back() == '"') || (v.front() == '\'' && v.back() == '\'')))
    return v.substr(1, v.size() - 2);
  return v;
}

double to_double(const std::string &key, const std::string &raw)
{
  const std::string v = trim(raw);
  // Allow simple fractions such as 1/16.
  if (const auto slash = v.find('/'); slash != std::string::npos)
    return to_double(key, v.substr(0, slash)) / to_double(key, v.substr(slash + 1));
  double out = 0.0;
  const auto *end = v.data() + v.size();
  const auto res = std::from_chars(v.data(), end, out);
  if (v.empty() || res.ec != std::errc() || res.ptr != end)
    throw Error(Errc::ParseError, "key '" + key + "': '" + v + "' is not a number");
  return out;
}

long to_long(const std::string &key, const std::string &raw)
{
  const std::string v = trim(raw);
  long out = 0;
  const auto *end = v.data() + v.size();
  const auto res = std::from_chars(v.data(), end, out);
  if (v.empty() || res.ec != std::errc() || res.ptr != end)
    throw Error(Errc::ParseError, "key '" + key + "': '" + v + "' is not an integer");
  return out;
}

bool to_bool(const std::string &key, const std::string &raw)
{
  const std::string v = trim(raw);
  if (v == "true" || v == "1")
    return true;
  if (v == "false" || v == "0")
    return false;
  throw Error(Errc::ParseError, "key '" + key + "': '" + v + "' is not a boolean");
}

std::vector<double> to_list(const std::string &key, const std::string &raw)
{
  std::string v = trim(raw);
  if (v.size() < 2 || v.front() != '[' || v.back() != ']')
    throw Error(Errc::ParseError, "key '" + key + "': lists are written [a, b, ...]");
  v = v.substr(1, v.size() - 2);
  std::vector<double> out;
  std::stringstream ss(v);
  std::string item;
  while (std::getline(ss, item, ','))
  {
    if (trim(item).empty())
      continue;
    out.push_back(to_double(key, item));
  }
  return out;
}

using Setter = std::function<void(RunConfig &, const std::string &, const std::string &)>;

template <class T>
Setter num(T RunConfig::*field)
{
  return [field](RunConfig &c, const std::string &k, const std::string &v) {
    if constexpr (std::is_same_v<T, double>)
      c.*field = to_double(k, v);
    else
      c.*field = static_cast<T>(to_long(k, v));
  };
}

Setter str(std::string RunConfig::*field)
{
  return [field](RunConfig &c, const std::string &, const std::string &v) { c.*field = unquote(trim(v)); };
}

Setter flag(bool RunConfig::*field)
{
  return [field](RunConfig &c, const std::string &k, const std::string &v) { c.*field = to_bool(k, v); };
}

Setter list(std::vector<double> RunConfig::*field)
{
  return [field](RunConfig &c, const std::string &k, const std::string &v) { c.*field = to_list(k, v); };
}

const std::map<std::string, Setter> &setters()
{
  static const std::map<std::string, Setter> table = {
      {"coeffs", str(&RunConfig::coeffs)},
      {"s", num(&RunConfig::s)},
      {"condition", str(&RunConfig::condition)},
      {"N", num(&RunConfig::N)},
      {"kgrid", num(&RunConfig::kgrid)},
      {"refine", num(&RunConfig::refine)},
      {"bands", num(&RunConfig::bands)},
      {"N_synth", num(&RunConfig::N_synth)},
      {"P", num(&RunConfig::P)},
      {"out", str(&RunConfig::out)},
      {"seed",
       [](RunConfig &c, const std::string &k, const std::string &v) {
         const long s = to_long(k, v);
         if (s < 0)
           throw Error(Errc::ValidationError, "seed must be nonnegative");
         c.seed = static_cast<std::uint64_t>(s);
       }},
      {"allow_degenerate", flag(&RunConfig::allow_degenerate)},
      {"equation", str(&RunConfig::equation)},
      {"profile", str(&RunConfig::profile)},
      {"K", num(&RunConfig::K)},
      {"q", num(&RunConfig::q)},
      {"delta", num(&RunConfig::delta)},
      {"center", num(&RunConfig::center)},
      {"width", num(&RunConfig::width)},
      {"g_profile", str(&RunConfig::g_profile)},
      {"g_K", num(&RunConfig::g_K)},
      {"g_q", num(&RunConfig::g_q)},
      {"zero_f", flag(&RunConfig::zero_f)},
      {"t", num(&RunConfig::t)},
      {"eps", list(&RunConfig::eps)},
      {"times", list(&RunConfig::times)},
      {"sweep", str(&RunConfig::sweep)},
      {"theory_slope", num(&RunConfig::theory_slope)},
      {"slope_tol", num(&RunConfig::slope_tol)},
      {"max_exponent", num(&RunConfig::max_exponent)},
      {"null_floor", num(&RunConfig::null_floor)},
      {"lemma_case", str(&RunConfig::lemma_case)},
      {"lemma_q", list(&RunConfig::lemma_q)},
      {"lemma1_variant", str(&RunConfig::lemma1_variant)},
      {"trials", num(&RunConfig::trials)},
      {"q_prime", num(&RunConfig::q_prime)},
      {"rel_width", num(&RunConfig::rel_width)},
      {"field_stride", num(&RunConfig::field_stride)},
  };
  return table;
}

std::string list_str(const std::vector<double> &v)
{
  std::string s = "[";
  for (size_t i = 0; i < v.size(); ++i)
    s += (i ? ", " : "") + format_number(v[i]);
  return s + "]";
}

}  // namespace

void apply_setting(RunConfig &cfg, const std::string &key, const std::string &value)
{
  const auto it = setters().find(trim(key));
  if (it == setters().end())
    throw Error(Errc::ParseError, "unknown key '" + trim(key) + "'");
  it->second(cfg, trim(key), value);
  if (trim(key) == "condition")
    std::transform(cfg.condition.begin(), cfg.condition.end(), cfg.condition.begin(),
                   [](unsigned char ch) { return std::tolower(ch); });
}

RunConfig parse_config(const std::string &text, RunConfig base)
{
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  while (std::getline(in, line))
  {
    ++lineno;
    if (const auto hash = line.find('#'); hash != std::string::npos)
      line = line.substr(0, hash);
    line = trim(line);
    if (line.empty() || (line.front() == '[' && line.back() == ']' && line.find('=') == std::string::npos))
      continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw Error(Errc::ParseError, "line " + std::to_string(lineno) + ": expected key = value");
    try
    {
      apply_setting(base, line.substr(0, eq), line.substr(eq + 1));
    }
    catch (const Error &e)
    {
      std::string msg = e.what();
      if (const auto pos = msg.find(": "); pos != std::string::npos)
        msg = msg.substr(pos + 2);
      throw Error(e.code(), "line " + std::to_string(lineno) + ": " + msg);
    }
  }
  validate(base);
  return base;
}

RunConfig load_config(const std::string &path, RunConfig base)
{
  std::ifstream f(path);
  if (!f)
    throw Error(Errc::IoError, "cannot read config '" + path + "'");
  std::stringstream ss;
  ss << f.rdbuf();
  return parse_config(ss.str(), std::move(base));
}

std::string serialize(const RunConfig &c)
{
  std::ostringstream os;
  auto q = [](const std::string &s) { return "\"" + s + "\""; };
  auto b = [](bool v) { return v ? "true" : "false"; };
  auto d = [](double v) { return format_number(v); };
  os << "coeffs = " << q(c.coeffs) << "\n"
     << "s = " << c.s << "\n"
     << "condition = " << q(c.condition) << "\n"
     << "N = " << c.N << "\n"
     << "kgrid = " << c.kgrid << "\n"
     << "refine = " << c.refine << "\n"
     << "bands = " << c.bands << "\n"
     << "N_synth = " << c.N_synth << "\n"
     << "P = " << c.P << "\n"
     << "out = " << q(c.out) << "\n"
     << "seed = " << c.seed << "\n"
     << "allow_degenerate = " << b(c.allow_degenerate) << "\n"
     << "equation = " << q(c.equation) << "\n"
     << "profile = " << q(c.profile) << "\n"
     << "K = " << d(c.K) << "\n"
     << "q = " << d(c.q) << "\n"
     << "delta = " << d(c.delta) << "\n"
     << "center = " << d(c.center) << "\n"
     << "width = " << d(c.width) << "\n"
     << "g_profile = " << q(c.g_profile) << "\n"
     << "g_K = " << d(c.g_K) << "\n"
     << "g_q = " << d(c.g_q) << "\n"
     << "zero_f = " << b(c.zero_f) << "\n"
     << "t = " << d(c.t) << "\n"
     << "eps = " << list_str(c.eps) << "\n"
     << "times = " << list_str(c.times) << "\n"
     << "sweep = " << q(c.sweep) << "\n"
     << "theory_slope = " << d(c.theory_slope) << "\n"
     << "slope_tol = " << d(c.slope_tol) << "\n"
     << "max_exponent = " << d(c.max_exponent) << "\n"
     << "null_floor = " << d(c.null_floor) << "\n"
     << "lemma_case = " << q(c.lemma_case) << "\n"
     << "lemma_q = " << list_str(c.lemma_q) << "\n"
     << "lemma1_variant = " << q(c.lemma1_variant) << "\n"
     << "trials = " << c.trials << "\n"
     << "q_prime = " << d(c.q_prime) << "\n"
     << "rel_width = " << d(c.rel_width) << "\n"
     << "field_stride = " << c.field_stride << "\n";
  return os.str();
}

void validate(const RunConfig &c)
{
  std::vector<std::string> problems;
  auto fail = [&](const std::string &m) { problems.push_back(m); };
  if (c.s < 1)
    fail("s must be >= 1");
  if (c.N < 1 || c.N_synth < 1)
    fail("Fourier cutoffs must be positive");
  if (c.kgrid < 9 || c.kgrid % 2 == 0)
    fail("kgrid must be odd and >= 9");
  if (c.refine < 1)
    fail("refine must be >= 1");
  if (c.bands < 1)
    fail("bands must be >= 1");
  if (c.P != 0 && (c.P < 8 || (c.P & (c.P - 1)) != 0))
    fail("P must be 0 or a power of two >= 8");
  if (c.condition != "auto" && c.condition != "cond1" && c.condition != "cond2" && c.condition != "cond3" &&
      c.condition != "cond4")
    fail("condition must be auto or cond1..cond4");
  if (c.equation != "schrodinger" && c.equation != "wave")
    fail("equation must be schrodinger or wave");
  if (c.profile != "bump" && c.profile != "powerlaw" && c.profile != "point")
    fail("profile must be bump, powerlaw or point");
  if (c.g_profile != "none" && c.g_profile != "zero" && c.g_profile != "bump" && c.g_profile != "powerlaw" &&
      c.g_profile != "point")
    fail("g_profile must be none, zero, bump, powerlaw or point");
  if (c.equation == "wave" && c.g_profile == "none")
    fail("wave runs need g_profile (use zero for g = 0)");
  if (c.zero_f && c.equation != "wave")
    fail("zero_f applies to wave runs only");
  if (c.zero_f && c.g_profile == "zero")
    fail("f and g cannot both be zero");
  if (!(c.K > 0) || !(c.g_K > 0) || !(c.width > 0) || !(c.rel_width > 0))
    fail("profile radii and widths must be positive");
  if (c.eps.empty())
    fail("eps list is empty");
  for (size_t i = 0; i < c.eps.size(); ++i)
  {
    if (!(c.eps[i] > 0))
      fail("eps values must be positive");
    if (i > 0 && !(c.eps[i] < c.eps[i - 1]))
    {
      fail("eps list must be strictly decreasing");
      break;
    }
  }
  if (c.times.empty())
    fail("times list is empty");
  for (size_t i = 0; i < c.times.size(); ++i)
  {
    if (!(c.times[i] > 0))
      fail("times must be positive");
    if (i > 0 && !(c.times[i] > c.times[i - 1]))
    {
      fail("times must be strictly increasing");
      break;
    }
  }
  if (c.sweep != "eps" && c.sweep != "time")
    fail("sweep must be eps or time");
  if (c.lemma1_variant != "plain" && c.lemma1_variant != "inverse_k")
    fail("lemma1_variant must be plain or inverse_k");
  if (c.trials < 10)
    fail("trials must be >= 10");
  if (c.field_stride < 1)
    fail("field_stride must be >= 1");
  if (c.out.empty())
    fail("out must name a directory");
  if (problems.empty())
    return;
  std::string msg;
  for (const auto &p : problems)
    msg += (msg.empty() ? "" : "; ") + p;
  throw Error(Errc::ValidationError, msg);
}

bool operator==(const RunConfig &a, const RunConfig &b) { return serialize(a) == serialize(b); }

}  // namespace hfhom::cli
