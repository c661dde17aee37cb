// SPDX-License-Identifier: Apache-2.0
#include <doctest.h>

#include <string>

#include "config.hpp"
#include "hfhom/errors.hpp"

using namespace hfhom;
using namespace hfhom::cli;

namespace
{
Errc code_of(const std::string &text)
{
  try
  {
    parse_config(text);
  }
  catch (const Error &e)
  {
    return e.code();
  }
  return Errc::IoError;
}

std::string message_of(const std::string &text)
{
  try
  {
    parse_config(text);
  }
  catch (const Error &e)
  {
    return e.what();
  }
  return {};
}
}  // namespace

TEST_CASE("defaults")
{
  const RunConfig c = parse_config("coeffs = cosine\ns = 1\ncondition = cond1\neps = [1/32]\nt = 1\n");
  CHECK(c.N == 64);
  CHECK(c.kgrid == 257);
  CHECK(c.eps.size() == 1);
  CHECK(c.eps[0] == 1.0 / 32);
  CHECK(c.condition == "cond1");
}

TEST_CASE("serialize and parse round trip")
{
  RunConfig c;
  c.coeffs = "weighted";
  c.equation = "wave";
  c.g_profile = "powerlaw";
  c.g_q = 0.5;
  c.eps = {0.1, 1.0 / 30, 0.01};
  c.times = {1, 3};
  c.lemma_q = {0, 2.5};
  c.seed = 99;
  c.allow_degenerate = true;
  const RunConfig back = parse_config(serialize(c));
  CHECK(back == c);
  CHECK(serialize(back) == serialize(c));

  const std::string file = "# header\n[run]\ncoeffs = \"cosine\"  # trailing\n\nN = 32\n[sweep]\neps = [1/16, 1/64]\n";
  const RunConfig f = parse_config(file);
  CHECK(f.N == 32);
  CHECK(parse_config(serialize(f)) == f);
}

TEST_CASE("errors")
{
  CHECK(code_of("eps = [1/16, 1/8]\n") == Errc::ValidationError);
  CHECK(code_of("N = 3x\n") == Errc::ParseError);
  CHECK(code_of("bogus = 1\n") == Errc::ParseError);
  CHECK(code_of("coeffs cosine\n") == Errc::ParseError);
  CHECK(message_of("\n\nN = abc\n").find("line 3") != std::string::npos);

  // Every violation is reported.
  const std::string m = message_of("s = 0\ntrials = 2\n");
  CHECK(m.find("s must be") != std::string::npos);
  CHECK(m.find("trials") != std::string::npos);
  CHECK(message_of("N = 3x\n").rfind("ParseError: line 1", 0) == 0);
}

TEST_CASE("single overrides")
{
  RunConfig c;
  apply_setting(c, "K", "40");
  apply_setting(c, "eps", "[1/16, 1/32]");
  CHECK(c.K == 40.0);
  CHECK(c.eps.size() == 2);
  CHECK_THROWS_AS(apply_setting(c, "allow_degenerate", "maybe"), Error);
}
