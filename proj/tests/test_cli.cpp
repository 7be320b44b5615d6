#include <doctest.h>

#include <sstream>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "countstable/cli.hpp"
#include "countstable/pmf.hpp"

using namespace countstable;
using namespace countstable::cli;

namespace {

struct Result {
  int code;
  std::string out;
  std::string err;
};

Result invoke(const std::vector<std::string>& args) {
  std::ostringstream out, err;
  const int code = main_entry(args, out, err);
  return {code, out.str(), err.str()};
}

std::vector<std::string> lines(const std::string& s) {
  std::vector<std::string> out;
  std::istringstream is(s);
  for (std::string line; std::getline(is, line);) out.push_back(line);
  return out;
}

}  // namespace

TEST_CASE("parse_args examples") {
  auto c = parse_args({"pmf", "--alpha", "2", "--delta", "2", "--gamma", "-1", "--max-k", "10"});
  CHECK(c.command == Command::kPmf);
  REQUIRE(c.stable.has_value());
  CHECK(c.stable->alpha == 2.0);
  CHECK(c.stable->gamma == -1.0);
  CHECK(c.max_k == std::optional<std::size_t>(10));
  CHECK_FALSE(c.compound.has_value());

  CHECK_THROWS_AS(parse_args({"pmf", "--mu", "2", "--sigma2", "2", "--alpha", "0.5"}), UsageError);

  c = parse_args({"verify", "--lambda", "1", "--theta", "0", "--alpha", "2", "--n", "2,4", "--tol", "1e-8"});
  CHECK(c.command == Command::kVerify);
  REQUIRE(c.compound.has_value());
  CHECK(c.n_list == std::vector<unsigned long>{2, 4});
  CHECK(c.tol == 1e-8);
  CHECK(c.seed == kDefaultSeed);
}

TEST_CASE("conflicts name both flags") {
  try {
    parse_args({"pmf", "--delta", "1", "--gamma", "0", "--alpha", "2", "--lambda", "1"});
    FAIL("expected a usage error");
  } catch (const UsageError& e) {
    const std::string msg = e.what();
    CHECK(msg.find("--delta") != std::string::npos);
    CHECK(msg.find("--lambda") != std::string::npos);
  }
  const auto r = invoke({"pmf", "--mu", "2", "--sigma2", "2", "--alpha", "0.5"});
  CHECK(r.code == kExitUsage);
  CHECK(r.err.find("--mu") != std::string::npos);
  CHECK(r.err.find("--alpha") != std::string::npos);
}

TEST_CASE("usage errors") {
  CHECK(invoke({}).code == kExitUsage);
  CHECK(invoke({"bogus"}).code == kExitUsage);
  CHECK(invoke({"pmf"}).code == kExitUsage);
  CHECK(invoke({"pmf", "--alpha", "2", "--delta", "2"}).code == kExitUsage);
  CHECK(invoke({"pmf", "--lambda", "1", "--theta", "0.5"}).code == kExitUsage);
  CHECK(invoke({"pmf", "--mu", "2"}).code == kExitUsage);
  CHECK(invoke({"verify", "--mu", "2", "--sigma2", "1", "--n", "0"}).code == kExitUsage);
  CHECK(invoke({"verify", "--mu", "2", "--sigma2", "1", "--n", "17"}).code == kExitUsage);
  CHECK(invoke({"verify", "--mu", "2", "--sigma2", "1", "--n", "2,x"}).code == kExitUsage);
  CHECK(invoke({"pmf", "--mu", "2", "--sigma2", "1", "--format", "xml"}).code == kExitUsage);
  CHECK(invoke({"pmf", "--mu", "2", "--sigma2", "1", "--max-k", "1000000"}).code == kExitUsage);
  CHECK(invoke({"pmf", "--mu", "2", "--sigma2", "1", "--tol", "-1"}).code == kExitUsage);
  CHECK(invoke({"pmf", "--mu", "abc", "--sigma2", "1"}).code == kExitUsage);
}

TEST_CASE("help exits cleanly") {
  const auto r = invoke({"--help"});
  CHECK(r.code == kExitOk);
  CHECK(r.out.find("verify") != std::string::npos);
  CHECK(invoke({"pmf", "--help"}).out.find("--alpha") != std::string::npos);
}

TEST_CASE("invalid parameters exit 1") {
  const auto r = invoke({"pmf", "--alpha", "1.5", "--delta", "1", "--gamma", "0.2"});
  CHECK(r.code == kExitInvalidParams);
  CHECK(r.err.find("gamma") != std::string::npos);
  CHECK(invoke({"moments", "--mu", "1", "--sigma2", "2"}).code == kExitInvalidParams);
  CHECK(invoke({"pmf", "--lambda", "1", "--theta", "1.5", "--alpha", "0.5"}).code == kExitInvalidParams);
}

TEST_CASE("pmf table") {
  const auto r = invoke({"pmf", "--lambda", "1", "--theta", "0", "--alpha", "2", "--max-k", "4"});
  CHECK(r.code == kExitOk);
  const auto l = lines(r.out);
  REQUIRE(l.size() == 7);
  CHECK(l[0] == "k,p");
  CHECK(l[1].rfind("0,0.367879", 0) == 0);
  CHECK(l[2] == "1,0");
  CHECK(l[3].rfind("2,0.367879", 0) == 0);
  CHECK(l[4] == "3,0");
  CHECK(l[5].rfind("4,0.1839397", 0) == 0);
  CHECK(l[6].rfind("tail,", 0) == 0);
}

TEST_CASE("pmf json round trip") {
  const auto r = invoke({"pmf", "--mu", "2", "--sigma2", "1", "--max-k", "30", "--format", "json"});
  CHECK(r.code == kExitOk);
  const auto x = pmf_from_json(nlohmann::json::parse(r.out));
  CHECK(x.max_k() == 30);
  CHECK(max_abs_difference(x, hermite_pmf({2.0, 1.0}, 30)) <= 1e-15);
}

TEST_CASE("pmf with automatic truncation") {
  const auto r = invoke({"pmf", "--mu", "2", "--sigma2", "1", "--format", "json"});
  const auto x = pmf_from_json(nlohmann::json::parse(r.out));
  CHECK(x.tail_bound < 1e-12);
}

TEST_CASE("sample output is reproducible") {
  const std::vector<std::string> args = {"sample", "--alpha", "0.5", "--delta", "0", "--gamma", "1",
                                         "--count", "500", "--seed", "42"};
  const auto a = invoke(args);
  const auto b = invoke(args);
  CHECK(a.code == kExitOk);
  CHECK(a.out == b.out);
  CHECK(lines(a.out).size() == 500);
  auto other = args;
  other.back() = "43";
  CHECK(invoke(other).out != a.out);

  const auto h = invoke({"sample", "--mu", "2", "--sigma2", "2", "--count", "200"});
  for (const auto& line : lines(h.out)) CHECK(std::stoull(line) % 2 == 0);
  const auto z = invoke({"sample", "--alpha", "1", "--delta", "0", "--gamma", "0", "--count", "10"});
  for (const auto& line : lines(z.out)) CHECK(line == "0");

  const auto j = nlohmann::json::parse(invoke({"sample", "--mu", "2", "--sigma2", "1", "--count", "5", "--format", "json"}).out);
  CHECK(j["samples"].size() == 5);
  CHECK(j["seed"] == kDefaultSeed);
}

TEST_CASE("moments") {
  auto r = invoke({"moments", "--mu", "2", "--sigma2", "2"});
  CHECK(r.code == kExitOk);
  auto l = lines(r.out);
  REQUIRE(l.size() == 4);
  CHECK(l[0] == "statistic,value");
  CHECK(l[1] == "mean,2");
  CHECK(l[2] == "dispersion,2");
  CHECK(l[3] == "class,broadly_stable_only");

  r = invoke({"moments", "--alpha", "0.5", "--delta", "0", "--gamma", "1"});
  l = lines(r.out);
  CHECK(l[1] == "mean,inf");
  CHECK(l[2] == "dispersion,inf");
  CHECK(l[3] == "class,strictly_stable");

  const auto j = nlohmann::json::parse(invoke({"moments", "--alpha", "1.5", "--delta", "1", "--gamma", "-0.2", "--format", "json"}).out);
  CHECK(j["mean"] == 1.0);
  CHECK(j["dispersion"] == "inf");
}

TEST_CASE("apgf grid") {
  const auto r = invoke({"apgf", "--alpha", "0.5", "--delta", "0", "--gamma", "1", "--points", "3"});
  CHECK(r.code == kExitOk);
  const auto l = lines(r.out);
  REQUIRE(l.size() == 4);
  CHECK(l[0] == "t,psi");
  CHECK(l[1] == "0,1");
  CHECK(l[2].rfind("1,0.36787944117144", 0) == 0);
  const auto j = nlohmann::json::parse(invoke({"apgf", "--mu", "1", "--sigma2", "0", "--format", "json"}).out);
  CHECK(j.size() == 21);
  CHECK(j[20]["t"] == 2.0);
  CHECK(invoke({"apgf", "--mu", "1", "--sigma2", "0", "--points", "0"}).code == kExitUsage);
}

TEST_CASE("verify reports and exit codes") {
  auto r = invoke({"verify", "--lambda", "1", "--theta", "0", "--alpha", "2", "--n", "2,4", "--tol", "1e-8"});
  CHECK(r.code == kExitOk);
  auto l = lines(r.out);
  REQUIRE(l.size() == 3);
  CHECK(l[0].rfind("n,a_n,b_n", 0) == 0);
  CHECK(l[1].find(",pass,") != std::string::npos);
  CHECK(l[2].find(",pass,") != std::string::npos);

  r = invoke({"verify", "--mu", "2", "--sigma2", "2", "--n", "4", "--format", "json"});
  CHECK(r.code == kExitOk);
  const auto j = nlohmann::json::parse(r.out);
  REQUIRE(j.is_array());
  CHECK(j[0]["a_n"] == 0.5);
  CHECK(j[0]["b_n"] == 2.0);
  CHECK(j[0]["verdict"] == "pass");

  // a heavy tail truncated at 200 leaves too much certified mass for 1e-8
  r = invoke({"verify", "--alpha", "0.5", "--delta", "0", "--gamma", "1", "--n", "2", "--max-k", "200"});
  CHECK(r.code == kExitVerifyFailed);
  CHECK(lines(r.out)[1].find(",fail,none") != std::string::npos);
}
