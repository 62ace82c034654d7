#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cstdlib>
#include <json.hpp>
#include <sstream>

#include "sudlerlab/cli.hpp"

using namespace sudlerlab;

namespace {

struct Run {
  int code;
  std::string out;
  std::string err;
};

Run run(std::vector<std::string> args) {
  std::ostringstream out, err;
  const int code = run_cli(args, out, err);
  return {code, out.str(), err.str()};
}

}  // namespace

TEST_CASE("exit codes") {
  CHECK(run({"vol41"}).code == kExitOk);
  CHECK(run({"--help"}).code == kExitOk);
  CHECK(run({}).code == kExitUsage);
  CHECK(run({"nonsense"}).code == kExitUsage);
  CHECK(run({"cf", "[1; (1"}).code == kExitUsage);
  CHECK(run({"cf", "[1; (1, 1)]"}).code == kExitUsage);
  CHECK(run({"jones", "1/0"}).code == kExitUsage);
  CHECK(run({"estimate-k", "[1; (1)]", "--k", "8..40", "--budget", "1000"}).code == kExitBudget);
  CHECK(run({"cf", "[1; (1)]", "--k-max", "300", "--precision-bits", "128"}).code == kExitPrecision);
  CHECK(run({"sudler", "3/7", "--n", "7"}).code == kExitError);
  CHECK(run({"--precision-bits", "10", "vol41"}).code == kExitUsage);
  CHECK(run({"--json", "--csv", "vol41"}).code == kExitUsage);
}

TEST_CASE("error classes have distinct codes") {
  const std::vector<int> codes = {kExitOk, kExitSuiteFailed, kExitUsage, kExitBudget, kExitPrecision, kExitError};
  for (std::size_t i = 0; i < codes.size(); ++i)
    for (std::size_t j = i + 1; j < codes.size(); ++j) CHECK(codes[i] != codes[j]);
}

TEST_CASE("json output parses and has stable keys") {
  const Run r = run({"--json", "jones", "1/3"});
  REQUIRE(r.code == 0);
  const auto j = nlohmann::json::parse(r.out);
  CHECK(j["x"] == "1/3");
  CHECK(std::fabs(j["J"].get<double>() - 13) < 1e-12);

  const Run v = run({"--json", "verify", "reflection", "--random", "20", "--bmax", "500"});
  REQUIRE(v.code == 0);
  const auto jv = nlohmann::json::parse(v.out);
  CHECK(jv["pass"] == true);
  for (const auto& rec : jv["records"])
    for (const char* key : {"name", "value", "residual", "bound", "pass"}) CHECK(rec.contains(key));

  const auto cf = nlohmann::json::parse(run({"--json", "cf", "[1; (1)]", "--k-max", "12"}).out);
  CHECK(cf["convergents"][12]["q"] == "233");
  CHECK(cf["spectral"]["k0"] == 1);
}

TEST_CASE("csv headers") {
  const Run s = run({"--csv", "sudler", "1/3", "--n", "2"});
  CHECK(s.out.rfind("N,logP\n0,0\n1,0.549306144334054", 0) == 0);
  CHECK(std::count(s.out.begin(), s.out.end(), '\n') == 4);
  const Run g = run({"limitfn", "[1; (1)]", "--points", "3"});
  CHECK(g.out.rfind("x,G,tail_bound\n", 0) == 0);
  const Run c = run({"limitfn", "[1; (1)]", "--points", "10", "--convergence", "--m", "3..4"});
  CHECK(c.out.rfind("m,q_k,sup_error,rate_envelope\n", 0) == 0);
}

TEST_CASE("limit function rows include the zero") {
  const Run g = run({"--csv", "limitfn", "[1; (1)]", "--from", "-0.5", "--to", "0.2", "--points", "4"});
  CHECK(g.out.find(",0,") != std::string::npos);
}

TEST_CASE("outputs are byte-identical across worker counts") {
  const std::vector<std::vector<std::string>> commands = {
      {"verify", "reflection", "--random", "50", "--bmax", "20000"},
      {"verify", "cotangent", "--upto-k", "14"},
      {"estimate-k", "[1; (2)]", "--c", "1,2,inf", "--k", "4..14"},
      {"sudler", "[3; (6)]", "--n", "3000"},
  };
  for (const auto& cmd : commands) {
    std::vector<std::string> base = {"--chunk-size", "500", "--workers", "1"};
    base.insert(base.end(), cmd.begin(), cmd.end());
    const Run ref = run(base);
    REQUIRE(ref.code == 0);
    for (const char* w : {"2", "8"}) {
      auto args = base;
      args[3] = w;
      CHECK(run(args).out == ref.out);
    }
  }
}

TEST_CASE("environment defaults yield to flags") {
  setenv("SUDLERLAB_WORKERS", "0", 1);
  CHECK(run({"vol41"}).code == kExitUsage);
  CHECK(run({"--workers", "2", "vol41"}).code == kExitOk);
  setenv("SUDLERLAB_WORKERS", "abc", 1);
  CHECK(run({"vol41"}).code == kExitUsage);
  unsetenv("SUDLERLAB_WORKERS");
  setenv("SUDLERLAB_PRECISION_BITS", "128", 1);
  CHECK(run({"cf", "[1; (1)]", "--k-max", "300"}).code == kExitPrecision);
  CHECK(run({"--precision-bits", "1024", "cf", "[1; (1)]", "--k-max", "300"}).code == kExitOk);
  unsetenv("SUDLERLAB_PRECISION_BITS");
}
