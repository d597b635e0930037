#include "doctest.h"

#include <sys/wait.h>

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "json.hpp"

#include "gptrans/catalog.hpp"
#include "gptrans/report.hpp"

namespace fs = std::filesystem;
using json = nlohmann::json;

namespace {

struct Run {
  int code = -1;
  std::string out;  // stdout and stderr together
};

Run cli(const std::string& args, const std::string& env = "") {
  const std::string cmd = env + " '" GPTRANS_BIN "' " + args + " 2>&1";
  Run r;
  FILE* p = popen(cmd.c_str(), "r");
  REQUIRE(p != nullptr);
  std::array<char, 4096> buf;
  while (std::fgets(buf.data(), buf.size(), p)) r.out += buf.data();
  const int status = pclose(p);
  r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return r;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

fs::path scratch(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / "gptrans_cli_test";
  fs::create_directories(dir);
  return dir / name;
}

std::size_t default_point_count() {
  std::size_t n = 0;
  for (const auto& r : gptrans::catalog::builtin_catalog()) n += r.default_points.size();
  return n;
}

// JSON has no infinity and writes null, which reads back as NaN.
gptrans::catalog::VerificationOutcome json_view(gptrans::catalog::VerificationOutcome o) {
  for (double* v : {&o.tol, &o.lhs_value, &o.rhs_value, &o.abs_err, &o.rel_err, &o.lhs_err_est, &o.rhs_err_est}) {
    if (std::isinf(*v)) *v = std::nan("");
  }
  return o;
}

}  // namespace

TEST_CASE("eval") {
  auto r = cli("eval --kind laplace --f 1 --at 2 --format json");
  CHECK(r.code == 0);
  auto j = json::parse(r.out);
  CHECK(j[0]["value"].get<double>() == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(j[0]["status"] == "CONVERGED");

  r = cli("eval --kind p2n --n 1 --f 'sin(x)' --at 1 --format json");
  CHECK(r.code == 0);
  j = json::parse(r.out);
  CHECK(j[0]["value"].get<double>() == doctest::Approx(0.5778637).epsilon(1e-7));
  CHECK(j[0]["err_est"].get<double>() >= 0.0);

  r = cli("eval --kind l2n --n 2 --f 'exp(-x^4)' --at 0.5,1,2 --format csv");
  CHECK(r.code == 0);
  CHECK(std::count(r.out.begin(), r.out.end(), '\n') == 4);

  r = cli("eval --kind ln --n 4 --f 'exp(-x^4)' --at 1 --raw");
  CHECK(r.code == 0);
  CHECK(r.out.find("CONVERGED") != std::string::npos);

  r = cli("eval --kind l2 --f 'exp(-a*x)' --param a=2 --at 1");
  CHECK(r.code == 0);
}

TEST_CASE("eval errors") {
  auto r = cli("eval --kind ln --n 3 --f 'exp(-x)' --at 1");
  CHECK(r.code == 1);
  CHECK(r.out.find("n must be a power of two") != std::string::npos);

  CHECK(cli("eval --kind hankel --f 1 --at 1").code == 1);
  CHECK(cli("eval --kind laplace --f 'exp(-a*x)' --at 1").code == 1);
  CHECK(cli("eval --kind laplace --f 1 --at -1").code == 1);
  CHECK(cli("eval --kind laplace --f 1 --at 1 --param a").code == 1);
  CHECK(cli("eval --kind laplace --f 1").code == 1);
  CHECK(cli("eval --kind laplace --f 1 --at 1 --format xml").code == 1);

  // int_0^inf dx/(x+1) diverges.
  r = cli("eval --kind stieltjes --f 1 --at 1");
  CHECK(r.code == 2);
}

TEST_CASE("quad") {
  auto r = cli("quad --f 'exp(-x)' --strategy decay --format json");
  CHECK(r.code == 0);
  CHECK(json::parse(r.out)[0]["value"].get<double>() == doctest::Approx(1.0).epsilon(1e-12));

  r = cli("quad --f 'sin(x)' --strategy oscillatory --period 6.283185307");
  CHECK(r.code == 2);
  CHECK(r.out.find("DIVERGENT_SUSPECTED") != std::string::npos);

  r = cli("quad --f 'sin(x)' --strategy abel --format json");
  CHECK(r.code == 0);
  CHECK(json::parse(r.out)[0]["value"].get<double>() == doctest::Approx(1.0).epsilon(1e-6));

  r = cli("quad --f 'x/(x^2+1)^2'");
  CHECK(r.code == 0);
  CHECK(r.out.find("ALGEBRAIC") != std::string::npos);

  r = cli("quad --f 'erfc(x)'");
  CHECK(r.code == 1);
  CHECK(r.out.find("UNCLASSIFIED") != std::string::npos);

  CHECK(cli("quad --f 'erfc(x)' --strategy decay").code == 0);
  CHECK(cli("quad --f 'exp(-x)' --strategy simpson").code == 1);
  CHECK(cli("quad --f 'exp(-x)/(1+x)' --strategy oscillatory").code == 1);
}

TEST_CASE("parse errors point at the offending character") {
  struct Case {
    const char* src;
    std::size_t pos;
  };
  for (const auto& c : {Case{"sin(", 4}, Case{"2x", 1}, Case{"besselj(1)", 0}}) {
    const auto r = cli(std::string("quad --f '") + c.src + "'");
    INFO(c.src << ": " << r.out);
    CHECK(r.code == 1);
    CHECK(r.out.find("position " + std::to_string(c.pos)) != std::string::npos);
    CHECK(r.out.find("\n  " + std::string(c.pos, ' ') + "^") != std::string::npos);
  }
}

TEST_CASE("usage errors") {
  CHECK(cli("").code == 1);
  CHECK(cli("frobnicate").code == 1);
  CHECK(cli("quad --f 1 --bogus").code == 1);
  CHECK(cli("identity").code == 1);
  CHECK(cli("--help").code == 0);
  CHECK(cli("--version").out.find(std::string(gptrans::report::kVersion)) != std::string::npos);
}

TEST_CASE("identity list") {
  const auto r = cli("identity list");
  CHECK(r.code == 0);
  std::size_t rows = 0;
  std::istringstream in(r.out);
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line[0] != ' ') ++rows;
  }
  CHECK(rows >= 27);
  CHECK(rows == gptrans::catalog::builtin_catalog().size());
}

TEST_CASE("identity verify") {
  auto r = cli("identity verify L3 --tol 1e-7 --format json");
  CHECK(r.code == 0);
  auto j = json::parse(r.out);
  CHECK(j["outcomes"].size() == gptrans::catalog::find_record("L3")->default_points.size());
  for (const auto& o : j["outcomes"]) CHECK(o["status"] == "PASS");

  r = cli("identity verify E5 --format json");
  CHECK(r.code == 0);
  for (const auto& o : json::parse(r.out)["outcomes"]) CHECK(o["status"] == "CONDITIONAL");

  r = cli("identity verify R1 --point y=3 --fn 'f=exp(-3*x)' --format json");
  CHECK(r.code == 0);
  j = json::parse(r.out);
  REQUIRE(j["outcomes"].size() == 1);
  CHECK(j["outcomes"][0]["point"]["functions"]["f"] == "exp(-3*x)");
  CHECK(j["outcomes"][0]["point"]["params"]["y"].get<double>() == 3.0);

  r = cli("identity verify Q9");
  CHECK(r.code == 1);
  CHECK(r.out.find("R1 R2") != std::string::npos);
  CHECK(r.out.find("X2") != std::string::npos);

  CHECK(cli("identity verify R1 --point y=-1").code == 1);
  CHECK(cli("identity verify R1 --point q=1").code == 1);
  CHECK(cli("identity verify R4 --point n=3").code == 1);
  CHECK(cli("identity verify R1 --fn 'f=sin('").code == 1);
  CHECK(cli("identity verify R1 --tol 0").code == 1);
}

TEST_CASE("a MUST_PASS failure exits 2") {
  // int_0^inf dx/(x+y) diverges, so neither side of R8 converges.
  const auto r = cli("identity verify R8 --fn f=1 --point n=1");
  CHECK(r.code == 2);
  CHECK(r.out.find("FAIL") != std::string::npos);
}

TEST_CASE("identity audit writes matching JSON and CSV") {
  const auto jp = scratch("report.json");
  const auto cp = scratch("report.csv");
  fs::remove(jp);
  fs::remove(cp);
  auto r = cli("identity audit --format json --out '" + jp.string() + "'");
  CHECK(r.code == 0);
  r = cli("identity audit --format csv --jobs 2 --out '" + cp.string() + "'");
  CHECK(r.code == 0);

  const auto from_json = gptrans::report::from_json(slurp(jp));
  const auto from_csv = gptrans::report::from_csv(slurp(cp));
  CHECK(from_json.outcomes.size() == default_point_count());
  CHECK(from_json.summary.records == gptrans::catalog::builtin_catalog().size());
  CHECK(from_json.summary.must_pass_failures == 0);
  CHECK(from_json.meta == from_csv.meta);
  CHECK(from_json.summary == from_csv.summary);
  REQUIRE(from_json.outcomes.size() == from_csv.outcomes.size());
  for (std::size_t i = 0; i < from_json.outcomes.size(); ++i) {
    INFO(from_json.outcomes[i].id << " " << from_json.outcomes[i].point.label());
    CHECK(from_json.outcomes[i] == json_view(from_csv.outcomes[i]));
  }
}

TEST_CASE("audit output is byte-identical across runs") {
  const auto a = cli("identity audit --only R1,E5,T1a --format json --jobs 1");
  const auto b = cli("identity audit --only R1,E5,T1a --format json --jobs 3");
  CHECK(a.code == 0);
  CHECK(a.out == b.out);
  std::vector<std::string> meta;
  const auto doc = nlohmann::ordered_json::parse(a.out);
  for (const auto& [k, v] : doc["meta"].items()) meta.push_back(k);
  CHECK(meta == std::vector<std::string>{"tool", "version", "tol_policy", "rel_tol", "max_evals"});
  CHECK(cli("identity audit --only Z1").code == 1);
}

TEST_CASE("GPTRANS_MAX_EVALS") {
  auto r = cli("identity audit --only R1 --format json", "GPTRANS_MAX_EVALS=123456");
  CHECK(r.code == 0);
  CHECK(json::parse(r.out)["meta"]["max_evals"] == 123456);

  r = cli("identity audit --only R1 --format json --max-evals 54321", "GPTRANS_MAX_EVALS=123456");
  CHECK(json::parse(r.out)["meta"]["max_evals"] == 54321);

  CHECK(cli("quad --f 'exp(-x)' --strategy decay", "GPTRANS_MAX_EVALS=abc").code == 1);
  CHECK(cli("quad --f 'exp(-x)' --strategy decay", "GPTRANS_MAX_EVALS=10").code == 1);
}
