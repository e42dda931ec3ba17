#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>

#include "doctest.h"
#include "mustring/io.hpp"
#include "mustring/model.hpp"

using namespace mustring;

namespace {

// Message text of the exception a callable throws, for checks on where an
// error points (line numbers, key names).
template <class E, class F>
std::string thrown_message(F f) {
  try {
    f();
  } catch (const E& e) {
    return e.what();
  }
  return "";
}

struct RunResult {
  int code = -1;
  std::string output;  // stdout and stderr interleaved
};

RunResult run_cli(const std::string& args) {
  const std::string cmd = std::string(MUSTRING_CLI_PATH) + " " + args + " 2>&1";
  RunResult res;
  FILE* pipe = popen(cmd.c_str(), "r");
  REQUIRE(pipe != nullptr);
  char buf[4096];
  std::size_t got;
  while ((got = fread(buf, 1, sizeof buf, pipe)) > 0)
    res.output.append(buf, got);
  const int status = pclose(pipe);
  res.code = WEXITSTATUS(status);
  return res;
}

std::string read_file(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  REQUIRE(f.good());
  std::ostringstream os;
  os << f.rdbuf();
  return os.str();
}

std::string temp_path(const std::string& name) {
  return "/tmp/mustring_cli_test_" + name;
}

int count_lines(const std::string& s) {
  int n = 0;
  for (const char c : s)
    if (c == '\n') ++n;
  return n;
}

}  // namespace

TEST_CASE("empty config text keeps the defaults") {
  const StringParams p = parse_config("");
  CHECK(p.rho == 1.0);
  CHECK(p.ell == 1.0);
  CHECK(p.m0 == 1.0);
  CHECK(p.epsl == 1.0);
}

TEST_CASE("config grammar: comments, blanks, all nine keys") {
  const StringParams p = parse_config(
      "# physical block\n"
      "rho = 2.0\n"
      "gamma= 3\n"
      "ell =1.5\n"
      "\n"
      "m0 = 0.25   # left mass\n"
      "ml = 0.5\n"
      "k0 = 0.1\n"
      "kl = 0.2\n"
      "eps0 = 1\n"
      "epsl = 1\n");
  CHECK(p.rho == 2.0);
  CHECK(p.gamma == 3.0);
  CHECK(p.ell == 1.5);
  CHECK(p.m0 == 0.25);
  CHECK(p.kl == 0.2);
}

TEST_CASE("config errors carry the line number and the offending key") {
  const std::string unknown = thrown_message<ValidationError>(
      [] { parse_config("rho = 1\nmass = 2\n", "snippet"); });
  CHECK(unknown.find("snippet line 2") != std::string::npos);
  CHECK(unknown.find("mass") != std::string::npos);

  const std::string dup = thrown_message<ValidationError>(
      [] { parse_config("ell = 1\nell = 2\n"); });
  CHECK(dup.find("line 2") != std::string::npos);
  CHECK(dup.find("duplicate") != std::string::npos);

  const std::string junk = thrown_message<ValidationError>(
      [] { parse_config("ell = 1.5qq\n"); });
  CHECK(junk.find("line 1") != std::string::npos);

  CHECK_THROWS_AS(parse_config("ell\n"), ValidationError);
  CHECK_THROWS_AS(parse_config("ell =\n"), ValidationError);
  CHECK_THROWS_AS(parse_config("ell = 0x10\n"), ValidationError);
  CHECK_THROWS_AS(parse_config("ell = inf\n"), ValidationError);
  // bad physics goes through the same validation as struct input
  CHECK_THROWS_AS(parse_config("m0 = -1\n"), ValidationError);
  CHECK_THROWS_AS(parse_config("eps0 = 0.5\n"), ValidationError);
}

TEST_CASE("g17 text round-trips doubles exactly") {
  for (const double v : {1.0 / 3.0, 6.2665706865775155, -0.0, 1e-300,
                         9.8645625477851606}) {
    CHECK(std::strtod(g17(v).c_str(), nullptr) == v);
  }
}

TEST_CASE("json records keep insertion order and quote text") {
  JsonRecord rec;
  rec.integer("b", 2);
  rec.text("a", "x\"y");
  rec.boolean("z", false);
  CHECK(rec.render() == "{\"b\":2,\"a\":\"x\\\"y\",\"z\":false}");
}

TEST_CASE("csv writer refuses cells that would need quoting") {
  std::ostringstream os;
  csv_row(os, {"a", "b"});
  CHECK(os.str() == "a,b\n");
  CHECK_THROWS_AS(csv_row(os, {"a,b"}), std::logic_error);
}

TEST_CASE("modes subcommand: manifest header, shape, exit 0") {
  const RunResult r = run_cli("modes --count 3");
  CHECK(r.code == 0);
  CHECK(r.output.rfind("# manifest: {\"schema_version\":1,\"subcommand\":\"modes\"",
                       0) == 0);
  CHECK(r.output.find("m,omega,gm,Xhat(0),Xhat(ell),residual\n") !=
        std::string::npos);
  CHECK(count_lines(r.output) == 5);  // manifest + header + three rows
  // baseline parameters sit outside the weight branch: hats print as nan
  CHECK(r.output.find(",nan,nan,") != std::string::npos);
}

TEST_CASE("config file flows into the manifest") {
  const std::string cfg = temp_path("cfg");
  {
    std::ofstream f(cfg);
    f << "m0 = 0.5\nml = 0.5\nk0 = 0.2\nkl = 0.2\n";
  }
  const RunResult r = run_cli("modes --config " + cfg + " --count 2");
  CHECK(r.code == 0);
  CHECK(r.output.find("\"m0\":0.5") != std::string::npos);
  CHECK(r.output.find("\"has_measure\":true") != std::string::npos);
  CHECK(r.output.find("nan") == std::string::npos);
  std::remove(cfg.c_str());
}

TEST_CASE("bad input exits 1; --json-errors shapes the report") {
  const RunResult plain = run_cli("modes --config /no/such/file");
  CHECK(plain.code == 1);
  CHECK(plain.output.rfind("mustring: ", 0) == 0);

  const RunResult json = run_cli("--json-errors modes --config /no/such/file");
  CHECK(json.code == 1);
  CHECK(json.output.rfind("{\"schema_version\":1,\"error\":{\"kind\":"
                          "\"validation\",\"message\":",
                          0) == 0);

  // flag placement after the subcommand works too
  const RunResult trailing = run_cli("modes --json-errors --count 0");
  CHECK(trailing.code == 1);
  CHECK(trailing.output.find("\"kind\":\"validation\"") != std::string::npos);
}

TEST_CASE("a numerical give-up exits 2 with its own kind") {
  // the absurd coupling drives the orbit past the finite range in one step
  const RunResult r = run_cli("--json-errors pmech --preset quartic:1e150");
  CHECK(r.code == 2);
  CHECK(r.output.find("\"kind\":\"numerical\"") != std::string::npos);
}

TEST_CASE("evolve emits the documented columns and conserves the energy cell") {
  const RunResult r = run_cli("evolve --preset mode:1 --cutoff 6 --count 3");
  CHECK(r.code == 0);
  CHECK(r.output.find("t,energy,end0,endl,probe_third,probe_two_thirds\n") !=
        std::string::npos);
  // pull the energy column of the first and last rows
  std::istringstream is(r.output);
  std::string line;
  std::getline(is, line);  // manifest
  std::getline(is, line);  // header
  double e_first = 0.0, e_last = 0.0, t = 0.0;
  char comma;
  std::getline(is, line);
  std::istringstream(line) >> t >> comma >> e_first;
  std::getline(is, line);
  std::getline(is, line);
  std::istringstream(line) >> t >> comma >> e_last;
  CHECK(t == 10.0);
  CHECK(e_first == doctest::Approx(e_last).epsilon(1e-12));
}

TEST_CASE("bogoliubov json names the decision and the evidence") {
  const RunResult r = run_cli("bogoliubov --preset tilted:0.3 --n 4");
  CHECK(r.code == 0);
  CHECK(r.output.find("\"unitary\":false") != std::string::npos);
  CHECK(r.output.find("\"sizes\":[4]") != std::string::npos);
  CHECK(r.output.find("\"floor\":") != std::string::npos);
  CHECK(r.output.find("\"slope_final_ell\":0.29999999999999999") !=
        std::string::npos);
}

TEST_CASE("bogoliubov --out adds the beta matrix file") {
  const std::string out = temp_path("bg.json");
  const RunResult r = run_cli("bogoliubov --preset bump:0.02 --n 4 --out " + out);
  CHECK(r.code == 0);
  const std::string json = read_file(out);
  CHECK(json.find("\"unitary\":true") != std::string::npos);
  CHECK(json.find("\"beta_matrix\":") != std::string::npos);
  const std::string mat = read_file(out + ".beta.csv");
  CHECK(mat.find("l,m,abs_beta\n") != std::string::npos);
  CHECK(count_lines(mat) == 2 + 4 * 4);
  std::remove(out.c_str());
  std::remove((out + ".beta.csv").c_str());
}

TEST_CASE("bogoliubov robin basis demands massless ends") {
  const std::string cfg = temp_path("cfg3");
  {
    std::ofstream f(cfg);
    f << "k0 = 1\nkl = 1\n";  // masses stay at the default 1
  }
  const RunResult r = run_cli("bogoliubov --config " + cfg + " --n 4");
  CHECK(r.code == 1);
  CHECK(r.output.find("massless") != std::string::npos);
  std::remove(cfg.c_str());
}

TEST_CASE("pmech trajectory ends with the observables record") {
  const RunResult r = run_cli("pmech --cutoff 2000 --count 3");
  CHECK(r.code == 0);
  CHECK(r.output.find("s,q,t,p\n") != std::string::npos);
  const auto pos = r.output.find("# observables: {");
  REQUIRE(pos != std::string::npos);
  CHECK(r.output.find("\"energy_spread\":", pos) != std::string::npos);
  // energy spread across the gauge sections is roundoff, not dynamics
  const auto spread_pos = r.output.find("\"energy_spread\":", pos);
  const double spread =
      std::strtod(r.output.c_str() + spread_pos + 16, nullptr);
  CHECK(spread < 1e-8);
}

TEST_CASE("unknown presets are named in the rejection") {
  CHECK(run_cli("evolve --preset vortex").code == 1);
  CHECK(run_cli("fock --preset spiral").code == 1);
  CHECK(run_cli("bogoliubov --preset twisted").code == 1);
  CHECK(run_cli("pmech --preset cubic").code == 1);
  const RunResult r = run_cli("pmech --preset harmonic:1,stopped");
  CHECK(r.code == 1);
  CHECK(r.output.find("stopped") != std::string::npos);
}

TEST_CASE("reruns with one manifest are byte-identical") {
  const std::string out = temp_path("rerun.csv");
  CHECK(run_cli("modes --count 6 --out " + out).code == 0);
  const std::string first = read_file(out);
  CHECK(run_cli("modes --count 6 --out " + out).code == 0);
  CHECK(read_file(out) == first);
  std::remove(out.c_str());
}
