#include <doctest.h>

#include <sys/wait.h>
#include <unistd.h>

#include <complex>
#include <cstdio>
#include <cstdlib>
#include <string>

#include <json.hpp>

#include "mzeta/g_function.hpp"
#include "mzeta/mellin.hpp"
#include "mzeta/quasi_shuffle.hpp"
#include "mzeta/zeta_series.hpp"

using namespace mzeta;
using nlohmann::json;

namespace {

struct RunResult {
  std::string out, err;
  int rc = -1;
};

// run the installed binary through /bin/sh, capturing stdout, stderr and the
// exit status.  envprefix is prepended verbatim ("MZETA_TOL=1e-6").
RunResult run_cli(const std::string& args, const std::string& envprefix = "") {
  static int seq = 0;
  const std::string ef = "/tmp/mzeta_cli_err_" + std::to_string(::getpid()) +
                         "_" + std::to_string(seq++);
  std::string cmd = envprefix + " \"" + MZETA_CLI_BIN + "\" " + args + " 2>" + ef;
  RunResult r;
  FILE* p = ::popen(cmd.c_str(), "r");
  REQUIRE(p != nullptr);
  char buf[4096];
  std::size_t n;
  while ((n = std::fread(buf, 1, sizeof buf, p)) > 0) r.out.append(buf, n);
  int st = ::pclose(p);
  r.rc = WIFEXITED(st) ? WEXITSTATUS(st) : -1;
  if (FILE* f = std::fopen(ef.c_str(), "r")) {
    while ((n = std::fread(buf, 1, sizeof buf, f)) > 0) r.err.append(buf, n);
    std::fclose(f);
    std::remove(ef.c_str());
  }
  return r;
}

double jget(const json& j, const char* a, const char* b = nullptr) {
  return b ? j.at(a).at(b).get<double>() : j.at(a).get<double>();
}

}  // namespace

TEST_SUITE("cli") {

TEST_CASE("same invocation twice gives byte-identical output") {
  auto a = run_cli("psi --s 2,1 --w 3 --method auto");
  auto b = run_cli("psi --s 2,1 --w 3 --method auto");
  REQUIRE(a.rc == 0);
  CHECK(a.out == b.out);
  json j = json::parse(a.out);
  CHECK(std::abs(jget(j, "value", "re") - 5.0 / 12.0) <= 1e-12);
  CHECK(std::abs(jget(j, "value", "im")) <= 1e-12);

  auto v1 = run_cli("verify --suite harmonic --seed 42 --samples 5");
  auto v2 = run_cli("verify --suite harmonic --seed 42 --samples 5");
  REQUIRE(v1.rc == 0);
  CHECK(v1.out == v2.out);
}

TEST_CASE("printed JSON round-trips to the in-process value exactly") {
  // same library objects behind the binary, so the doubles must agree bit
  // for bit once the shortest-round-trip JSON is re-parsed
  auto r = run_cli("psi --s 2.2,1.4 --w 1.7+0.3i");
  REQUIRE(r.rc == 0);
  json j = json::parse(r.out);
  EvalResult ref = psi_auto({2.2, 1.4}, {1.7, 0.3});
  CHECK(jget(j, "value", "re") == ref.value.real());
  CHECK(jget(j, "value", "im") == ref.value.imag());
  CHECK(jget(j, "abs_error") == ref.abs_error);
  CHECK(j.at("method").get<std::string>() == to_string(ref.method));

  auto g = run_cli("g --q 0.5,0.25 --w 1.5+0.5i");
  REQUIRE(g.rc == 0);
  json jg = json::parse(g.out);
  EvalResult gref = g_eval({0.5, 0.25}, {1.5, 0.5});
  CHECK(jget(jg, "value", "re") == gref.value.real());
  CHECK(jget(jg, "value", "im") == gref.value.imag());
}

TEST_CASE("usage problems exit 2") {
  CHECK(run_cli("psi --s 2,1").rc == 2);                    // missing --w
  CHECK(run_cli("psi --s 2,1 --w 3 --bogus").rc == 2);      // unknown flag
  CHECK(run_cli("psi --s 2..5 --w 1").rc == 2);             // bad literal
  CHECK(run_cli("psi --s 2,1 --w 3 --level 99").rc == 2);   // out of range
  CHECK(run_cli("stuffle --a 1/x --b 2").rc == 2);          // bad rational
  CHECK(run_cli("verify --suite bogus").rc == 2);
  CHECK(run_cli("zeta --s 2 --N 5 --star --w 1").rc == 2);  // conflict
  CHECK(run_cli("zeta --s 2 --w 1").rc == 2);               // dangling --w
  CHECK(run_cli("").rc == 2);                               // no subcommand
  CHECK(run_cli("--help").rc == 0);
}

TEST_CASE("domain and convergence failures exit 1 with a structured error") {
  auto r = run_cli("psi --s -1 --w 0");
  CHECK(r.rc == 1);
  json e = json::parse(r.err);
  CHECK(e.at("error").at("type").get<std::string>() == "domain");
  CHECK(run_cli("psi --s 2 --w -3").rc == 1);  // excluded ray
  CHECK(run_cli("zeta --s 0.5").rc == 1);      // divergent sum

  auto c = run_cli("psi --s 1.01,1.01 --w 0.5 --method mellin --level 3 --tol 1e-13");
  CHECK(c.rc == 1);
  json ce = json::parse(c.err);
  CHECK(ce.at("error").at("type").get<std::string>() == "convergence");
  CHECK(ce.at("error").contains("best"));  // best-so-far value is reported
}

TEST_CASE("pinned outputs") {
  auto g = run_cli("g --q 1,1,1 --w 5");
  REQUIRE(g.rc == 0);
  json jg = json::parse(g.out);
  CHECK(jget(jg, "value", "re") == doctest::Approx(10.0).epsilon(1e-13));
  CHECK(jg.at("method").get<std::string>() == "exact");

  auto d = run_cli("delannoy --c 2 --d 1");
  REQUIRE(d.rc == 0);
  CHECK(d.out == "c,d,m,D\n2,1,2,2\n2,1,3,3\n");

  auto s = run_cli("stuffle --flavor additive --a 2 --b 3");
  REQUIRE(s.rc == 0);
  CHECK(s.out == render(harmonic_product(Flavor::Additive, {rational(2)},
                                         {rational(3)})) +
                     "\n");
}

TEST_CASE("verify subcommand reports and exits by suite outcome") {
  auto r = run_cli("verify --suite delannoy --samples 1");
  CHECK(r.rc == 0);
  CHECK(r.out.find("overall PASS") != std::string::npos);

  auto j = run_cli("verify --suite special-values --seed 5 --samples 5 --format json");
  REQUIRE(j.rc == 0);
  json rep = json::parse(j.out);
  CHECK(rep.at("pass").get<bool>());
  CHECK(rep.at("suite").get<std::string>() == "special-values");
  CHECK(rep.at("lines").size() == 2);
}

TEST_CASE("MZETA_TOL env var relaxes the default tolerance") {
  const std::string cmd = "psi --s 1.5,1.2 --w 0.5+0.2i --method mellin";
  auto dflt = run_cli(cmd);
  auto loose = run_cli(cmd, "MZETA_TOL=1e-4");
  REQUIRE(dflt.rc == 0);
  REQUIRE(loose.rc == 0);
  CHECK(jget(json::parse(loose.out), "work") <
        jget(json::parse(dflt.out), "work"));

  // explicit flag beats the environment
  auto pinned = run_cli(cmd + " --tol 1e-10", "MZETA_TOL=1e-4");
  REQUIRE(pinned.rc == 0);
  CHECK(jget(json::parse(pinned.out), "work") >
        jget(json::parse(loose.out), "work"));

  CHECK(run_cli("zeta --s 2", "MZETA_TOL=banana").rc == 2);
}

TEST_CASE("--timing gates the elapsed_ms field") {
  auto with = run_cli("zeta --s 2 --timing");
  auto without = run_cli("zeta --s 2");
  REQUIRE(with.rc == 0);
  CHECK(json::parse(with.out).contains("elapsed_ms"));
  CHECK(!json::parse(without.out).contains("elapsed_ms"));
}

}  // TEST_SUITE
