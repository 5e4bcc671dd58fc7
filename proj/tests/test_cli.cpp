#include <doctest.h>
#include <json.hpp>

#include <cstdio>
#include <fstream>
#include <string>
#include <sys/wait.h>

using json = nlohmann::json;

namespace {

struct Run {
  int status = -1;
  std::string out;
  json report() const { return json::parse(out); }
};

Run run(const std::string& args) {
  std::string cmd = std::string(QHL_CLI_PATH) + " " + args + " 2>/dev/null";
  Run r;
  FILE* p = popen(cmd.c_str(), "r");
  REQUIRE(p);
  char buf[4096];
  std::size_t n;
  while ((n = fread(buf, 1, sizeof buf, p)) > 0) r.out.append(buf, n);
  int st = pclose(p);
  r.status = WIFEXITED(st) ? WEXITSTATUS(st) : -1;
  return r;
}

std::string data(const char* f) { return std::string(QHL_DATA_DIR) + "/" + f; }

}  // namespace

TEST_CASE("elliptic and distort examples") {
  auto r = run("elliptic --matrix " + data("rot.txt"));
  REQUIRE(r.status == 0);
  CHECK(r.report()["results"]["elliptic"] == true);
  auto q = run("elliptic --matrix " + data("quartic.txt"));
  CHECK(q.report()["results"]["elliptic"] == false);
  auto j = run("elliptic --matrix " + data("jordan.txt"));
  CHECK(j.report()["results"]["reason"] == "nontrivial Jordan block");

  auto d = run("distort --matrix " + data("two.txt") + " --alpha 1 --kmax 1 --mmax 1024");
  REQUIRE(d.status == 0);
  auto res = d.report()["results"];
  CHECK(res["k"] == 1);
  CHECK(res["max_multiple"] == 1024);
  CHECK(res["saturated"] == true);
}

TEST_CASE("exit codes") {
  CHECK(run("run").status == 2);
  CHECK(run("").status == 2);
  CHECK(run("elliptic").status == 2);
  CHECK(run("elliptic --matrix /nonexistent/file").status == 2);
  CHECK(run("module cert --q \"t-2\" --s 3").status == 2);
  // the level-one disk misses the lower end of the K range
  auto bad = run("diamond --level 1 --tau 3 --verify");
  CHECK(bad.status == 1);
  CHECK(bad.report()["verified"]["K_in_range"] == false);
  CHECK(run("diamond --level 1 --tau 3").status == 0);
  CHECK(run("--help").status == 0);
}

TEST_CASE("reports are deterministic") {
  std::string args = "pair --complex tube --chain \"(a, t^5) 1;(a, 1) -1\"";
  auto a = run(args), b = run(args);
  REQUIRE(a.status == 0);
  CHECK(a.out == b.out);
  CHECK(a.report()["results"]["pairing"] == json::array({5}));
  auto t = run("--timing " + args).report();
  CHECK(t.contains("wall_seconds"));
  CHECK_FALSE(a.report().contains("wall_seconds"));
}

TEST_CASE("chain, duality and module subcommands") {
  auto f = run("fill --complex bs12 --bs 3 --mode integral");
  REQUIRE(f.status == 0);
  CHECK(f.report()["results"]["volume"] == 14);
  CHECK(run("fill --complex grid --word \"x^2 y^2 x^-2 y^-2\" --mode rational").report()["results"]["volume"] == 4);

  auto v = run("dual --complex grid --radius 5").report()["results"];
  CHECK(v["certificate_kind"] == "violator");
  auto p = run("dual --complex grid --radius 3").report()["results"];
  CHECK(p["certificate_kind"] == "primitive");
  CHECK(run("dual --complex line --dim 0 --radius 4 --linf").report()["results"]["linf_bound"] == 4);

  auto dm = run("diamond --level 2 --tau 5 --verify");
  REQUIRE(dm.status == 0);
  auto dr = dm.report()["results"];
  CHECK(dr["K"] == 57);
  CHECK(dr.contains("boundary_volume"));
  CHECK(dr.contains("rho_diff_cells"));

  CHECK(run("module split --inclusion " + data("nonsplit.json")).report()["results"]["split"] == false);
  CHECK(run("module split --inclusion " + data("split.json")).report()["results"]["split"] == true);
  auto c = run("module cert --q \"t-1\" --s 8");
  REQUIRE(c.status == 0);
  CHECK(c.report()["results"]["pairing"] == json::array({8}));
  auto s = run("module snf --matrix " + data("snf.json")).report()["results"];
  CHECK(s["invariants"] == json::array({"-1 + t", "-1 + t"}));
  CHECK(run("module ext --modules " + data("ext.json")).report()["results"]["invariants"] == json::array({"-1 + t"}));

  auto lp = run("lp --lp " + data("small.lp")).report();
  CHECK(lp["results"]["optimum"] == lp["results"]["dual_optimum"]);
  CHECK(lp["verified"]["strong_duality"] == true);
}

TEST_CASE("--out writes the report to a file") {
  std::string path = "/tmp/qhl_cli_out_test.json";
  auto r = run("--out " + path + " elliptic --matrix " + data("rot.txt"));
  REQUIRE(r.status == 0);
  CHECK(r.out.empty());
  std::ifstream in(path);
  json j = json::parse(in);
  CHECK(j["results"]["elliptic"] == true);
  std::remove(path.c_str());
}
