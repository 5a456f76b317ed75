#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <sys/wait.h>

#include <array>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <string>

#include "conelyap/io.hpp"

namespace {

struct Run {
  int code;
  std::string out;
};

const std::string kFix = CONELYAP_FIXTURE_DIR;

Run run(const std::string& args, const std::string& env = "") {
  const std::string cmd = env + " " + CONELYAP_CLI + " " + args + " 2>/dev/null";
  FILE* p = popen(cmd.c_str(), "r");
  REQUIRE(p != nullptr);
  std::string out;
  std::array<char, 4096> buf{};
  std::size_t n;
  while ((n = fread(buf.data(), 1, buf.size(), p)) > 0) out.append(buf.data(), n);
  const int status = pclose(p);
  return {WIFEXITED(status) ? WEXITSTATUS(status) : -1, out};
}

conelyap::io::Json run_json(const std::string& args, int expected_code) {
  const Run r = run(args + " --format json");
  CHECK(r.code == expected_code);
  auto j = conelyap::io::parse_json_text(r.out, "cli output");
  CHECK(j.begin().key() == "schema");
  CHECK(j["schema"] == "conelyap/1");
  return j;
}

std::string fx(const std::string& name) { return kFix + "/" + name; }

std::string write_tmp(const std::string& name, const std::string& body) {
  const std::string path = std::string(CONELYAP_TMP_DIR) + "/" + name;
  std::ofstream(path) << body;
  return path;
}

}  // namespace

TEST_CASE("analyze panels of the reference fixtures") {
  auto ex3 = run_json("analyze " + fx("ex3.json"), 0);
  CHECK(ex3["panel"]["domain_condition"] == false);
  CHECK(ex3["panel"]["transversality"]["pos"] == false);
  CHECK(ex3["panel"]["necessary"] == true);
  CHECK(ex3["panel"]["rint"] == false);
  const auto f = ex3["cones"]["F"]["cone"];
  CHECK(f["lineality"].size() == 1);
  CHECK(f["generators"].size() == 0);

  auto lin = run_json("analyze " + fx("linear_half.json"), 0);
  CHECK(lin["linear"] == true);
  CHECK(lin["panel"]["domain_condition"] == true);
  CHECK(lin["panel"]["transversality"]["pos"] == true);
  CHECK(lin["panel"]["transversality"]["neg"] == true);
  CHECK(lin["panel"]["necessary"] == true);
  CHECK(lin["panel"]["rint"] == true);

  auto ex2 = run_json("analyze " + fx("ex2.json"), 0);
  CHECK(ex2["panel"]["domain_condition"] == false);
  CHECK(ex2["cones"]["F"]["cone"] == ex2["cones"]["dom"]);
}

TEST_CASE("verdict exit codes") {
  const std::string v = fx("V_half_identity.json");
  auto holds = run_json("lyapunov " + fx("ex3.json") + " " + v + " strong 0.25", 0);
  CHECK(holds["report"]["verdict"] == "holds_sampled");
  CHECK(std::abs(holds["report"]["gamma_margin"].get<double>() - 0.25) < 1e-9);
  auto fails = run_json("lyapunov " + fx("ex3.json") + " " + v + " strong 0.2", 1);
  CHECK(fails["report"]["verdict"] == "fails");
  auto ray = run_json("lyapunov " + fx("ex3.json") + " " + v + " --mode goebel_strong --gamma 0.5", 1);
  CHECK(ray["report"]["witness"].contains("ray"));
  auto hyp = run_json("duality " + fx("ex3.json") + " " + v + " 0.25 2", 2);
  CHECK(hyp["report"]["verdict"] == "hypothesis_not_met");
  const std::string expanding = write_tmp("expanding.json", R"({"A": [[2, 0], [0, 2]]})");
  auto unknown = run_json("oracle stabilizable " + expanding + " --x0 1,1", 3);
  CHECK(unknown["verdict"] == "unknown");
  auto query = run_json("lyapunov --query " + fx("ex3_strong_query.json"), 0);
  CHECK(query["report"]["name"] == "lyapunov_strong");
}

TEST_CASE("usage and input failures") {
  CHECK(run("").code == 64);
  CHECK(run("frobnicate").code == 64);
  CHECK(run("lyapunov " + fx("ex3.json") + " " + fx("V_half_identity.json") + " --gamma 1.5").code == 64);
  CHECK(run("lyapunov " + fx("ex3.json") + " " + fx("V_half_identity.json") + " --mode medium").code == 65);
  CHECK(run("simulate " + fx("ex3.json") + " --x0 1,zero").code == 64);
  CHECK(run("simulate " + fx("ex3.json") + " --x0 1,0,0").code == 64);
  CHECK(run("duality " + fx("ex3.json") + " " + fx("V_half_identity.json") + " 0.5 3").code == 64);
  CHECK(run("analyze /nonexistent/process.json").code == 66);
  const std::string bad = write_tmp("bad.json", "{\"n\": 2,\n");
  CHECK(run("analyze " + bad).code == 65);
  const std::string wrong = write_tmp("wrong.json", R"({"n": 2, "grpah": {"dim": 4}})");
  CHECK(run("analyze " + wrong).code == 65);
}

TEST_CASE("simulate reports the trajectory") {
  auto j = run_json("simulate " + fx("ex3.json") + " --x0 1,0 --steps 12 --policy min_V", 0);
  REQUIRE(j["states"].size() == 13);
  for (std::size_t k = 0; k < 13; ++k) CHECK(j["states"][k]["norm"].get<double>() == doctest::Approx(std::ldexp(1.0, -int(k))));
  auto dead = run_json("simulate " + fx("ex3.json") + " --x0 0,-1 --steps 3", 1);
  CHECK(dead["completed"] == false);
}

TEST_CASE("json output is deterministic across runs and thread counts") {
  const std::string args = "duality " + fx("strict_diag.json") + " " + fx("V_half_identity.json") +
                           " 0.25 2 --seed 11 --samples 300 --format json";
  const Run a = run(args, "CONELYAP_THREADS=1");
  const Run b = run(args, "CONELYAP_THREADS=4");
  const Run c = run(args);
  CHECK(a.code == 0);
  CHECK(a.out == b.out);
  CHECK(a.out == c.out);
  const Run d = run(args + " --seed 12");
  CHECK(d.out != a.out);
}

TEST_CASE("report written to a file") {
  const std::string path = std::string(CONELYAP_TMP_DIR) + "/report.json";
  const Run r = run("analyze " + fx("linear_diag.json") + " --format json -o " + path);
  CHECK(r.code == 0);
  CHECK(r.out.empty());
  auto j = conelyap::io::load_json_file(path);
  CHECK(j["command"] == "analyze");
  CHECK(run("analyze " + fx("linear_diag.json") + " -o /nonexistent/dir/out.txt").code == 73);
}
