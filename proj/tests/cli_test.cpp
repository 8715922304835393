#include <gtest/gtest.h>
#include <sys/wait.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <string>

#include <nlohmann/json.hpp>

#include "axd/cli.hpp"

namespace {

using namespace axd;
namespace fs = std::filesystem;

const std::string kSpecs = AXD_SPECS_DIR;
const std::string kCli = AXD_CLI_PATH;

struct Run {
  int code = -1;
  std::string out;
};

Run run(const std::string& args) {
  Run r;
  FILE* p = popen((kCli + " " + args + " 2>/dev/null").c_str(), "r");
  if (!p) return r;
  char buf[4096];
  std::size_t n;
  while ((n = fread(buf, 1, sizeof buf, p)) > 0) r.out.append(buf, n);
  const int status = pclose(p);
  r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return r;
}

std::string spec(const std::string& name) { return kSpecs + "/" + name + ".json"; }

fs::path scratch(const std::string& name) {
  const auto dir = fs::temp_directory_path() / "axd_cli_test";
  fs::create_directories(dir);
  return dir / name;
}

fs::path write_scratch(const std::string& name, const std::string& text) {
  const auto path = scratch(name);
  std::ofstream(path) << text;
  return path;
}

TEST(Cli, ValidateExitCodes) {
  EXPECT_EQ(run("validate " + spec("minimal")).code, 0);
  const auto zero = write_scratch("zero.json", R"({"frs":[{"id":"FR1","nominal":1,"tol_minus":0,"tol_plus":0}],
                                                  "dps":[{"id":"DP1","nominal":1}],"matrix":[[1]]})");
  const auto r = run("validate " + zero.string());
  EXPECT_EQ(r.code, 1);
  EXPECT_NE(r.out.find("zero-width design range"), std::string::npos);
  const auto broken = write_scratch("broken.json", R"({"frs": [)");
  EXPECT_EQ(run("validate " + broken.string()).code, 1);
  EXPECT_EQ(run("validate /nonexistent/spec.json").code, 1);
}

TEST(Cli, ClassifyExitCodes) {
  EXPECT_EQ(run("classify " + spec("tank")).code, 0);
  EXPECT_EQ(run("classify " + spec("decoupled")).code, 0);
  EXPECT_EQ(run("classify " + spec("faucet_two_knob")).code, 2);
  EXPECT_EQ(run("classify " + spec("nonsquare")).code, 3);
  EXPECT_EQ(run("classify " + spec("scheduling")).code, 1);
}

TEST(Cli, ClassifyJsonShape) {
  const auto r = run("classify " + spec("decoupled"));
  const auto j = nlohmann::json::parse(r.out);
  EXPECT_EQ(j["class"], "decoupled");
  ASSERT_EQ(j["sequence"].size(), 3u);
  EXPECT_EQ(j["sequence"][0]["fr"], "FR1");
  EXPECT_EQ(j["sequence"][0]["dp"], "DP1");
}

TEST(Cli, ClassifyTextFirstLine) {
  const auto r = run("classify " + spec("nonsquare") + " --format text");
  EXPECT_EQ(r.out.substr(0, r.out.find('\n')), "degenerate: non-square");
}

TEST(Cli, EpsilonFlagOverridesSpec) {
  const auto near = write_scratch("near.json", R"({"frs":[{"id":"a","nominal":1,"tol_minus":1,"tol_plus":1},
                                                        {"id":"b","nominal":1,"tol_minus":1,"tol_plus":1}],
                                                 "dps":[{"id":"x","nominal":1},{"id":"y","nominal":1}],
                                                 "matrix":[[1,1e-9],[0.5,1]]})");
  EXPECT_EQ(run("classify " + near.string()).code, 2);
  EXPECT_EQ(run("classify " + near.string() + " --epsilon 1e-6").code, 0);
}

TEST(Cli, InfoIsByteIdenticalForTheSameSeed) {
  const auto a = run("info " + spec("faucet_two_knob") + " --seed 42 --samples 100000");
  const auto b = run("info " + spec("faucet_two_knob") + " --seed 42 --samples 100000");
  ASSERT_EQ(a.code, 0);
  EXPECT_EQ(a.out, b.out);
  const auto c = run("info " + spec("faucet_two_knob") + " --seed 43 --samples 100000");
  EXPECT_NE(a.out, c.out);
}

TEST(Cli, InfoJsonCarriesMethodAndInfinity) {
  auto j = nlohmann::json::parse(run("info " + spec("faucet_two_knob")).out);
  EXPECT_EQ(j["info"]["method"], "joint");
  EXPECT_EQ(j["info"]["mc"]["seed"], 42);
  j = nlohmann::json::parse(run("info " + spec("disjoint")).out);
  EXPECT_EQ(j["info"]["method"], "analytic");
  EXPECT_EQ(j["info"]["system_bits"], "inf");
}

TEST(Cli, InfoMethodErrors) {
  EXPECT_EQ(run("info " + spec("faucet_two_knob") + " --method analytic").code, 4);
  EXPECT_EQ(run("info " + spec("faucet_two_knob") + " --method bogus").code, 1);
  EXPECT_EQ(run("info " + spec("decoupled") + " --method joint").code, 0);
}

TEST(Cli, UnknownFlagIsInputError) {
  EXPECT_EQ(run("info " + spec("minimal") + " --frobnicate").code, 1);
  EXPECT_EQ(run("").code, 1);
}

TEST(Cli, SimulateWithoutScenario) {
  const auto r = cli::cmd_simulate(spec("scheduling"));
  EXPECT_EQ(r.exit_code, 1);
  EXPECT_NE(r.err.find("no scenario"), std::string::npos);
  EXPECT_EQ(run("simulate " + spec("scheduling")).code, 1);
}

TEST(Cli, SimulateWritesCsv) {
  const auto csv = scratch("tank.csv");
  fs::remove(csv);
  const auto r = run("simulate " + spec("tank") + " --cycles 250 --out " + csv.string());
  ASSERT_EQ(r.code, 0);
  std::ifstream in(csv);
  std::string header, line;
  std::getline(in, header);
  EXPECT_EQ(header, "level,temperature,mixing");
  std::size_t rows = 0;
  while (std::getline(in, line)) rows += !line.empty();
  EXPECT_EQ(rows, 250u);
  const auto j = nlohmann::json::parse(r.out);
  EXPECT_EQ(j["cycles"], 250);
}

TEST(Cli, SimulateDivergenceExitsFive) {
  auto text = read_file(spec("tank"));
  const std::string from = "\"heater_rate\": 0.5";
  ASSERT_NE(text.find(from), std::string::npos);
  text.replace(text.find(from), from.size(), "\"heater_rate\": 0.0");
  const auto dead = write_scratch("dead_heater.json", text);
  EXPECT_EQ(run("simulate " + dead.string() + " --cycles 5").code, 5);
}

TEST(Cli, InProcessMatchesExecutable) {
  cli::InfoOptions opt;
  opt.seed = 42;
  opt.samples = 20000;
  const auto in_process = cli::cmd_info(spec("decoupled"), opt);
  const auto exe = run("info " + spec("decoupled") + " --seed 42 --samples 20000");
  EXPECT_EQ(in_process.exit_code, exe.code);
  EXPECT_EQ(in_process.out, exe.out);
}

}  // namespace
