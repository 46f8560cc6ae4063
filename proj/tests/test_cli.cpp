// End-to-end tests driving the installed command-line binary as a subprocess.

#include <sys/wait.h>

#include <cmath>
#include <cstdlib>
#include <fstream>
#include <numbers>
#include <sstream>
#include <string>

#include <gtest/gtest.h>

#include <json.hpp>

namespace {

using json = nlohmann::ordered_json;

std::string temp_path(const std::string& name) {
  return ::testing::TempDir() + "spaceform_cli_" + name;
}

void write_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  ASSERT_TRUE(out) << path;
  out << text;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  EXPECT_TRUE(in) << path;
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

// Runs the CLI with `args`, captures stdout into `stdout_path` when given,
// and returns the exit code.
int run_cli(const std::string& args, const std::string& stdout_path = "") {
  std::string cmd = std::string("\"") + SPACEFORM_CLI_PATH + "\" " + args;
  if (!stdout_path.empty()) cmd += " > \"" + stdout_path + "\"";
  cmd += " 2> /dev/null";
  const int status = std::system(cmd.c_str());
  if (status == -1 || !WIFEXITED(status)) return -1;
  return WEXITSTATUS(status);
}

json parse_file(const std::string& path) { return json::parse(read_file(path)); }

}  // namespace

TEST(Cli, HelpExitsZeroAndBadUsageExitsTwo) {
  EXPECT_EQ(run_cli("--help"), 0);
  EXPECT_EQ(run_cli("project --help"), 0);
  EXPECT_EQ(run_cli("no-such-command"), 2);
  EXPECT_EQ(run_cli(""), 2);
  EXPECT_EQ(run_cli("verify --model Q"), 2);
  EXPECT_EQ(run_cli("verify --trials 0"), 2);
}

TEST(Cli, VerifyWritesByteIdenticalReportsAcrossParallelism) {
  const std::string f1 = temp_path("verify_p1.jsonl");
  const std::string f2 = temp_path("verify_p4.jsonl");
  const std::string base =
      "verify --model S --n 3 --p 2 --q 1 --trials 12 --seed 5 --n-probe 8 ";
  EXPECT_EQ(run_cli(base + "--parallelism 1 --output \"" + f1 + "\""), 0);
  EXPECT_EQ(run_cli(base + "--parallelism 4 --output \"" + f2 + "\""), 0);

  const std::string text1 = read_file(f1);
  EXPECT_EQ(text1, read_file(f2));

  // Header plus one line per trial, all passing.
  std::istringstream lines(text1);
  std::string line;
  ASSERT_TRUE(std::getline(lines, line));
  const json header = json::parse(line);
  EXPECT_EQ(header.at("version"), 1);
  EXPECT_EQ(header.at("model"), "S");
  int count = 0;
  while (std::getline(lines, line)) {
    const json rep = json::parse(line);
    EXPECT_TRUE(rep.at("pass").get<bool>());
    EXPECT_LE(rep.at("residual").get<double>(), 1e-7);
    ++count;
  }
  EXPECT_EQ(count, 12);
}

TEST(Cli, ProjectComputesTheEquatorFoot) {
  const std::string in = temp_path("project_in.json");
  const std::string out = temp_path("project_out.json");
  const double r = std::sqrt(0.5);
  write_file(in, json{{"pspace",
                       {{"model", "S"}, {"n", 2}, {"p", 1},
                        {"span", {{1.0, 0.0, 0.0}, {0.0, 1.0, 0.0}}}}},
                      {"point", {{"model", "S"}, {"n", 2}, {"v", {r, 0.0, r}}}}}
                     .dump());
  ASSERT_EQ(run_cli("project --input \"" + in + "\"", out), 0);
  const json res = parse_file(out);
  EXPECT_NEAR(res.at("dist").get<double>(), std::numbers::pi / 4.0, 1e-12);
  EXPECT_NEAR(res.at("foot").at("v")[0].get<double>(), 1.0, 1e-12);
  EXPECT_FALSE(res.at("low_confidence").get<bool>());
}

TEST(Cli, ProjectReportsNonUniqueFootAsExitOne) {
  const std::string in = temp_path("pole_in.json");
  const std::string out = temp_path("pole_out.json");
  write_file(in, json{{"pspace",
                       {{"model", "S"}, {"n", 2}, {"p", 1},
                        {"span", {{1.0, 0.0, 0.0}, {0.0, 1.0, 0.0}}}}},
                      {"point", {{"model", "S"}, {"n", 2}, {"v", {0.0, 0.0, 1.0}}}}}
                     .dump());
  ASSERT_EQ(run_cli("project --input \"" + in + "\"", out), 1);
  EXPECT_EQ(parse_file(out).at("error"), "NonUniqueProjection");
}

TEST(Cli, MalformedInputIsExitTwo) {
  const std::string in = temp_path("broken.json");
  write_file(in, "{ this is not json");
  EXPECT_EQ(run_cli("project --input \"" + in + "\""), 2);

  const std::string missing = temp_path("missing_field.json");
  write_file(missing, json{{"point", {{"model", "S"}, {"n", 2}, {"v", {1.0, 0.0, 0.0}}}}}.dump());
  EXPECT_EQ(run_cli("project --input \"" + missing + "\""), 2);

  const std::string off = temp_path("off_manifold.json");
  write_file(off, json{{"x", {{"model", "S"}, {"n", 2}, {"v", {2.0, 0.0, 0.0}}}},
                       {"y", {{"model", "S"}, {"n", 2}, {"v", {1.0, 0.0, 0.0}}}}}
                      .dump());
  EXPECT_EQ(run_cli("distance --input \"" + off + "\""), 2);
}

TEST(Cli, DistanceMatchesTheHyperbolicFixture) {
  const std::string in = temp_path("distance_in.json");
  const std::string out = temp_path("distance_out.json");
  write_file(in,
             json{{"x", {{"model", "H"}, {"n", 2}, {"v", {1.0, 0.0, 0.0}}}},
                  {"y", {{"model", "H"}, {"n", 2},
                         {"v", {std::cosh(1.0), std::sinh(1.0), 0.0}}}}}
                 .dump());
  ASSERT_EQ(run_cli("distance --input \"" + in + "\"", out), 0);
  EXPECT_NEAR(json::parse(read_file(out)).get<double>(), 1.0, 1e-12);
}

TEST(Cli, QuadrupleCheckPassesAndRejects) {
  const auto point = [](double a, double b, double c) {
    return json{{"model", "E"}, {"n", 3}, {"v", {a, b, c}}};
  };
  const std::string good = temp_path("quad_good.json");
  const std::string out = temp_path("quad_out.json");
  write_file(good, json{{"x", point(0, 1, 1)},
                        {"y", point(0, 1, 0)},
                        {"z", point(0, 0, 0)},
                        {"u", point(1, 0, 0)}}
                       .dump());
  ASSERT_EQ(run_cli("gupta --input \"" + good + "\"", out), 0);
  const json rep = parse_file(out);
  EXPECT_TRUE(rep.at("pass").get<bool>());
  EXPECT_LE(rep.at("residual").get<double>(), 1e-12);

  // A violated hypothesis is rejected as bad input, not a failed conclusion.
  const std::string bad = temp_path("quad_bad.json");
  write_file(bad, json{{"x", point(0, 1, 1)},
                       {"y", point(0, 1, 0)},
                       {"z", point(0, 0, 0)},
                       {"u", point(1, 1, 0)}}
                      .dump());
  EXPECT_EQ(run_cli("gupta --input \"" + bad + "\""), 2);
}

TEST(Cli, CounterexampleRunReportsNonRightTriangles) {
  const std::string out = temp_path("counterexample.jsonl");
  ASSERT_EQ(run_cli("counterexample --trials 40 --seed 3 --min-fraction 0.5 --output \"" +
                        out + "\""),
            0);
  std::istringstream lines(read_file(out));
  std::string line;
  int count = 0;
  json last;
  while (std::getline(lines, line)) {
    last = json::parse(line);
    ++count;
  }
  EXPECT_EQ(count, 42);  // header + 40 trials + summary
  EXPECT_GE(last.at("non_right_fraction").get<double>(), 0.5);
  EXPECT_LE(last.at("max_hyp_residual").get<double>(), 1e-7);
}
