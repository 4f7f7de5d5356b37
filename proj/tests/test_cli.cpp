#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <nlohmann/json.hpp>
#include <regex>
#include <sstream>

#include "mdisc/cli/commands.hpp"
#include "mdisc/cli/manifest.hpp"

namespace fs = std::filesystem;
using namespace mdisc::cli;

namespace {

struct Result {
  int status;
  std::string out;
  std::string err;
};

Result run_cli(const std::vector<std::string>& args) {
  std::ostringstream out, err;
  const int status = run(args, out, err);
  return {status, out.str(), err.str()};
}

std::vector<std::string> lines(const std::string& s) {
  std::vector<std::string> v;
  std::istringstream in(s);
  for (std::string l; std::getline(in, l);) v.push_back(l);
  return v;
}

std::vector<std::string> data_rows(const std::string& csv) {
  std::vector<std::string> v;
  bool header = false;
  for (const auto& l : lines(csv)) {
    if (l.rfind("#", 0) == 0) continue;
    if (!header) {
      header = true;
      continue;
    }
    v.push_back(l);
  }
  return v;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

class CliFiles : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() /
           ("mdisc_cli_" + std::string(::testing::UnitTest::GetInstance()->current_test_info()->name()));
    fs::remove_all(dir_);
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }
  std::string path(const std::string& name) const { return (dir_ / name).string(); }
  fs::path dir_;
};

}  // namespace

TEST(Format, TwelveSignificantDigits) {
  EXPECT_EQ(format_number(0.1), "0.1");
  EXPECT_EQ(format_number(0.6854101966249684), "0.685410196625");
  EXPECT_EQ(format_number(std::nan("")), "nan");
  EXPECT_EQ(format_exact(0.1), "0.1");
  EXPECT_EQ(std::stod(format_exact(0.6854101966249684)), 0.6854101966249684);
}

TEST(Grid, ParsesInclusiveRanges) {
  EXPECT_EQ(parse_grid("0:0.5:0.01").size(), 51u);
  EXPECT_EQ(parse_grid("0:0:1").size(), 1u);
  EXPECT_EQ(parse_grid("1:0.1:-0.1").size(), 10u);
  EXPECT_THROW(parse_grid("0:1"), std::invalid_argument);
  EXPECT_THROW(parse_grid("0:1:-0.1"), std::invalid_argument);
  EXPECT_THROW(parse_grid("a:1:0.1"), std::invalid_argument);
}

TEST(Theta, SnapsRoundedQuarterPi) {
  EXPECT_EQ(resolve_theta(0.7854, false), std::numbers::pi / 4);
  EXPECT_EQ(resolve_theta(45.0, true), std::numbers::pi / 4);
  EXPECT_EQ(resolve_theta(0.5236, false), 0.5236);
  EXPECT_EQ(resolve_theta(2.0, false), 2.0);
}

TEST(Curves, ExampleTable) {
  const Result r = run_cli({"curves", "--theta", "0.6283", "--pi-grid", "0:0.5:0.01", "--format", "csv"});
  ASSERT_EQ(r.status, kExitOk) << r.err;
  const auto ls = lines(r.out);
  EXPECT_TRUE(std::regex_match(ls.at(0), std::regex("# mdisc [0-9.]+ manifest=[0-9a-f]{16}")));
  EXPECT_EQ(ls.at(1), "p_inc,ps_entangled,ps_single_optimal,ps_single_pure,pts_entangled,pts_single,advantage");
  const auto rows = data_rows(r.out);
  ASSERT_EQ(rows.size(), 51u);
  for (const auto& row : rows) {
    const auto last = row.substr(row.rfind(',') + 1);
    EXPECT_GE(std::stod(last), 0.0) << row;
  }
  EXPECT_NE(r.err.find("\"command\": \"curves\""), std::string::npos);
}

TEST(Curves, QuarterPiSingleRow) {
  const Result r = run_cli({"curves", "--theta", "0.7854", "--pi-grid", "0:0:1"});
  ASSERT_EQ(r.status, kExitOk);
  const auto rows = data_rows(r.out);
  ASSERT_EQ(rows.size(), 1u);
  EXPECT_EQ(rows[0].substr(0, 4), "0,1,");
}

TEST(Curves, DegreesFlag) {
  const Result a = run_cli({"curves", "--theta", "0.7854", "--pi-grid", "0:0:1"});
  const Result b = run_cli({"curves", "--theta", "45", "--degrees", "--pi-grid", "0:0:1"});
  EXPECT_EQ(a.out, b.out);
}

TEST(Curves, DomainErrorExitStatus) {
  const Result r = run_cli({"curves", "--theta", "2.0"});
  EXPECT_EQ(r.status, kExitDomain);
  EXPECT_NE(r.err.find("theta outside [0, pi/4]"), std::string::npos);
  EXPECT_EQ(std::count(r.err.begin(), r.err.end(), '\n'), 1);
}

TEST(Curves, JsonFormat) {
  const Result r = run_cli({"curves", "--theta", "0.5", "--pi-grid", "0:0.2:0.1", "--format", "json"});
  ASSERT_EQ(r.status, kExitOk);
  const auto j = nlohmann::json::parse(r.out);
  EXPECT_EQ(j["rows"].size(), 3u);
  EXPECT_TRUE(j["rows"][0].contains("single_strategy"));
}

TEST(Cli, ParseErrorsAreValidationFailures) {
  EXPECT_EQ(run_cli({}).status, kExitDomain);
  EXPECT_EQ(run_cli({"bogus"}).status, kExitDomain);
  EXPECT_EQ(run_cli({"curves"}).status, kExitDomain);
  EXPECT_EQ(run_cli({"curves", "--theta", "x"}).status, kExitDomain);
  EXPECT_EQ(run_cli({"curves", "--theta", "0.3", "--format", "xml"}).status, kExitDomain);
  EXPECT_EQ(run_cli({"--help"}).status, kExitOk);
}

TEST(Hull, ExampleRuns) {
  const Result r = run_cli({"hull", "--c", "0.9", "--samples", "10000", "--seed", "7"});
  ASSERT_EQ(r.status, kExitOk) << r.err;
  EXPECT_NE(r.out.find("\nT,0.758287970135,"), std::string::npos);
  EXPECT_NE(r.out.find("pass=true"), std::string::npos);

  const Result d = run_cli({"hull", "--c", "1.0", "--samples", "1000"});
  ASSERT_EQ(d.status, kExitOk);
  EXPECT_NE(d.out.find("degenerate=true"), std::string::npos);

  const Result h = run_cli({"hull", "--c", "0.5", "--samples", "2000"});
  ASSERT_EQ(h.status, kExitOk);
  EXPECT_NE(h.out.find("\nhull,0,0.933012701892\n"), std::string::npos);
}

TEST(Convexity, DefaultGridPasses) {
  const Result r = run_cli({"convexity"});
  ASSERT_EQ(r.status, kExitOk) << r.err;
  EXPECT_NE(r.out.find("pass=true"), std::string::npos);
  for (const auto& row : data_rows(r.out)) {
    if (row.find(",convex") != std::string::npos) {
      const auto parts = row.substr(row.find(',', row.find(',') + 1) + 1);
      EXPECT_GE(std::stod(parts), -1e-9) << row;
    }
  }
}

TEST(Convexity, ConcavePointValue) {
  const Result r =
      run_cli({"convexity", "--c-grid", "0.5:0.5:1", "--pi-grid", "0.5:0.5:1", "--branch", "concave"});
  ASSERT_EQ(r.status, kExitOk) << r.err;
  EXPECT_NE(r.out.find("0.5,0.5,-3.46410161514,"), std::string::npos);
}

TEST(Convexity, BoundaryRowsAreLabelled) {
  const Result r = run_cli({"convexity", "--c-grid", "0.5:0.5:1", "--pi-grid", "0.5515:0.6215:0.01"});
  ASSERT_EQ(r.status, kExitOk) << r.err;
  EXPECT_NE(r.out.find(",convex\n"), std::string::npos);
  EXPECT_NE(r.out.find(",concave\n"), std::string::npos);
  EXPECT_NE(r.out.find(",boundary\n"), std::string::npos);
}

TEST(Oracle, ExampleGap) {
  const Result r = run_cli({"oracle", "--theta", "0.5236", "--pi", "0.3", "--method", "ascent", "--tol", "1e-4"});
  ASSERT_EQ(r.status, kExitOk) << r.err;
  const auto j = nlohmann::json::parse(r.out);
  EXPECT_LE(j["gap"].get<double>(), 1e-4);
  EXPECT_TRUE(j["converged"].get<bool>());
  EXPECT_EQ(j["blocks"]["H_M"].size(), 2u);
  EXPECT_EQ(j["restart_statistics"]["restart_success"].size(), 20u);
}

TEST(Oracle, OrthogonalCaseAndDomainError) {
  const Result r = run_cli({"oracle", "--theta", "0.7854", "--pi", "0"});
  ASSERT_EQ(r.status, kExitOk) << r.err;
  EXPECT_NEAR(nlohmann::json::parse(r.out)["p_success"].get<double>(), 1.0, 1e-12);
  EXPECT_EQ(run_cli({"oracle", "--theta", "0.5236", "--pi", "0.9"}).status, kExitDomain);
}

TEST_F(CliFiles, SimulateUnambiguousIsReproducible) {
  const std::vector<std::string> base{"simulate", "--mode", "unambiguous", "--t-grid", "0:1:0.1",
                                      "--trials", "1000000", "--seed", "42"};
  auto a = base;
  a.insert(a.end(), {"--out", path("a.csv")});
  auto b = base;
  b.insert(b.end(), {"--out", path("b.csv")});
  ASSERT_EQ(run_cli(a).status, kExitOk);
  ASSERT_EQ(run_cli(b).status, kExitOk);
  const std::string csv = slurp(path("a.csv"));
  EXPECT_EQ(csv, slurp(path("b.csv")));
  EXPECT_EQ(data_rows(csv).size(), 11u);
  EXPECT_NE(csv.find("error_coincidences=0"), std::string::npos);
  EXPECT_TRUE(fs::exists(path("a.csv.manifest.json")));
}

TEST_F(CliFiles, NoisePresetCeiling) {
  const Result r = run_cli({"simulate", "--mode", "unambiguous", "--trials", "1000000", "--seed", "42", "--noise",
                            "preset_paperlike", "--format", "json"});
  ASSERT_EQ(r.status, kExitOk) << r.err;
  const auto j = nlohmann::json::parse(r.out);
  EXPECT_LE(j["summary"]["max_p_error"].get<double>(), 0.032);
  EXPECT_EQ(j["rows"].size(), 11u);
}

TEST_F(CliFiles, NoiseConfigFile) {
  std::ofstream(path("n.cfg")) << "singlet_visibility = 0.9\nbogus = 1\n";
  EXPECT_EQ(run_cli({"simulate", "--noise", path("n.cfg"), "--trials", "100"}).status, kExitDomain);
}

TEST_F(CliFiles, ReplayReproducesEveryCommand) {
  const std::vector<std::vector<std::string>> commands{
      {"curves", "--theta", "0.3"},
      {"hull", "--c", "0.7", "--samples", "3000", "--seed", "3"},
      {"convexity", "--c-grid", "0.2:0.8:0.3", "--format", "json"},
      {"oracle", "--theta", "0.4", "--pi", "0.2", "--restarts", "5"},
      {"simulate", "--theta-list", "10,20", "--degrees", "--t-grid", "1:0.5:-0.25", "--trials", "5000"},
  };
  int k = 0;
  for (auto args : commands) {
    const std::string out = path("run" + std::to_string(k) + ".out");
    const std::string again = path("again" + std::to_string(k) + ".out");
    args.insert(args.end(), {"--out", out});
    ASSERT_EQ(run_cli(args).status, kExitOk) << args[0];
    const Result rep = run_cli({"replay", "--manifest", out + ".manifest.json", "--out", again});
    EXPECT_EQ(rep.status, kExitOk) << rep.err;
    EXPECT_EQ(slurp(out), slurp(again)) << args[0];
    ++k;
  }
}

TEST_F(CliFiles, ReplayDetectsTamperedChecksum) {
  ASSERT_EQ(run_cli({"curves", "--theta", "0.3", "--out", path("c.csv")}).status, kExitOk);
  auto j = nlohmann::json::parse(slurp(path("c.csv.manifest.json")));
  j["outputs"][0]["fnv1a64"] = "0000000000000000";
  std::ofstream(path("bad.json")) << j.dump();
  EXPECT_EQ(run_cli({"replay", "--manifest", path("bad.json"), "--out", path("d.csv")}).status, kExitThreshold);
  EXPECT_EQ(run_cli({"replay", "--manifest", path("missing.json")}).status, kExitDomain);
}

TEST(Manifest, ChecksumIgnoresOutputs) {
  RunManifest m;
  m.command = "curves";
  m.params = {{"theta", "0.3"}};
  m.version = "1";
  const auto before = m.checksum();
  m.outputs.push_back({"x", 1, 2});
  EXPECT_EQ(m.checksum(), before);
  const RunManifest back = RunManifest::from_json(m.to_json());
  EXPECT_EQ(back.checksum(), before);
  EXPECT_EQ(back.outputs.at(0).checksum, 1u);
  EXPECT_EQ(fnv1a64(""), 0xcbf29ce484222325ULL);
  EXPECT_EQ(fnv1a64("a"), 0xaf63dc4c8601ec8cULL);
}
