#include <gtest/gtest.h>

#include <sys/wait.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>

#include <json.hpp>

#include "wshift/cli.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

struct Run {
  int code = -1;
  std::string out;
};

Run run(const std::string& args) {
  const std::string cmd = std::string(WSHIFT_CLI_PATH) + " " + args + " 2>/dev/null";
  Run r;
  FILE* pipe = popen(cmd.c_str(), "r");
  if (!pipe) return r;
  char buf[4096];
  std::size_t got;
  while ((got = fread(buf, 1, sizeof buf, pipe)) > 0) r.out.append(buf, got);
  const int status = pclose(pipe);
  r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return r;
}

class CliTest : public ::testing::Test {
 protected:
  void SetUp() override {
    std::random_device rd;
    dir_ = fs::temp_directory_path() / ("wshift_cli_" + std::to_string(rd()));
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }

  std::string weight(const std::string& name, const std::string& body) {
    const fs::path p = dir_ / name;
    std::ofstream(p) << body;
    return p.string();
  }

  fs::path dir_;
};

}  // namespace

TEST_F(CliTest, VerifyIdentitiesIsClean) {
  const auto r = run("verify-identities");
  ASSERT_EQ(r.code, 0);
  const auto j = json::parse(r.out);
  EXPECT_EQ(j["schema_version"], wshift::cli::kSchemaVersion);
  EXPECT_FALSE(j.contains("witness"));
}

TEST_F(CliTest, CheckHyperExitCodes) {
  const auto p2 = weight("p2.json", R"({"kind":"power","n":2,"m":2})");
  const auto clean = run("check-hyper --weights " + p2 + " --n 2 --degree 8");
  EXPECT_EQ(clean.code, 0);
  EXPECT_FALSE(json::parse(clean.out).contains("witness"));

  const auto dec = weight("dec.json", R"({"kind":"radial","m":1,"a":{"list":["1","1/2","1/3","1/4"]}})");
  const auto bad = run("check-hyper --weights " + dec + " --n 1 --degree 3");
  EXPECT_EQ(bad.code, 1);
  EXPECT_TRUE(json::parse(bad.out).contains("witness"));
}

TEST_F(CliTest, InputErrorsExitTwo) {
  EXPECT_EQ(run("no-such-command").code, 2);
  EXPECT_EQ(run("check-hyper --weights " + (dir_ / "missing.json").string()).code, 2);
  const auto broken = weight("broken.json", R"({"kind":"power","n":0,"m":2})");
  EXPECT_EQ(run("check-hyper --weights " + broken).code, 2);
  const auto p2 = weight("p2.json", R"({"kind":"power","n":2,"m":2})");
  EXPECT_EQ(run("curvature --weights " + p2 + " --precision-bits 20").code, 2);
  EXPECT_EQ(run("check-hyper --weights " + p2 + " --format yaml").code, 2);
  EXPECT_EQ(run("--help").code, 0);
}

TEST_F(CliTest, NecessaryAtPerturbedIndex) {
  const auto x = weight("x.json", R"({"kind":"perturbed45","n":2,"m":2,"L":2})");
  const auto r = run("necessary --weights " + x + " --n 2 --alpha 2,511");
  EXPECT_EQ(r.code, 1);
  const auto j = json::parse(r.out);
  EXPECT_TRUE(j.contains("witness"));
}

TEST_F(CliTest, SimilarityScanFlagsGrowthAndWritesCsv) {
  const auto h = weight("h.json", R"({"kind":"power","n":1,"m":1})");
  const auto b = weight("b.json", R"({"kind":"power","n":2,"m":1})");
  const auto r = run("similarity-scan --weights " + h + " " + b + " --degree 10 --ray-length 8");
  EXPECT_EQ(r.code, 1);
  EXPECT_TRUE(json::parse(r.out).contains("witness"));

  const auto csv = run("similarity-scan --weights " + h + " " + b + " --degree 4 --ray-length 3 --format csv");
  EXPECT_EQ(csv.code, 1);
  std::istringstream lines(csv.out);
  std::string line;
  std::size_t count = 0;
  while (std::getline(lines, line)) ++count;
  EXPECT_EQ(count, 1u + 5u * 4u);
}

TEST_F(CliTest, CurvatureSingleAndPair) {
  const auto p2 = weight("p2.json", R"({"kind":"power","n":2,"m":2})");
  const auto p1 = weight("p1.json", R"({"kind":"power","n":1,"m":2})");
  const auto single = run("curvature --weights " + p2 + " --grid radial:3x2 --eval-degree 200");
  EXPECT_EQ(single.code, 0);
  const auto bounded = weight("w.json", R"({"kind":"radial","m":2,"a":{"generator":"polynomial","coefficients":["2","1"]}})");
  // log(2 - |w|^2) is bounded but concave, so the witness is a negative eigenvalue.
  const auto concave = run("curvature --weights " + bounded + " " + p2 + " --grid radial:4x2 --eval-degree 200");
  EXPECT_EQ(concave.code, 1);
  const auto cj = json::parse(concave.out);
  EXPECT_EQ(cj["witness"]["kind"], "not-psd");
  EXPECT_EQ(cj["trend"], "bounded-on-grid");
  // -log(1 - |w|^2) is plurisubharmonic but unbounded.
  const auto unbounded = run("curvature --weights " + p2 + " " + p1 + " --grid radial:4x2 --eval-degree 200");
  EXPECT_EQ(unbounded.code, 1);
  EXPECT_EQ(json::parse(unbounded.out)["witness"]["kind"], "unbounded-trend");
}

TEST_F(CliTest, TruncateReport) {
  const auto p2 = weight("p2.json", R"({"kind":"power","n":2,"m":2})");
  const auto r = run("truncate --weights " + p2 + " --degree 4 --n 2");
  EXPECT_EQ(r.code, 0);
  const auto j = json::parse(r.out);
  EXPECT_EQ(j["schema_version"], wshift::cli::kSchemaVersion);
  EXPECT_FALSE(j.contains("witness"));
  // the Bergman-type kernel is not a 3-hypercontraction: d_3(e_1) = 1 - 3/2
  const auto three = run("truncate --weights " + p2 + " --degree 4 --n 3");
  EXPECT_EQ(three.code, 1);
  EXPECT_EQ(json::parse(three.out)["witness"]["defect"], "-1/2");
}

TEST_F(CliTest, OutputIsDeterministicAndWrittenAtomically) {
  const auto x = weight("x.json", R"({"kind":"perturbed45","n":2,"m":2,"L":1})");
  const auto first = run("check-hyper --weights " + x + " --n 2 --degree 70");
  const auto second = run("check-hyper --weights " + x + " --n 2 --degree 70");
  EXPECT_EQ(first.out, second.out);
  EXPECT_EQ(first.code, second.code);

  const fs::path out = dir_ / "report.json";
  const auto written = run("check-hyper --weights " + x + " --n 2 --degree 70 --out " + out.string());
  EXPECT_EQ(written.code, first.code);
  EXPECT_TRUE(written.out.empty());
  std::ifstream in(out);
  std::stringstream content;
  content << in.rdbuf();
  EXPECT_EQ(content.str(), first.out);
  for (const auto& entry : fs::directory_iterator(dir_))
    EXPECT_EQ(entry.path().filename().string().find(".tmp"), std::string::npos);
}
