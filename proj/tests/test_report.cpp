#include <gtest/gtest.h>

#include <sys/wait.h>

#include <array>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "oracles.hpp"
#include "sponge/report.hpp"

using namespace sponge;

namespace {

struct Run {
  int status = -1;
  std::string out;
};

Run run_cli(const std::string& args) {
  const std::string cmd = std::string(SPONGE_CLI_PATH) + " " + args + " 2>/dev/null";
  Run r;
  FILE* pipe = popen(cmd.c_str(), "r");
  if (!pipe) return r;
  std::array<char, 4096> buf{};
  std::size_t n;
  while ((n = fread(buf.data(), 1, buf.size(), pipe)) > 0) r.out.append(buf.data(), n);
  const int raw = pclose(pipe);
  r.status = WIFEXITED(raw) ? WEXITSTATUS(raw) : -1;
  return r;
}

Run run_cli_stderr(const std::string& args) {
  const std::string cmd = std::string(SPONGE_CLI_PATH) + " " + args + " 2>&1 >/dev/null";
  Run r;
  FILE* pipe = popen(cmd.c_str(), "r");
  std::array<char, 4096> buf{};
  std::size_t n;
  while ((n = fread(buf.data(), 1, buf.size(), pipe)) > 0) r.out.append(buf.data(), n);
  const int raw = pclose(pipe);
  r.status = WIFEXITED(raw) ? WEXITSTATUS(raw) : -1;
  return r;
}

std::string fixture_arg(const char* name) { return oracle::data_path(name); }

std::string read_text(const std::string& path) {
  std::ifstream in(path);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

}  // namespace

TEST(Cli, ClassifyFixtures) {
  const auto lg5 = run_cli("classify " + fixture_arg("lg5.ifs") + " --format json");
  ASSERT_EQ(lg5.status, 0);
  const auto j5 = nlohmann::json::parse(lg5.out);
  EXPECT_EQ(j5["payload"]["uniformly_disconnected"], true);
  EXPECT_EQ(j5["payload"]["conformal_dim_class"], "Zero");
  EXPECT_TRUE(j5["payload"]["witness"].is_null());
  EXPECT_EQ(j5["payload"]["fiber_report"].size(), 3u);

  const auto lg4 = run_cli("classify " + fixture_arg("lg4.ifs"));
  ASSERT_EQ(lg4.status, 0);
  const auto j4 = nlohmann::json::parse(lg4.out);
  EXPECT_EQ(j4["payload"]["conformal_dim_class"], "ExactlyOne");
  EXPECT_EQ(j4["payload"]["witness"]["rank"], 0);
}

TEST(Cli, ExitCodes) {
  EXPECT_EQ(run_cli("validate " + fixture_arg("bad.ifs")).status, 2);
  EXPECT_EQ(run_cli("classify " + fixture_arg("bad.ifs")).status, 2);
  EXPECT_EQ(run_cli("components " + fixture_arg("lg5.ifs") + " --depth 6 --cap 1000").status, 3);
  EXPECT_EQ(run_cli("frobnicate " + fixture_arg("lg5.ifs")).status, 1);
  EXPECT_EQ(run_cli("classify /nonexistent/file.ifs").status, 1);
  EXPECT_EQ(run_cli("components " + fixture_arg("lg5.ifs") + " --delta 0").status, 1);
  EXPECT_EQ(run_cli("components " + fixture_arg("lg5.ifs") + " --delta x/y").status, 1);
  EXPECT_EQ(run_cli("cantor " + fixture_arg("lg5.ifs")).status, 2);
  EXPECT_EQ(run_cli("all " + fixture_arg("lg5.ifs") + " --format csv").status, 1);
  EXPECT_EQ(run_cli("validate " + fixture_arg("lg5.ifs")).status, 0);
}

TEST(Cli, ParseErrorsAreUsageErrorsWithModuleTag) {
  const std::string path = ::testing::TempDir() + "sponge_bad_parse.ifs";
  std::ofstream(path) << "dim 2\nmap 3/2 0 ; 1/6 0\n";
  const auto r = run_cli_stderr("validate " + path);
  EXPECT_EQ(r.status, 1);
  EXPECT_NE(r.out.find("sponge: parse: line 2, column 5"), std::string::npos) << r.out;
  const auto v = run_cli_stderr("validate " + fixture_arg("bad.ifs"));
  EXPECT_NE(v.out.find("sponge: "), std::string::npos);
}

TEST(Cli, ComponentsCsvSchema) {
  const auto r = run_cli("components " + fixture_arg("lg5.ifs") + " --depth 2 --delta 1/8 --delta 1/16 --format csv");
  ASSERT_EQ(r.status, 0);
  std::istringstream lines(r.out);
  std::string header, row;
  std::getline(lines, header);
  EXPECT_EQ(header, "delta,num_components,max_diam_sq,max_diam_decimal,ratio_decimal");
  std::getline(lines, row);
  EXPECT_EQ(row.rfind("1/8,", 0), 0u) << row;
}

TEST(Cli, RationalsAreStrings) {
  const auto r = run_cli("cantor " + fixture_arg("lg4.ifs") + " --check tree --depth 2");
  ASSERT_EQ(r.status, 0);
  const auto j = nlohmann::json::parse(r.out);
  EXPECT_EQ(j["payload"]["L"], "613/73");
  EXPECT_NE(r.out.find("\"613/73\""), std::string::npos);
  EXPECT_EQ(j["payload"]["tree"]["additivity_holds"], true);
}

TEST(Cli, JsonIsDeterministicAcrossRunsAndWorkers) {
  for (const char* sub : {"classify", "components", "cantor"}) {
    const char* fx = std::string(sub) == "cantor" ? "lg4.ifs" : "lg5.ifs";
    const std::string base = std::string(sub) + " " + fixture_arg(fx) + " --depth 3 --no-timing";
    const auto a = run_cli(base), b = run_cli(base), c = run_cli(base + " --workers 8");
    ASSERT_EQ(a.status, 0) << sub;
    EXPECT_EQ(a.out, b.out) << sub;
    EXPECT_EQ(a.out, c.out) << sub;
  }
}

TEST(Cli, DigestIgnoresTiming) {
  const std::string base = "classify " + fixture_arg("lg5.ifs");
  const auto a = nlohmann::json::parse(run_cli(base).out);
  const auto b = nlohmann::json::parse(run_cli(base + " --no-timing").out);
  EXPECT_TRUE(a.contains("timing_ms"));
  EXPECT_FALSE(b.contains("timing_ms"));
  EXPECT_EQ(a["report_digest"], b["report_digest"]);
  EXPECT_EQ(a["input_digest"], "sha256:" + sha256_hex(read_text(fixture_arg("lg5.ifs"))));
}

TEST(Cli, TextAndOtherSubcommands) {
  EXPECT_EQ(run_cli("tree " + fixture_arg("lg5.ifs") + " --format text").status, 0);
  EXPECT_EQ(run_cli("premoran " + fixture_arg("lg5.ifs") + " --word 1,0").status, 0);
  const auto sq = run_cli("square " + fixture_arg("lg5.ifs") + " --word 0 --periodic --delta 1/10");
  ASSERT_EQ(sq.status, 0);
  const auto j = nlohmann::json::parse(sq.out);
  EXPECT_EQ(j["payload"]["squares"][0]["depths"], nlohmann::json::array({3, 2}));
  EXPECT_EQ(run_cli("square " + fixture_arg("lg5.ifs") + " --word 0 --delta 1/10").status, 1);
  EXPECT_EQ(run_cli("all " + fixture_arg("lg4.ifs") + " --depth 2").status, 0);
}

TEST(Report, DocumentShape) {
  RunConfig cfg;
  cfg.subcommand = "classify";
  cfg.input_path = "lg5.ifs";
  cfg.timing = false;
  const Report r = run_subcommand(cfg, read_text(fixture_arg("lg5.ifs")));
  const auto doc = report_document(r);
  for (const char* key : {"tool", "version", "subcommand", "input_digest", "config", "payload", "report_digest"}) {
    EXPECT_TRUE(doc.contains(key)) << key;
  }
  EXPECT_EQ(doc["tool"], kToolName);
  EXPECT_EQ(emit(r, OutputFormat::Json), emit(r, OutputFormat::Json));
  EXPECT_EQ(sha256_hex("abc"), "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
}
