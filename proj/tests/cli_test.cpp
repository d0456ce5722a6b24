// Runs the envsos binary as a subprocess and checks exit codes and JSON output.

#include <gtest/gtest.h>

#include <array>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sys/wait.h>

#include "json.hpp"

namespace {

using nlohmann::json;
namespace fs = std::filesystem;

struct Run {
  int code = -1;
  std::string out;
};

Run run(const std::string& args) {
  const std::string cmd = std::string(ENVSOS_CLI) + " " + args + " 2>/dev/null";
  Run r;
  FILE* pipe = popen(cmd.c_str(), "r");
  if (!pipe) return r;
  std::array<char, 4096> buf{};
  while (std::size_t n = fread(buf.data(), 1, buf.size(), pipe)) r.out.append(buf.data(), n);
  const int status = pclose(pipe);
  r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return r;
}

std::string sample(const std::string& name) { return std::string(ENVSOS_SAMPLES) + "/" + name; }

fs::path scratch(const std::string& name) {
  const auto dir = fs::temp_directory_path() / "envsos_cli_test";
  fs::create_directories(dir);
  return dir / name;
}

TEST(Cli, NormalizeRewritesAndCanonicalizes) {
  auto r = run("normalize --algebra su2 --expr 'x2*x1'");
  ASSERT_EQ(r.code, 0);
  auto j = json::parse(r.out);
  EXPECT_EQ(j.at("schema_version"), 1);
  EXPECT_EQ(j.at("normal_form"), "-x3 + x1*x2");

  r = run("normalize --expr '-x3^2 + 1 - x1^2 - x2^2'");
  ASSERT_EQ(r.code, 0);
  EXPECT_EQ(json::parse(r.out).at("normal_form"), "1 - x1^2 - x2^2 - x3^2");
}

TEST(Cli, MalformedExpressionIsAnInputError) {
  EXPECT_EQ(run("normalize --expr 'x1**'").code, 2);
  EXPECT_EQ(run("normalize --expr 'x9'").code, 2);
  EXPECT_EQ(run("normalize --algebra nonsense --expr 'x1'").code, 2);
  EXPECT_EQ(run("nonsense").code, 2);
}

TEST(Cli, ScanMembers) {
  auto r = run("scan --alias 'H=-i*x1' --exprs 1 '2-H' --lmax 3");
  ASSERT_EQ(r.code, 0);
  EXPECT_EQ(json::parse(r.out).at("members"), json({"0", "1/2", "1", "3/2", "2"}));
  r = run("scan --exprs 1 --lmax 3");
  ASSERT_EQ(r.code, 0);
  const auto j = json::parse(r.out);
  EXPECT_EQ(j.at("members"), j.at("window"));
  EXPECT_EQ(run("scan --exprs 1 x1").code, 2);
}

TEST(Cli, SosCertificateAndVerify) {
  const auto cert_out = scratch("casimir.json");
  auto r = run("sos --expr '1 - x1^2 - x2^2 - x3^2' --degree 2 --out " + cert_out.string());
  ASSERT_EQ(r.code, 0);
  std::ifstream in(cert_out);
  const auto j = json::parse(in);
  EXPECT_EQ(j.at("status"), "certificate");
  const auto cert_file = scratch("casimir_cert.json");
  std::ofstream(cert_file) << j.at("certificate").dump();
  EXPECT_EQ(run("verify " + cert_file.string()).code, 0);

  auto tampered = j.at("certificate");
  tampered["blocks"][0]["gram"][0][0] = "5";
  const auto bad_file = scratch("tampered.json");
  std::ofstream(bad_file) << tampered.dump();
  EXPECT_EQ(run("verify " + bad_file.string()).code, 1);

  const auto broken = scratch("broken.json");
  std::ofstream(broken) << "{\"mode\": ";
  EXPECT_EQ(run("verify " + broken.string()).code, 2);
}

TEST(Cli, SosNegativeOutcomes) {
  EXPECT_EQ(run("sos --expr '-1' --degree 2").code, 1);
  EXPECT_EQ(run("sos --instance " + sample("su2_planted.json")).code, 0);
  EXPECT_EQ(run("sos --expr 'x1' --degree 2").code, 2);
}

TEST(Cli, CommutativeMotzkin) {
  const std::string motzkin = "'t1^4*t2^2 + t1^2*t2^4 - 3*t1^2*t2^2*t3^2 + t3^6'";
  EXPECT_EQ(run("sos --commutative --nvars 3 --level 0 --expr " + motzkin).code, 1);
  const auto r = run("sos --commutative --nvars 3 --level 1 --expr " + motzkin);
  ASSERT_EQ(r.code, 0);
  const auto cert_file = scratch("motzkin_cert.json");
  std::ofstream(cert_file) << json::parse(r.out).at("certificate").dump();
  EXPECT_EQ(run("verify " + cert_file.string()).code, 0);
}

TEST(Cli, TheoremOutcomes) {
  const auto r = run("theorem " + sample("su2_casimir_squared.json"));
  ASSERT_EQ(r.code, 0);
  const auto j = json::parse(r.out);
  EXPECT_EQ(j.at("transcript").at("outcome"), "found");
  EXPECT_EQ(j.at("transcript").at("n"), 0);
  EXPECT_TRUE(j.at("run_config").contains("resolved_instance"));
  EXPECT_EQ(r.out, run("theorem " + sample("su2_casimir_squared.json")).out);

  EXPECT_EQ(run("theorem " + sample("su2_caps_exhausted.json")).code, 1);
  EXPECT_EQ(run("theorem " + sample("affine_line_noncentral.json")).code, 2);
  EXPECT_EQ(run("theorem /nonexistent.json").code, 2);
}

TEST(Cli, Audit) {
  auto r = run("audit --algebra su2 --context spins=1/2,1");
  ASSERT_EQ(r.code, 0);
  EXPECT_EQ(json::parse(r.out).at("contexts")[0].at("relations").at("r4").at("status"), "pass");
  r = run("audit --algebra su2 --corrupt 1,2,3=2");
  EXPECT_EQ(r.code, 1);
  EXPECT_EQ(json::parse(r.out).at("yxk1").at("status"), "fail");
  EXPECT_EQ(run("audit --context spins=x").code, 2);
}

}  // namespace
