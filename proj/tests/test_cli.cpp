#include <gtest/gtest.h>

#include <sys/wait.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <string>

namespace {

struct Run {
  int code = -1;
  std::string out;
};

Run run(const std::string& args) {
  Run r;
  const std::string cmd = std::string(DP4_CLI) + " " + args + " 2>&1";
  FILE* f = popen(cmd.c_str(), "r");
  if (!f) return r;
  char buf[4096];
  std::size_t n;
  while ((n = fread(buf, 1, sizeof buf, f)) > 0) r.out.append(buf, n);
  const int st = pclose(f);
  r.code = WIFEXITED(st) ? WEXITSTATUS(st) : -1;
  return r;
}

bool has(const Run& r, const std::string& s) { return r.out.find(s) != std::string::npos; }

std::filesystem::path tmpfile(const std::string& name) {
  return std::filesystem::temp_directory_path() / ("dp4_cli_" + std::to_string(::getpid()) + "_" + name);
}

const char* kD3 = "\"t^3+2*t^2+t+1\"";

}  // namespace

TEST(Cli, Alpha) {
  auto r = run("alpha --p 11");
  EXPECT_EQ(r.code, 0);
  EXPECT_TRUE(has(r, "8"));
  auto two = run("alpha --p 2");
  EXPECT_EQ(two.code, 2);
  EXPECT_TRUE(has(two, "characteristic 2 unsupported"));
}

TEST(Cli, ReferenceValues) {
  auto r7 = run("verify-paper --p 7");
  EXPECT_EQ(r7.code, 0) << r7.out;
  EXPECT_TRUE(has(r7, "t^4+5*t^2+2*t+4"));
  EXPECT_EQ(run("verify-paper --p 11").code, 0);
  EXPECT_EQ(run("verify-paper --p 3").code, 1);
  EXPECT_EQ(run("verify-paper --p 5").code, 2);
}

TEST(Cli, CertifyAndCheck) {
  auto r = run(std::string("certify --p 3 --D ") + kD3);
  EXPECT_EQ(r.code, 0);
  EXPECT_TRUE(has(r, "VALID"));

  const auto path = tmpfile("cert.json");
  EXPECT_EQ(run(std::string("certify --p 3 --D ") + kD3 + " --out " + path.string()).code, 0);
  auto ok = run("check-cert " + path.string());
  EXPECT_EQ(ok.code, 0) << ok.out;

  std::string text;
  {
    std::ifstream in(path);
    text.assign(std::istreambuf_iterator<char>(in), {});
  }
  const auto tampered = tmpfile("tampered.json"), broken = tmpfile("broken.json");
  std::string t = text;
  t.replace(t.find("\"valid\": true"), 13, "\"valid\": false");
  std::ofstream(tampered) << t;
  EXPECT_EQ(run("check-cert " + tampered.string()).code, 1);
  std::ofstream(broken) << text.substr(0, text.size() / 2);
  EXPECT_EQ(run("check-cert " + broken.string()).code, 2);
  for (const auto& p : {path, tampered, broken}) std::filesystem::remove(p);
}

TEST(Cli, SearchIndependentOfJobs) {
  auto a = run("search-d --p 5 --max-degree 5 --limit 5 --jobs 1");
  auto b = run("search-d --p 5 --max-degree 5 --limit 5 --jobs 3");
  EXPECT_EQ(a.code, 0);
  EXPECT_EQ(a.out, b.out);
  EXPECT_TRUE(has(a, "4*t^3+2*t^2+3"));
}

TEST(Cli, Table) {
  auto r = run(std::string("table --p 3 --D ") + kD3);
  EXPECT_EQ(r.code, 0);
  EXPECT_TRUE(has(r, "1/2"));
}

TEST(Cli, UsageErrors) {
  EXPECT_EQ(run("alpha").code, 2);
  EXPECT_EQ(run("bogus").code, 2);
  EXPECT_EQ(run("").code, 2);
  EXPECT_EQ(run("certify --p 5 --D t").code, 2);
}
