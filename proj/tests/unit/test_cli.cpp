#include <gtest/gtest.h>

#include <sys/wait.h>

#include <array>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <string>

#include <nlohmann/json.hpp>

namespace {

struct Run {
  int code = -1;
  std::string out;
};

Run run(const std::string& args) {
  const std::string cmd = std::string(BERGLAB_CLI) + " " + args + " 2>/dev/null";
  Run r;
  FILE* p = popen(cmd.c_str(), "r");
  if (!p) return r;
  std::array<char, 4096> buf;
  std::size_t n;
  while ((n = fread(buf.data(), 1, buf.size(), p)) > 0) r.out.append(buf.data(), n);
  const int status = pclose(p);
  r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return r;
}

std::string write_config(const std::string& name, const std::string& text) {
  const auto path = std::filesystem::temp_directory_path() / ("berglab_cli_" + name + ".json");
  std::ofstream(path) << text;
  return path.string();
}

const char* kAtom = R"({"scenario":{"id":"atom","p":2,"q":2,"measure":{"type":"atomic","points":[[0,0]],"masses":[1]}}})";

}  // namespace

TEST(Cli, EmbedAtomAtOrigin) {
  const auto r = run("carleson embed --config " + write_config("atom", kAtom));
  ASSERT_EQ(r.code, 0);
  const auto j = nlohmann::json::parse(r.out);
  EXPECT_NEAR(j["value"].get<double>(), 1.0, 0.02);
}

TEST(Cli, EmptyMeasure) {
  const auto cfg = write_config("empty", R"({"scenario":{"p":3,"q":2,"measure":{"type":"atomic","points":[],"masses":[]}}})");
  for (const char* cmd : {"carleson embed", "carleson muhat", "carleson psi", "toeplitz norm"}) {
    const auto r = run(std::string(cmd) + " --config " + cfg);
    EXPECT_EQ(r.code, 0) << cmd;
    const auto j = nlohmann::json::parse(r.out);
    const auto& v = j.contains("value") ? j["value"] : j["estimate"]["value"];
    EXPECT_EQ(v.get<double>(), 0.0) << cmd;
  }
}

TEST(Cli, DeterministicJson) {
  const auto cfg = write_config("det", R"({"scenario":{"p":2,"q":3,"budget":300,"measure":{"type":"atomic","points":[[0.3,0.2],[-0.5,0.1]],"masses":[1,2]}}})");
  const auto a = run("toeplitz norm --seed 5 --config " + cfg);
  const auto b = run("toeplitz norm --seed 5 --config " + cfg);
  ASSERT_EQ(a.code, 0);
  EXPECT_EQ(a.out, b.out);
}

TEST(Cli, VanishCsv) {
  const auto r = run("carleson vanish --format csv --config " + write_config("atom2", kAtom));
  ASSERT_EQ(r.code, 0);
  EXPECT_EQ(r.out.substr(0, 8), "x,value\n");
}

TEST(Cli, ArtifactsWritten) {
  const auto dir = std::filesystem::temp_directory_path() / "berglab_cli_out";
  std::filesystem::remove_all(dir);
  const auto r = run("carleson m0 --out " + dir.string() + " --config " + write_config("atom3", kAtom));
  ASSERT_EQ(r.code, 0);
  EXPECT_TRUE(std::filesystem::exists(dir / "m0.json"));
}

TEST(Cli, KernelValidate) {
  const auto r = run("kernel validate");
  ASSERT_EQ(r.code, 0);
}

TEST(Cli, ConfigErrors) {
  EXPECT_EQ(run("carleson m0 --config /nonexistent.json").code, 2);
  EXPECT_EQ(run("carleson m0 --config " + write_config("bad", R"({"scenario":{"bogus":true}})")).code, 2);
  EXPECT_EQ(run("carleson nothing").code, 2);
  EXPECT_EQ(run("carleson lambda --config " + write_config("pq", kAtom)).code, 2);
}
