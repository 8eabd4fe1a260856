#include <gtest/gtest.h>

#include <cstdlib>
#include <fstream>
#include <sstream>

#include "fixtures.hpp"
#include "mmsim/cli/commands.hpp"
#include "mmsim/cli/config.hpp"
#include "mmsim/experts/expert_dataset.hpp"

namespace mmsim::cli {
namespace {

namespace fs = std::filesystem;

struct Run {
  int code = 0;
  std::string out;
  std::string err;
};

Run run(std::vector<std::string> args) {
  args.insert(args.begin(), "mmsim");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out;
  std::ostringstream err;
  const int code = run_cli(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

fs::path write_config(const fs::path& dir, const std::string& extra = "", const std::string& strategy = "ltiic") {
  const fs::path p = dir / "run.ini";
  std::ofstream(p) << "[synth]\nseed = 3\nsteps = 2500\ntrend = 0.02\n\n"
                   << "[strategy]\nid = " << strategy << "\n\n"
                   << "[episode]\nT = 100\nlookback = 5\n\n"
                   << "[run]\nepisodes = 2\nseed = 7\noutput_dir = " << (dir / "out").string() << "\n"
                   << extra;
  return p;
}

class EnvGuard {
 public:
  EnvGuard() { unsetenv("MMSIM_OUTPUT_DIR"); }
  ~EnvGuard() { unsetenv("MMSIM_OUTPUT_DIR"); }
};

TEST(Cli, SynthIsDeterministic) {
  testing::TempDir dir;
  ASSERT_EQ(run({"synth", "--steps", "300", "--seed", "4", "--out", (dir / "a.csv").string()}).code, 0);
  ASSERT_EQ(run({"synth", "--steps", "300", "--seed", "4", "--out", (dir / "b.csv").string()}).code, 0);
  EXPECT_EQ(experts::fnv1a_hex(slurp(dir / "a.csv")), experts::fnv1a_hex(slurp(dir / "b.csv")));
  EXPECT_TRUE(fs::exists(dir / "a.csv.meta") || fs::exists(dir / "a.meta"));
  const auto data = replay::load_dataset(dir / "a.csv");
  EXPECT_EQ(data.size(), 300u);
}

TEST(Cli, UsageErrors) {
  testing::TempDir dir;
  EXPECT_EQ(run({"synth", "--steps", "0", "--out", (dir / "a.csv").string()}).code, kExitUsage);
  EXPECT_EQ(run({}).code, kExitUsage);
  EXPECT_EQ(run({"nope"}).code, kExitUsage);
  EXPECT_EQ(run({"--help"}).code, kExitOk);
}

TEST(Cli, BacktestWritesOutputs) {
  EnvGuard guard;
  testing::TempDir dir;
  const auto r = run({"backtest", "--config", write_config(dir.path()).string()});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_NE(r.out.find("PnLMAP"), std::string::npos);
  for (const char* f : {"summary.csv", "summary.txt", "reports.csv", "config_hash.txt", "traces/episode_0.jsonl",
                        "traces/episode_1.jsonl", "traces/timeseries_0.csv"}) {
    EXPECT_TRUE(fs::exists(dir / "out" / f)) << f;
  }
  const auto rep = run({"report", (dir / "out" / "traces").string()});
  ASSERT_EQ(rep.code, 0) << rep.err;
  EXPECT_NE(rep.out.find("ltiic"), std::string::npos);
}

TEST(Cli, UnknownStrategyListsValidIds) {
  EnvGuard guard;
  testing::TempDir dir;
  const auto r = run({"backtest", "--config", write_config(dir.path(), "", "nope").string()});
  EXPECT_EQ(r.code, kExitData);
  EXPECT_NE(r.err.find("ltiic"), std::string::npos);
  EXPECT_NE(r.err.find("foic"), std::string::npos);
  EXPECT_NE(r.err.find("run.ini:7"), std::string::npos);
}

TEST(Cli, SweepRunsTheGrid) {
  EnvGuard guard;
  testing::TempDir dir;
  const auto r =
      run({"backtest", "--config", write_config(dir.path()).string(), "--sweep", "a=1,2", "--sweep", "b=-0.1,-0.2"});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_NE(r.out.find("4 sweep points"), std::string::npos);
  EXPECT_NE(r.out.find("* "), std::string::npos);
  EXPECT_TRUE(fs::exists(dir / "out" / "sweep.csv"));
  EXPECT_TRUE(fs::exists(dir / "out" / "sweep_3" / "summary.csv"));
  EXPECT_EQ(run({"backtest", "--config", write_config(dir.path()).string(), "--sweep", "a="}).code, kExitUsage);
}

TEST(Cli, ExportExpertVerifies) {
  EnvGuard guard;
  testing::TempDir dir;
  const auto r = run({"export-expert", "--config", write_config(dir.path()).string(), "--verify"});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_NE(r.out.find("verified 200 samples"), std::string::npos);
  EXPECT_TRUE(fs::exists(dir / "out" / "expert_dataset.jsonl"));
}

TEST(Cli, ConfigErrorsExitWithDataCode) {
  EnvGuard guard;
  testing::TempDir dir;
  const auto bad_value = run({"backtest", "--config", write_config(dir.path(), "jobs = many\n").string()});
  EXPECT_EQ(bad_value.code, kExitData);
  EXPECT_NE(bad_value.err.find("run.ini:17"), std::string::npos) << bad_value.err;
  const auto bad_key = run({"backtest", "--config", write_config(dir.path(), "colour = red\n").string()});
  EXPECT_EQ(bad_key.code, kExitData);
  EXPECT_NE(bad_key.err.find("colour"), std::string::npos);
}

TEST(Cli, OutputDirPrecedence) {
  EnvGuard guard;
  testing::TempDir dir;
  const auto cfg = build_run_config(IniFile::load(write_config(dir.path())));
  EXPECT_EQ(resolve_output_dir(cfg, {}), dir / "out");
  setenv("MMSIM_OUTPUT_DIR", (dir / "env").c_str(), 1);
  EXPECT_EQ(resolve_output_dir(cfg, {}), dir / "env");
  EXPECT_EQ(resolve_output_dir(cfg, dir / "flag"), dir / "flag");
}

TEST(Config, IniParsing) {
  std::istringstream ok("# comment\n[strategy]\nid = foic ; trailing\n\n[run]\nepisodes=3\n[synth]\n");
  const auto ini = IniFile::parse(ok, "x.ini");
  EXPECT_EQ(ini.find("strategy", "id")->value, "foic");
  EXPECT_EQ(ini.find("run", "episodes")->line, 6u);
  EXPECT_EQ(build_run_config(ini).episodes, 3u);

  auto line_of = [](const std::string& text) -> std::size_t {
    std::istringstream in(text);
    try {
      IniFile::parse(in, "x.ini");
    } catch (const ConfigError& e) {
      return e.config_line();
    }
    return 0;
  };
  EXPECT_EQ(line_of("id = foic\n"), 1u);
  EXPECT_EQ(line_of("[strategy]\n\n[bogus]\n"), 3u);
  EXPECT_EQ(line_of("[strategy]\nid = a\nid = b\n"), 3u);
  EXPECT_EQ(line_of("[strategy]\njust text\n"), 2u);
  EXPECT_EQ(line_of("[strategy\n"), 1u);
}

TEST(Config, OverridesAndSweeps) {
  EXPECT_EQ(split_override_key("a"), (std::pair<std::string, std::string>{"strategy", "a"}));
  EXPECT_EQ(split_override_key("reward.eta"), (std::pair<std::string, std::string>{"reward", "eta"}));
  const auto [key, values] = parse_sweep("reward.eta = 0.1, 0.2");
  EXPECT_EQ(key, "reward.eta");
  EXPECT_EQ(values, (std::vector<std::string>{"0.1", "0.2"}));
  EXPECT_THROW(parse_sweep("=1"), std::invalid_argument);
  EXPECT_THROW(parse_sweep("a"), std::invalid_argument);
}

TEST(Config, DataAndSynthAreExclusive) {
  std::istringstream none("[strategy]\nid = foic\n");
  EXPECT_THROW(build_run_config(IniFile::parse(none, "x.ini")), ConfigError);
}

TEST(Config, HashTracksContent) {
  std::istringstream a("[synth]\nsteps = 100\n[strategy]\nid = foic\n");
  std::istringstream b("[strategy]\nid = foic\n[synth]\nsteps=100\n");
  std::istringstream c("[synth]\nsteps = 101\n[strategy]\nid = foic\n");
  const auto ha = build_run_config(IniFile::parse(a, "a")).config_hash;
  EXPECT_EQ(ha, build_run_config(IniFile::parse(b, "b")).config_hash);
  EXPECT_NE(ha, build_run_config(IniFile::parse(c, "c")).config_hash);
}

}  // namespace
}  // namespace mmsim::cli
