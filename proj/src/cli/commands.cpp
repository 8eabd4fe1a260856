#include "mmsim/cli/commands.hpp"

#include <algorithm>
#include <atomic>
#include <cstdlib>
#include <exception>
#include <fstream>
#include <iomanip>
#include <map>
#include <mutex>
#include <sstream>
#include <thread>

#include <CLI11.hpp>

#include "mmsim/env/trace_io.hpp"
#include "mmsim/experts/expert_dataset.hpp"
#include "mmsim/metrics/summary.hpp"
#include "mmsim/replay/synth.hpp"

namespace mmsim::cli {

namespace fs = std::filesystem;

namespace {

void write_file(const fs::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write " + path.string());
  out << text;
}

std::shared_ptr<const signals::SignalProvider> provider_for(const RunConfig& cfg) {
  return signals::make_provider(cfg.signals);
}

struct BacktestResult {
  std::vector<metrics::EpisodeReport> reports;
  std::vector<metrics::SummaryRow> summary;
};

BacktestResult backtest_one(const RunConfig& cfg, const replay::Dataset& data, const fs::path& dir) {
  std::vector<env::EpisodeTrace> traces;
  BacktestResult res;
  res.reports = run_episodes(cfg, data, &traces);
  fs::create_directories(dir / "traces");
  for (std::size_t e = 0; e < traces.size(); ++e) {
    env::save_trace(traces[e], dir / "traces" / ("episode_" + std::to_string(e) + ".jsonl"));
    write_file(dir / "traces" / ("timeseries_" + std::to_string(e) + ".csv"),
               metrics::timeseries_csv(traces[e]));
  }
  res.summary = metrics::summarize(res.reports);
  write_file(dir / "reports.csv", metrics::reports_csv(res.reports));
  write_file(dir / "summary.csv", metrics::summary_csv(res.summary));
  write_file(dir / "summary.txt", metrics::summary_text(res.summary));
  write_file(dir / "config_hash.txt", cfg.config_hash + "\n");
  return res;
}

struct SweepAxis {
  std::string section;
  std::string key;
  std::vector<std::string> values;
};

int cmd_synth(const replay::SynthConfig& s, const fs::path& out_path, std::ostream& out) {
  const replay::Dataset data = replay::synth_generate(s);
  if (out_path.has_parent_path()) fs::create_directories(out_path.parent_path());
  replay::save_dataset(data, out_path);
  out << "wrote " << data.size() << " snapshots to " << out_path.string() << " (+ "
      << replay::sidecar_path(out_path).string() << ")\n";
  return kExitOk;
}

int cmd_backtest(const fs::path& config, const std::vector<std::string>& sweeps, std::size_t jobs,
                 const fs::path& out_flag, std::ostream& out) {
  const IniFile base = IniFile::load(config);

  std::vector<SweepAxis> axes;
  for (const auto& text : sweeps) {
    auto [key, values] = parse_sweep(text);
    auto [section, name] = split_override_key(key);
    axes.push_back({section, name, values});
  }

  std::vector<std::vector<std::size_t>> combos{{}};
  for (const auto& axis : axes) {
    std::vector<std::vector<std::size_t>> next;
    for (const auto& c : combos) {
      for (std::size_t i = 0; i < axis.values.size(); ++i) {
        auto x = c;
        x.push_back(i);
        next.push_back(std::move(x));
      }
    }
    combos = std::move(next);
  }

  const fs::path root = resolve_output_dir(build_run_config(base), out_flag);
  std::map<std::string, replay::Dataset> data_cache;
  struct SweepRow {
    std::string assignment;
    fs::path dir;
    metrics::SummaryRow row;
  };
  std::vector<SweepRow> rows;

  for (std::size_t j = 0; j < combos.size(); ++j) {
    IniFile ini = base;
    std::string assignment;
    for (std::size_t k = 0; k < axes.size(); ++k) {
      const auto& v = axes[k].values[combos[j][k]];
      ini.set(axes[k].section, axes[k].key, v);
      assignment += (assignment.empty() ? "" : " ") + axes[k].section + "." + axes[k].key + "=" + v;
    }
    RunConfig cfg = build_run_config(ini);
    if (jobs > 0) cfg.jobs = jobs;

    std::string data_key;
    if (cfg.data_path) {
      data_key = cfg.data_path->string();
    } else {
      const auto& sy = *cfg.synth;
      std::ostringstream k;
      k << std::setprecision(17) << sy.seed << ' ' << sy.steps << ' ' << sy.tick_size << ' ' << sy.base_price << ' '
        << sy.trend << ' ' << sy.vol_intensity << ' ' << sy.volatility << ' ' << sy.instrument;
      data_key = k.str();
    }
    auto it = data_cache.find(data_key);
    if (it == data_cache.end()) it = data_cache.emplace(data_key, load_run_data(cfg)).first;

    const fs::path dir = axes.empty() ? root : root / ("sweep_" + std::to_string(j));
    const BacktestResult res = backtest_one(cfg, it->second, dir);
    if (axes.empty()) {
      out << metrics::summary_text(res.summary);
      out << "config hash " << cfg.config_hash << "; outputs in " << dir.string() << "\n";
      return kExitOk;
    }
    rows.push_back({assignment, dir, res.summary.front()});
  }

  std::size_t best = 0;
  for (std::size_t j = 1; j < rows.size(); ++j) {
    if (rows[j].row.pnlmap.mean > rows[best].row.pnlmap.mean) best = j;
  }
  std::ostringstream csv;
  csv << "index,assignment,dir,EPnL[10^3]_mean,MAP[unit]_mean,PnLMAP_mean,best\n" << std::setprecision(10);
  for (std::size_t j = 0; j < rows.size(); ++j) {
    const auto& r = rows[j];
    csv << j << ",\"" << r.assignment << "\"," << r.dir.string() << ',' << r.row.epnl_k.mean << ','
        << r.row.map.mean << ',' << r.row.pnlmap.mean << ',' << (j == best ? 1 : 0) << '\n';
    out << (j == best ? "* " : "  ") << r.assignment << "  EPnL[10^3]=" << r.row.epnl_k.mean
        << "  MAP=" << r.row.map.mean << "  PnLMAP=" << r.row.pnlmap.mean << '\n';
  }
  fs::create_directories(root);
  write_file(root / "sweep.csv", csv.str());
  out << rows.size() << " sweep points; best by PnLMAP: " << rows[best].assignment << "\n";
  return kExitOk;
}

int cmd_export(const fs::path& config, const fs::path& out_flag, const fs::path& out_dir_flag, bool verify,
               std::ostream& out) {
  const IniFile ini = IniFile::load(config);
  const RunConfig cfg = build_run_config(ini);
  const replay::Dataset data = load_run_data(cfg);
  fs::path path = out_flag;
  if (path.empty()) path = resolve_output_dir(cfg, out_dir_flag) / "expert_dataset.jsonl";
  if (path.has_parent_path()) fs::create_directories(path.parent_path());

  experts::ExportRequest req;
  req.data = &data;
  req.episode = cfg.episode;
  req.reward = cfg.reward;
  req.provider = provider_for(cfg);
  req.episodes = cfg.episodes;
  req.seed = cfg.seed;
  req.config_hash = cfg.config_hash;
  auto policy = experts::make_policy(cfg.strategy, cfg.episode);
  const std::size_t n = experts::export_expert_dataset(req, *policy, path);
  out << "exported " << n << " samples to " << path.string() << "\n";
  if (verify) {
    const auto ds = experts::load_expert_dataset(path);
    out << "verified " << experts::verify_expert_dataset(ds) << " samples\n";
  }
  return kExitOk;
}

int cmd_report(const std::vector<std::string>& inputs, const fs::path& data_path, std::size_t window,
               const fs::path& out_path, std::ostream& out) {
  std::vector<fs::path> files;
  for (const auto& in : inputs) {
    const fs::path p = in;
    if (fs::is_directory(p)) {
      std::vector<fs::path> found;
      for (const auto& e : fs::recursive_directory_iterator(p)) {
        if (e.is_regular_file() && e.path().extension() == ".jsonl") found.push_back(e.path());
      }
      std::sort(found.begin(), found.end());
      files.insert(files.end(), found.begin(), found.end());
    } else {
      files.push_back(p);
    }
  }
  if (files.empty()) throw Error("no trace files found");
  std::optional<replay::Dataset> data;
  if (!data_path.empty()) data = replay::load_dataset(data_path);
  std::vector<metrics::EpisodeReport> reports;
  for (const auto& f : files) {
    const auto trace = env::load_trace(f);
    reports.push_back(metrics::evaluate(trace, window, data ? &*data : nullptr));
  }
  const auto rows = metrics::summarize(reports);
  out << metrics::summary_text(rows);
  if (!out_path.empty()) {
    if (out_path.has_parent_path()) fs::create_directories(out_path.parent_path());
    write_file(out_path, metrics::summary_csv(rows));
  }
  return kExitOk;
}

}  // namespace

replay::Dataset load_run_data(const RunConfig& cfg) {
  if (cfg.data_path) return replay::load_dataset(*cfg.data_path);
  return replay::synth_generate(*cfg.synth);
}

fs::path resolve_output_dir(const RunConfig& cfg, const fs::path& flag) {
  if (!flag.empty()) return flag;
  if (const char* env_dir = std::getenv("MMSIM_OUTPUT_DIR"); env_dir && *env_dir) return env_dir;
  return cfg.output_dir;
}

std::vector<metrics::EpisodeReport> run_episodes(const RunConfig& cfg, const replay::Dataset& data,
                                                 std::vector<env::EpisodeTrace>* traces) {
  const auto provider = provider_for(cfg);
  std::vector<metrics::EpisodeReport> reports(cfg.episodes);
  std::vector<env::EpisodeTrace> kept(traces ? cfg.episodes : 0);
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mu;

  auto worker = [&] {
    try {
      env::MarketMakingEnv environment(data, cfg.episode, cfg.reward, provider);
      environment.set_trace_tags(cfg.strategy.id, cfg.config_hash);
      auto policy = experts::make_policy(cfg.strategy, cfg.episode);
      for (std::size_t e = next++; e < cfg.episodes; e = next++) {
        env::EpisodeTrace trace = env::run_episode(environment, *policy, cfg.seed + e);
        reports[e] = metrics::evaluate(trace, cfg.adv_window, &data);
        if (traces) kept[e] = std::move(trace);
      }
    } catch (...) {
      std::lock_guard lock(failure_mu);
      if (!failure) failure = std::current_exception();
      next = cfg.episodes;
    }
  };

  const std::size_t n_threads = std::max<std::size_t>(1, std::min(cfg.jobs, cfg.episodes));
  if (n_threads == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (std::size_t i = 0; i < n_threads; ++i) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
  }
  if (failure) std::rethrow_exception(failure);
  if (traces) *traces = std::move(kept);
  return reports;
}

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Limit-order-book market-making simulator", "mmsim"};
  app.require_subcommand(1);

  replay::SynthConfig synth;
  std::string synth_out;
  auto* synth_cmd = app.add_subcommand("synth", "Generate a synthetic depth-5 dataset (CSV + .meta)");
  synth_cmd->add_option("--steps", synth.steps, "Number of snapshots")->check(CLI::PositiveNumber);
  synth_cmd->add_option("--seed", synth.seed, "Random seed");
  synth_cmd->add_option("--out", synth_out, "Output CSV path")->required();
  synth_cmd->add_option("--tick-size", synth.tick_size, "Tick size")->check(CLI::PositiveNumber);
  synth_cmd->add_option("--base-price", synth.base_price, "Starting price");
  synth_cmd->add_option("--trend", synth.trend, "Mid drift, ticks per step");
  synth_cmd->add_option("--volatility", synth.volatility, "Mid noise, ticks per sqrt(step)")
      ->check(CLI::NonNegativeNumber);
  synth_cmd->add_option("--vol-intensity", synth.vol_intensity, "Scale of level volumes and trading")
      ->check(CLI::NonNegativeNumber);
  synth_cmd->add_option("--instrument", synth.instrument, "Instrument name");

  std::string bt_config;
  std::vector<std::string> sweeps;
  std::size_t jobs = 0;
  std::string bt_out;
  auto* bt_cmd = app.add_subcommand("backtest", "Run episodes of a strategy and write traces and reports");
  bt_cmd->add_option("--config", bt_config, "Run config file")->required()->check(CLI::ExistingFile);
  bt_cmd->add_option("--sweep", sweeps,
                     "Grid axis key=v1,v2 (key is a [strategy] key or section.key); repeatable");
  bt_cmd->add_option("--jobs", jobs, "Worker threads (overrides [run] jobs)")->check(CLI::PositiveNumber);
  bt_cmd->add_option("--out-dir", bt_out, "Output directory (overrides MMSIM_OUTPUT_DIR and [run] output_dir)");

  std::string ex_config;
  std::string ex_out;
  std::string ex_out_dir;
  bool verify = false;
  auto* ex_cmd = app.add_subcommand("export-expert", "Record (observation, action) samples of a strategy");
  ex_cmd->add_option("--config", ex_config, "Run config file")->required()->check(CLI::ExistingFile);
  ex_cmd->add_option("--out", ex_out, "Output file (default <output dir>/expert_dataset.jsonl)");
  ex_cmd->add_option("--out-dir", ex_out_dir, "Output directory when --out is not given");
  ex_cmd->add_flag("--verify", verify, "Reload the file and validate every sample");

  std::vector<std::string> rp_inputs;
  std::string rp_data;
  std::size_t rp_window = metrics::kDefaultAdverseWindow;
  std::string rp_out;
  auto* rp_cmd = app.add_subcommand("report", "Summarise trace files");
  rp_cmd->add_option("traces", rp_inputs, "Trace files or directories")->required();
  rp_cmd->add_option("--data", rp_data, "Dataset for the adverse-selection look-ahead");
  rp_cmd->add_option("--adv-window", rp_window, "Adverse-selection window, steps")->check(CLI::PositiveNumber);
  rp_cmd->add_option("--out", rp_out, "Write the summary CSV here");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n";
    const auto* failed = app.get_subcommands().empty() ? &app : app.get_subcommands().front();
    err << failed->help();
    return kExitUsage;
  }

  try {
    if (*synth_cmd) return cmd_synth(synth, synth_out, out);
    if (*bt_cmd) return cmd_backtest(bt_config, sweeps, jobs, bt_out, out);
    if (*ex_cmd) return cmd_export(ex_config, ex_out, ex_out_dir, verify, out);
    if (*rp_cmd) return cmd_report(rp_inputs, rp_data, rp_window, rp_out, out);
  } catch (const std::invalid_argument& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitData;
  }
  return kExitUsage;
}

}  // namespace mmsim::cli
