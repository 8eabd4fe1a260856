#pragma once

#include <filesystem>
#include <iosfwd>
#include <vector>

#include "mmsim/cli/config.hpp"
#include "mmsim/env/environment.hpp"
#include "mmsim/metrics/metrics.hpp"
#include "mmsim/replay/dataset.hpp"

namespace mmsim::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 2;
inline constexpr int kExitData = 3;

// Entry point shared by the executable and the tests.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

// Loads [data] or generates [synth].
replay::Dataset load_run_data(const RunConfig& cfg);

// Runs cfg.episodes episodes with seeds cfg.seed + e on up to cfg.jobs threads. Results are
// ordered by episode index regardless of scheduling. `traces` receives the traces if given.
std::vector<metrics::EpisodeReport> run_episodes(const RunConfig& cfg, const replay::Dataset& data,
                                                 std::vector<env::EpisodeTrace>* traces = nullptr);

// Output directory after applying MMSIM_OUTPUT_DIR (overridden in turn by an explicit flag).
std::filesystem::path resolve_output_dir(const RunConfig& cfg, const std::filesystem::path& flag);

}  // namespace mmsim::cli
