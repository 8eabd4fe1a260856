#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <memory>
#include <string>
#include <vector>

#include "mmsim/env/environment.hpp"
#include "mmsim/env/policy.hpp"

namespace mmsim::experts {

inline constexpr int kExpertSchemaVersion = 1;

struct ExpertSample {
  std::size_t episode = 0;
  std::size_t step = 0;
  env::Observation observation;
  env::Action action;
};

struct ExpertManifest {
  int schema_version = kExpertSchemaVersion;
  std::string config_hash;
  std::string expert;
  std::uint64_t seed = 0;
  std::size_t episodes = 0;
  int n_levels = 2;
  env::FeatureSchema schema;
};

struct ExpertDataset {
  ExpertManifest manifest;
  std::vector<ExpertSample> samples;
};

struct ExportRequest {
  const replay::Dataset* data = nullptr;
  env::EpisodeConfig episode;
  env::RewardParams reward;
  std::shared_ptr<const signals::SignalProvider> provider;
  std::size_t episodes = 1;
  std::uint64_t seed = 0;  // episode e runs with seed + e
  std::string config_hash;
};

// Line-delimited text: the manifest object on the first line, then one sample per line
// {"e", "t", "market", "signals", "private", "action"} where action is
// [m*, delta*, phi_bid..., phi_ask...]. Returns the number of samples written.
std::size_t export_expert_dataset(const ExportRequest& req, env::Policy& expert,
                                  const std::filesystem::path& path);

// Throws VersionMismatch for an unknown schema version and ParseError / SchemaError for
// malformed lines.
ExpertDataset load_expert_dataset(const std::filesystem::path& path);

// Checks every sample's shapes, signal values, queue values and action invariants.
// Throws SchemaError naming the first bad sample; returns the sample count.
std::size_t verify_expert_dataset(const ExpertDataset& ds);

// FNV-1a, rendered as 16 hex digits.
std::string fnv1a_hex(const std::string& text);

}  // namespace mmsim::experts
