#pragma once

#include <cstddef>
#include <cstdint>

#include "mmsim/core/types.hpp"
#include "mmsim/lob/book.hpp"

namespace mmsim::env {

enum class StartMode : std::uint8_t { Random, Fixed };

struct EpisodeConfig {
  std::size_t T = 10800;  // decision steps
  std::int64_t dt_ms = 500;
  Volume N = 20;  // total quoted volume per side
  int n_levels = 2;
  int K = 5;             // book levels per side in the state
  std::size_t L = 50;    // feature lookback window
  StartMode start = StartMode::Random;
  std::size_t start_index = 0;  // used when start == Fixed
  std::uint64_t seed = 0;
  lob::QueueModel queue_model = lob::QueueModel::Pessimistic;

  // Throws std::invalid_argument.
  void validate() const;

  bool operator==(const EpisodeConfig&) const = default;
};

}  // namespace mmsim::env
