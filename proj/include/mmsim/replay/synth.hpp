#pragma once

#include <cstddef>
#include <cstdint>
#include <string>

#include "mmsim/replay/dataset.hpp"

namespace mmsim::replay {

struct SynthConfig {
  std::uint64_t seed = 7;
  std::size_t steps = 1000;  // number of snapshots
  double tick_size = 1.0;
  double base_price = 1000.0;
  double trend = 0.0;          // latent mid drift, ticks per step
  double vol_intensity = 1.0;  // scales level volumes and trade activity
  double volatility = 0.3;     // latent mid noise, ticks per sqrt(step)
  std::string instrument = "SYN";
};

// Deterministic for a given config. The latent mid is a drifting Gaussian walk; the visible
// book is five contiguous levels per side around it with a 1-3 tick spread. Interval trades
// are the walks that the price moves imply plus Poisson flow at unchanged best levels, so
// the aggregated volume and turnover are consistent with the level changes.
Dataset synth_generate(const SynthConfig& cfg);

}  // namespace mmsim::replay
