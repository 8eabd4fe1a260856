#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>

#include "mmsim/env/environment.hpp"
#include "mmsim/replay/dataset.hpp"

namespace mmsim::metrics {

inline constexpr std::size_t kDefaultAdverseWindow = 20;

struct EpisodeReport {
  std::string strategy;
  std::uint64_t seed = 0;
  std::size_t steps = 0;
  double epnl = 0.0;  // price units
  double map = 0.0;   // units
  double pnlmap = 0.0;
  std::optional<double> rpt;  // absent without fills on both sides
  std::size_t n_fills = 0;
  double fills_per_1000 = 0.0;
  double adv_ratio = 0.0;
  bool adv_defined = false;
  Volume max_abs_inventory = 0;
  double sharpe = 0.0;
};

// All of these throw EmptyTrace on a trace without steps.
double episode_pnl(const env::EpisodeTrace& trace);
double mean_abs_position(const env::EpisodeTrace& trace);
// Mean quoted market spread over the episode, price units.
double average_spread(const env::EpisodeTrace& trace);
// Per-step pnl mean over its sample standard deviation; 0 when undefined.
double sharpe_ratio(const env::EpisodeTrace& trace);

// (ask-fill VWAP - bid-fill VWAP) / avg_market_spread. Throws NoFillsOnSide.
double return_per_trade(const env::EpisodeTrace& trace, double avg_market_spread);

struct AdverseSelection {
  std::size_t fills = 0;
  std::size_t adverse = 0;
  bool defined = false;  // false when there were no fills
  double ratio() const noexcept {
    return fills ? static_cast<double>(adverse) / static_cast<double>(fills) : 0.0;
  }
};

// A bid fill at p is adverse when the best bid drops below p within the next `window`
// snapshots; an ask fill when the best ask rises above p. This overload looks only at the
// snapshots recorded in the trace, so fills near the end see a shorter window.
AdverseSelection adverse_selection(const env::EpisodeTrace& trace, std::size_t window);
// Same, reading the look-ahead snapshots from `data` (may extend past the episode).
AdverseSelection adverse_selection(const env::EpisodeTrace& trace, std::size_t window,
                                   const replay::Dataset& data);

EpisodeReport evaluate(const env::EpisodeTrace& trace, std::size_t adverse_window = kDefaultAdverseWindow,
                       const replay::Dataset* data = nullptr);

}  // namespace mmsim::metrics
