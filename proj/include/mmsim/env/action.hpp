#pragma once

#include <vector>

#include "mmsim/core/types.hpp"
#include "mmsim/env/config.hpp"
#include "mmsim/replay/simulator.hpp"

namespace mmsim::env {

inline constexpr double kMinMidOffset = -10.0;
inline constexpr double kMaxMidOffset = 10.0;
inline constexpr double kMinSpread = 1.0;
inline constexpr double kMaxSpread = 20.0;

struct Action {
  double m_star = 0.0;      // quote mid offset from p_ref, ticks
  double delta_star = 1.0;  // total quoted spread, ticks
  std::vector<double> phi_bid;  // level weights, nearest level first
  std::vector<double> phi_ask;

  bool operator==(const Action&) const = default;
};

struct Quote {
  HalfTickPrice price;
  Volume volume = 0;

  bool operator==(const Quote&) const = default;
};

// Desired resting volume per price. Bids descend, asks ascend; zero-volume levels are omitted.
struct QuoteSet {
  std::vector<Quote> bids;
  std::vector<Quote> asks;

  bool operator==(const QuoteSet&) const = default;
};

// Throws std::invalid_argument unless m*, delta* are finite, delta* >= 0, both weight vectors
// have n_levels non-negative finite entries and each sums to 1 (or is all zero, which
// withdraws that side).
void validate_action(const Action& a, int n_levels);

// m* and delta* are clamped into range. Weights are normalised; a side whose weights are
// all zero (or not finite) quotes nothing.
QuoteSet decode_action(const Action& a, const EpisodeConfig& cfg, HalfTickPrice p_ref);

// Integer split of `total` proportional to `weights` (largest remainder, ties to the lower
// index). All-zero weights give all zeros.
std::vector<Volume> apportion(Volume total, const std::vector<double>& weights);

struct OrderDiff {
  std::vector<replay::AgentCancel> cancels;
  std::vector<replay::AgentPlacement> placements;

  bool empty() const noexcept { return cancels.empty() && placements.empty(); }
};

// Minimal changes that turn `current` into `desired`: excess volume at a price is cancelled
// from the newest orders first, a shortfall becomes one new order, untouched prices keep
// their orders.
OrderDiff diff_orders(const std::vector<replay::RestingOrder>& current, const QuoteSet& desired);

}  // namespace mmsim::env
