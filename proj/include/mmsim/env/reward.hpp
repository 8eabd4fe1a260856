#pragma once

#include <cstdint>
#include <span>
#include <string_view>

#include "mmsim/core/types.hpp"

namespace mmsim::env {

// WealthDelta adds mid_t * dz to the literal cashflow + revaluation term so that episode sums
// equal the change in marked-to-mid wealth.
enum class PnlMode : std::uint8_t { WealthDelta, Verbatim };

std::string_view to_string(PnlMode m) noexcept;

struct RewardParams {
  double eta = 0.0;   // inventory penalty weight
  double beta = 0.0;  // compensation rate on traded notional
  double C = 0.0;     // inventory threshold for the penalty
  PnlMode pnl_mode = PnlMode::WealthDelta;

  // Throws std::invalid_argument.
  void validate() const;

  bool operator==(const RewardParams&) const = default;
};

// An execution seen from the agent's side.
struct AgentFill {
  Side side = Side::Bid;  // Bid: the agent bought
  HalfTickPrice price;
  Volume volume = 0;
  bool passive = true;  // the agent's resting order was hit

  bool operator==(const AgentFill&) const = default;
};

// pnl_raw is exact, in half-tick x volume units. The doubles are in price units.
struct RewardTerms {
  std::int64_t pnl_raw = 0;
  double pnl = 0.0;
  double ip = 0.0;
  double comp = 0.0;
  double total = 0.0;

  bool operator==(const RewardTerms&) const = default;
};

// Signed cash from the fills: sells add price x volume, buys subtract it. Half ticks x volume.
std::int64_t cashflow(std::span<const AgentFill> fills) noexcept;
// Signed inventory change from the fills.
Volume inventory_change(std::span<const AgentFill> fills) noexcept;
// Sum of price x volume over all fills, half ticks x volume.
std::int64_t traded_notional(std::span<const AgentFill> fills) noexcept;

// mid_t and mid_next in half ticks.
RewardTerms compute_reward(std::span<const AgentFill> fills, Volume z_next, std::int64_t mid_t,
                           std::int64_t mid_next, const RewardParams& params, double tick_size);

}  // namespace mmsim::env
