#include "mmsim/env/reward.hpp"

#include <cmath>
#include <cstdlib>
#include <stdexcept>

namespace mmsim::env {

std::string_view to_string(PnlMode m) noexcept {
  return m == PnlMode::WealthDelta ? "wealth_delta" : "verbatim";
}

void RewardParams::validate() const {
  if (!(eta >= 0) || !(beta >= 0) || !(C >= 0)) {
    throw std::invalid_argument("reward parameters eta, beta, C must be >= 0");
  }
}

std::int64_t cashflow(std::span<const AgentFill> fills) noexcept {
  std::int64_t cash = 0;
  for (const auto& f : fills) {
    const std::int64_t notional = f.price.value * f.volume;
    cash += f.side == Side::Ask ? notional : -notional;
  }
  return cash;
}

Volume inventory_change(std::span<const AgentFill> fills) noexcept {
  Volume dz = 0;
  for (const auto& f : fills) dz += f.side == Side::Bid ? f.volume : -f.volume;
  return dz;
}

std::int64_t traded_notional(std::span<const AgentFill> fills) noexcept {
  std::int64_t total = 0;
  for (const auto& f : fills) total += f.price.value * f.volume;
  return total;
}

RewardTerms compute_reward(std::span<const AgentFill> fills, Volume z_next, std::int64_t mid_t,
                           std::int64_t mid_next, const RewardParams& params, double tick_size) {
  RewardTerms r;
  r.pnl_raw = cashflow(fills) + (mid_next - mid_t) * z_next;
  if (params.pnl_mode == PnlMode::WealthDelta) r.pnl_raw += mid_t * inventory_change(fills);
  r.pnl = half_ticks_to_price_units(r.pnl_raw, tick_size);
  const double abs_z = static_cast<double>(std::llabs(z_next));
  r.ip = abs_z > params.C ? -params.eta * abs_z : 0.0;
  r.comp = params.beta * half_ticks_to_price_units(traded_notional(fills), tick_size);
  r.total = r.pnl + r.ip + r.comp;
  return r;
}

}  // namespace mmsim::env
