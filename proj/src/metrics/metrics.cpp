#include "mmsim/metrics/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>

#include "mmsim/core/errors.hpp"

namespace mmsim::metrics {

namespace {

void require_steps(const env::EpisodeTrace& trace) {
  if (trace.steps.empty()) throw EmptyTrace();
}

template <class BestAt>
AdverseSelection count_adverse(const env::EpisodeTrace& trace, std::size_t window, BestAt best_at) {
  AdverseSelection out;
  for (const auto& s : trace.steps) {
    for (const auto& f : s.fills) {
      ++out.fills;
      for (std::size_t k = 1; k <= window; ++k) {
        const auto best = best_at(s, k, f.side);
        if (!best) break;
        if (f.side == Side::Bid ? best->value < f.price.value : best->value > f.price.value) {
          ++out.adverse;
          break;
        }
      }
    }
  }
  out.defined = out.fills > 0;
  return out;
}

}  // namespace

double episode_pnl(const env::EpisodeTrace& trace) {
  require_steps(trace);
  double sum = 0.0;
  for (const auto& s : trace.steps) sum += s.reward.pnl;
  return sum;
}

double mean_abs_position(const env::EpisodeTrace& trace) {
  require_steps(trace);
  double total = 0.0;
  std::size_t active = 0;
  for (const auto& s : trace.steps) {
    if (s.z_after != 0) {
      total += static_cast<double>(std::llabs(s.z_after));
      ++active;
    }
  }
  return active ? total / static_cast<double>(active) : 0.0;
}

double average_spread(const env::EpisodeTrace& trace) {
  require_steps(trace);
  double sum = 0.0;
  for (const auto& s : trace.steps) sum += static_cast<double>(s.spread);
  return sum / static_cast<double>(trace.steps.size()) * trace.meta.tick_size / 2.0;
}

double sharpe_ratio(const env::EpisodeTrace& trace) {
  require_steps(trace);
  const auto n = static_cast<double>(trace.steps.size());
  if (trace.steps.size() < 2) return 0.0;
  double mean = 0.0;
  for (const auto& s : trace.steps) mean += s.reward.pnl;
  mean /= n;
  double ss = 0.0;
  for (const auto& s : trace.steps) ss += (s.reward.pnl - mean) * (s.reward.pnl - mean);
  const double sd = std::sqrt(ss / (n - 1.0));
  return sd > 0.0 ? mean / sd : 0.0;
}

double return_per_trade(const env::EpisodeTrace& trace, double avg_market_spread) {
  double ask_notional = 0.0;
  double ask_volume = 0.0;
  double bid_notional = 0.0;
  double bid_volume = 0.0;
  for (const auto& s : trace.steps) {
    for (const auto& f : s.fills) {
      const double p = to_price(f.price, trace.meta.tick_size);
      const auto v = static_cast<double>(f.volume);
      if (f.side == Side::Ask) {
        ask_notional += p * v;
        ask_volume += v;
      } else {
        bid_notional += p * v;
        bid_volume += v;
      }
    }
  }
  if (ask_volume <= 0.0 || bid_volume <= 0.0) throw NoFillsOnSide();
  if (!(avg_market_spread > 0.0)) throw std::invalid_argument("average spread must be positive");
  return (ask_notional / ask_volume - bid_notional / bid_volume) / avg_market_spread;
}

AdverseSelection adverse_selection(const env::EpisodeTrace& trace, std::size_t window) {
  const auto& steps = trace.steps;
  return count_adverse(trace, window,
                       [&](const env::StepRecord& s, std::size_t k, Side side) -> std::optional<HalfTickPrice> {
                         const std::size_t i = s.step + k - 1;
                         if (i >= steps.size()) return std::nullopt;
                         return side == Side::Bid ? steps[i].best_bid_next : steps[i].best_ask_next;
                       });
}

AdverseSelection adverse_selection(const env::EpisodeTrace& trace, std::size_t window,
                                   const replay::Dataset& data) {
  return count_adverse(trace, window,
                       [&](const env::StepRecord& s, std::size_t k, Side side) -> std::optional<HalfTickPrice> {
                         const std::size_t i = s.t + k;
                         if (i >= data.size()) return std::nullopt;
                         return side == Side::Bid ? data[i].best_bid() : data[i].best_ask();
                       });
}

EpisodeReport evaluate(const env::EpisodeTrace& trace, std::size_t adverse_window,
                       const replay::Dataset* data) {
  require_steps(trace);
  EpisodeReport r;
  r.strategy = trace.meta.strategy;
  r.seed = trace.meta.config.seed;
  r.steps = trace.steps.size();
  r.epnl = episode_pnl(trace);
  r.map = mean_abs_position(trace);
  r.pnlmap = r.map > 0.0 ? r.epnl / r.map : 0.0;
  try {
    r.rpt = return_per_trade(trace, average_spread(trace));
  } catch (const NoFillsOnSide&) {
    r.rpt.reset();
  }
  for (const auto& s : trace.steps) {
    r.n_fills += s.fills.size();
    r.max_abs_inventory = std::max<Volume>(r.max_abs_inventory, std::llabs(s.z_after));
  }
  r.fills_per_1000 = 1000.0 * static_cast<double>(r.n_fills) / static_cast<double>(r.steps);
  const AdverseSelection adv =
      data ? adverse_selection(trace, adverse_window, *data) : adverse_selection(trace, adverse_window);
  r.adv_ratio = adv.ratio();
  r.adv_defined = adv.defined;
  r.sharpe = sharpe_ratio(trace);
  return r;
}

}  // namespace mmsim::metrics
