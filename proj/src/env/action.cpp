#include "mmsim/env/action.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <stdexcept>
#include <string>

namespace mmsim::env {

namespace {

void check_weights(const std::vector<double>& phi, int n_levels, const char* name) {
  if (static_cast<int>(phi.size()) != n_levels) {
    throw std::invalid_argument(std::string(name) + " has " + std::to_string(phi.size()) +
                                " entries, expected " + std::to_string(n_levels));
  }
  double sum = 0.0;
  for (double w : phi) {
    if (!std::isfinite(w) || w < 0.0) {
      throw std::invalid_argument(std::string(name) + " entries must be finite and >= 0");
    }
    sum += w;
  }
  if (sum != 0.0 && std::abs(sum - 1.0) > 1e-6) {
    throw std::invalid_argument(std::string(name) + " must sum to 1");
  }
}

std::vector<double> sanitize(const std::vector<double>& phi) {
  std::vector<double> out(phi.size(), 0.0);
  for (std::size_t i = 0; i < phi.size(); ++i) {
    if (std::isfinite(phi[i]) && phi[i] > 0.0) out[i] = phi[i];
  }
  return out;
}

}  // namespace

void validate_action(const Action& a, int n_levels) {
  if (!std::isfinite(a.m_star)) throw std::invalid_argument("m_star must be finite");
  if (!std::isfinite(a.delta_star) || a.delta_star < 0.0) {
    throw std::invalid_argument("delta_star must be finite and >= 0");
  }
  check_weights(a.phi_bid, n_levels, "phi_bid");
  check_weights(a.phi_ask, n_levels, "phi_ask");
}

std::vector<Volume> apportion(Volume total, const std::vector<double>& weights) {
  std::vector<Volume> out(weights.size(), 0);
  const std::vector<double> w = sanitize(weights);
  const double sum = std::accumulate(w.begin(), w.end(), 0.0);
  if (!(sum > 0.0) || total <= 0) return out;

  std::vector<double> frac(w.size(), 0.0);
  Volume assigned = 0;
  for (std::size_t i = 0; i < w.size(); ++i) {
    double quota = static_cast<double>(total) * w[i] / sum;
    if (const double r = std::round(quota); std::abs(quota - r) < 1e-9) quota = r;
    out[i] = static_cast<Volume>(std::floor(quota));
    frac[i] = quota - static_cast<double>(out[i]);
    assigned += out[i];
  }
  std::vector<std::size_t> order(w.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t x, std::size_t y) { return frac[x] > frac[y]; });
  for (std::size_t k = 0; assigned < total; k = (k + 1) % order.size()) {
    ++out[order[k]];
    ++assigned;
  }
  return out;
}

QuoteSet decode_action(const Action& a, const EpisodeConfig& cfg, HalfTickPrice p_ref) {
  if (static_cast<int>(a.phi_bid.size()) != cfg.n_levels ||
      static_cast<int>(a.phi_ask.size()) != cfg.n_levels) {
    throw std::invalid_argument("action weight vectors must have n_levels entries");
  }
  const double m = std::clamp(std::isfinite(a.m_star) ? a.m_star : 0.0, kMinMidOffset, kMaxMidOffset);
  const double delta =
      std::clamp(std::isfinite(a.delta_star) ? a.delta_star : kMinSpread, kMinSpread, kMaxSpread);
  const double centre = to_ticks(p_ref) + m;
  const HalfTickPrice ask0 = ceil_to_tick(centre + delta / 2.0);
  const HalfTickPrice bid0 = floor_to_tick(centre - delta / 2.0);

  QuoteSet out;
  const auto ask_vols = apportion(cfg.N, a.phi_ask);
  const auto bid_vols = apportion(cfg.N, a.phi_bid);
  for (int i = 0; i < cfg.n_levels; ++i) {
    if (ask_vols[i] > 0) out.asks.push_back({ask0 + 2 * i, ask_vols[i]});
    if (bid_vols[i] > 0) out.bids.push_back({bid0 - 2 * i, bid_vols[i]});
  }
  return out;
}

OrderDiff diff_orders(const std::vector<replay::RestingOrder>& current, const QuoteSet& desired) {
  using Key = std::pair<int, std::int64_t>;  // (side, price)
  auto key = [](Side s, HalfTickPrice p) { return Key{static_cast<int>(s), p.value}; };

  std::map<Key, std::vector<const replay::RestingOrder*>> held;
  for (const auto& o : current) held[key(o.side, o.price)].push_back(&o);
  std::map<Key, Volume> want;
  for (const auto& q : desired.bids) want[key(Side::Bid, q.price)] += q.volume;
  for (const auto& q : desired.asks) want[key(Side::Ask, q.price)] += q.volume;

  OrderDiff diff;
  for (auto& [k, orders] : held) {
    Volume have = 0;
    for (const auto* o : orders) have += o->volume;
    const auto it = want.find(k);
    Volume excess = have - (it == want.end() ? 0 : it->second);
    if (excess <= 0) continue;
    std::sort(orders.begin(), orders.end(),
              [](const auto* x, const auto* y) { return x->seq > y->seq; });
    for (const auto* o : orders) {
      if (excess <= 0) break;
      const Volume cut = std::min(excess, o->volume);
      diff.cancels.push_back({o->id, cut == o->volume ? 0 : cut});
      excess -= cut;
    }
  }
  for (const auto& [k, volume] : want) {
    Volume have = 0;
    if (const auto it = held.find(k); it != held.end()) {
      for (const auto* o : it->second) have += o->volume;
    }
    if (volume > have) {
      diff.placements.push_back({static_cast<Side>(k.first), HalfTickPrice{k.second}, volume - have});
    }
  }
  return diff;
}

}  // namespace mmsim::env
