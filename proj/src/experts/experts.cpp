#include "mmsim/experts/experts.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "mmsim/core/errors.hpp"

namespace mmsim::experts {

void LtiicParams::validate() const {
  if (!std::isfinite(a) || a < 1.0) throw std::invalid_argument("a must be >= 1 tick");
  if (!std::isfinite(b) || !std::isfinite(c)) throw std::invalid_argument("b and c must be finite");
  if (!std::isfinite(d) || d <= 0.0) throw std::invalid_argument("d must be positive");
}

QuoteIntent ltiic_quote(std::int64_t mid, Volume z, int y_hat, const LtiicParams& p) {
  const double zd = static_cast<double>(z);
  const double centre = static_cast<double>(mid) / 2.0 + p.b * zd + p.c * static_cast<double>(y_hat);
  QuoteIntent q;
  if (zd > -p.d) q.ask = ceil_to_tick(centre + p.a);
  if (zd < p.d) q.bid = floor_to_tick(centre - p.a);
  return q;
}

QuoteIntent liic_quote(std::int64_t mid, Volume z, const LtiicParams& p) {
  LtiicParams no_trend = p;
  no_trend.c = 0.0;
  return ltiic_quote(mid, z, 0, no_trend);
}

QuoteIntent foic_quote(std::optional<HalfTickPrice> best_bid, std::optional<HalfTickPrice> best_ask,
                       Volume z, double d) {
  if (!best_bid || !best_ask) throw EmptySide();
  const double zd = static_cast<double>(z);
  QuoteIntent q;
  if (zd > -d) q.ask = best_ask;
  if (zd < d) q.bid = best_bid;
  return q;
}

env::Action encode_quotes_as_action(const QuoteIntent& intent, HalfTickPrice p_ref,
                                    const env::EpisodeConfig& cfg) {
  if (!intent.bid && !intent.ask) throw std::invalid_argument("quote intent has no side");
  env::Action a;
  std::vector<double> on(static_cast<std::size_t>(cfg.n_levels), 0.0);
  on[0] = 1.0;
  a.phi_bid = on;
  a.phi_ask = on;

  // Offsets from p_ref in ticks; exact in binary since they are multiples of 0.5.
  auto offset = [&](HalfTickPrice p) { return static_cast<double>(p - p_ref) / 2.0; };
  if (intent.bid && intent.ask) {
    a.m_star = (offset(*intent.ask) + offset(*intent.bid)) / 2.0;
    a.delta_star = offset(*intent.ask) - offset(*intent.bid);
  } else if (intent.ask) {
    const double x = offset(*intent.ask);
    a.m_star = std::clamp(x - env::kMaxSpread / 2.0, env::kMinMidOffset, env::kMaxMidOffset);
    a.delta_star = 2.0 * (x - a.m_star);
  } else {
    const double x = offset(*intent.bid);
    a.m_star = std::clamp(x + env::kMaxSpread / 2.0, env::kMinMidOffset, env::kMaxMidOffset);
    a.delta_star = 2.0 * (a.m_star - x);
  }
  a.m_star = std::clamp(a.m_star, env::kMinMidOffset, env::kMaxMidOffset);
  a.delta_star = std::clamp(a.delta_star, env::kMinSpread, env::kMaxSpread);
  return a;
}

}  // namespace mmsim::experts
