#pragma once

#include <cstdint>
#include <optional>

#include "mmsim/core/types.hpp"
#include "mmsim/env/action.hpp"
#include "mmsim/env/config.hpp"

namespace mmsim::experts {

// Quote rule parameters, all in ticks (b per unit of inventory, c per signal unit).
struct LtiicParams {
  double a = 1.0;   // half-spread
  double b = -0.2;  // inventory skew
  double c = 1.0;   // trend skew
  double d = 10.0;  // inventory cap

  // Throws std::invalid_argument.
  void validate() const;
};

struct QuoteIntent {
  std::optional<HalfTickPrice> bid;
  std::optional<HalfTickPrice> ask;

  bool operator==(const QuoteIntent&) const = default;
};

// mid in half ticks. Two-sided while |z| < d; at z >= d only the ask is quoted, at z <= -d
// only the bid.
QuoteIntent ltiic_quote(std::int64_t mid, Volume z, int y_hat, const LtiicParams& p);
QuoteIntent liic_quote(std::int64_t mid, Volume z, const LtiicParams& p);

// Joins the best quotes. Throws EmptySide when either is missing.
QuoteIntent foic_quote(std::optional<HalfTickPrice> best_bid, std::optional<HalfTickPrice> best_ask,
                       Volume z, double d);

// Puts all N at the quoted price on each side. A missing side is parked at the far end of
// the action range: delta* = 20 ticks (or less when m* hits its own bound), so the decoded
// placeholder sits up to 20 ticks away from the live quote. Throws std::invalid_argument for
// an empty intent.
env::Action encode_quotes_as_action(const QuoteIntent& intent, HalfTickPrice p_ref,
                                    const env::EpisodeConfig& cfg);

}  // namespace mmsim::experts
