#pragma once

#include <cstdint>
#include <optional>

#include "mmsim/core/types.hpp"
#include "mmsim/lob/book.hpp"

namespace mmsim::lob {

// Stable reference price on the half-tick grid. Levels Q_{+-i} sit i - 0.5 ticks
// away from it, so it always lies strictly between two ticks.
struct RefTracker {
  HalfTickPrice p_ref;
  HalfTickPrice tilde_prev;
  std::int64_t mid_prev = 0;  // midprice in half ticks; integer because both quotes are on ticks
  bool anchored = false;
};

// Midprice in half ticks, computed on historical liquidity. Throws EmptySide.
std::int64_t market_mid(const Book& book);

// Midprice-following reference: the midprice itself for an odd spread, otherwise the
// half-tick neighbour of the midprice that is closer to `tilde_prev`. When there is no
// prior, the lower neighbour is taken.
HalfTickPrice compute_tilde_ref(const Book& book, std::optional<HalfTickPrice> tilde_prev);

// Initial anchoring at episode start: p_ref = tilde.
RefTracker anchor_reference(const Book& book);

// Moves p_ref to the current tilde when the midprice rose and Q_{+1} holds no sell
// liquidity, when it fell and Q_{-1} holds no buy liquidity, or when p_ref no longer lies
// strictly inside the market spread. Returns the (possibly unchanged) p_ref.
HalfTickPrice update_reference_price(RefTracker& tracker, const Book& book);

// Signed level index of a tradable `price` relative to `p_ref`: positive on the ask side,
// negative on the bid side, never 0. Throws std::invalid_argument on parity violations.
int level_index(HalfTickPrice p_ref, HalfTickPrice price);

// Inverse of level_index.
HalfTickPrice level_price(HalfTickPrice p_ref, int index);

}  // namespace mmsim::lob
