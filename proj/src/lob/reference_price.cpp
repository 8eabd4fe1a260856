#include "mmsim/lob/reference_price.hpp"

#include <cstdlib>
#include <stdexcept>

#include "mmsim/core/errors.hpp"

namespace mmsim::lob {

namespace {

struct Quotes {
  HalfTickPrice bid;
  HalfTickPrice ask;
};

Quotes market_quotes(const Book& book) {
  const auto bid = book.best(Side::Bid, View::Market);
  const auto ask = book.best(Side::Ask, View::Market);
  if (!bid || !ask) throw EmptySide();
  return {*bid, *ask};
}

HalfTickPrice tilde_from_mid(std::int64_t mid, std::optional<HalfTickPrice> tilde_prev) {
  if (mid & 1) return HalfTickPrice{mid};
  const HalfTickPrice lower{mid - 1};
  const HalfTickPrice upper{mid + 1};
  if (!tilde_prev) return lower;
  // The candidates are one tick apart and the prior is odd, so it is never equidistant.
  return std::abs(tilde_prev->value - lower.value) <= std::abs(tilde_prev->value - upper.value)
             ? lower
             : upper;
}

}  // namespace

std::int64_t market_mid(const Book& book) {
  const Quotes q = market_quotes(book);
  return (q.bid.value + q.ask.value) / 2;
}

HalfTickPrice compute_tilde_ref(const Book& book, std::optional<HalfTickPrice> tilde_prev) {
  return tilde_from_mid(market_mid(book), tilde_prev);
}

RefTracker anchor_reference(const Book& book) {
  RefTracker tracker;
  tracker.mid_prev = market_mid(book);
  tracker.tilde_prev = tilde_from_mid(tracker.mid_prev, std::nullopt);
  tracker.p_ref = tracker.tilde_prev;
  tracker.anchored = true;
  return tracker;
}

HalfTickPrice update_reference_price(RefTracker& tracker, const Book& book) {
  const Quotes q = market_quotes(book);
  if (!tracker.anchored) {
    tracker = anchor_reference(book);
    return tracker.p_ref;
  }

  const std::int64_t mid = (q.bid.value + q.ask.value) / 2;
  const HalfTickPrice tilde = tilde_from_mid(mid, tracker.tilde_prev);

  bool move = false;
  if (mid > tracker.mid_prev && book.volume_at(Side::Ask, tracker.p_ref + 1, View::Market) == 0) {
    move = true;
  }
  if (mid < tracker.mid_prev && book.volume_at(Side::Bid, tracker.p_ref - 1, View::Market) == 0) {
    move = true;
  }
  if (!(q.bid < tracker.p_ref && tracker.p_ref < q.ask)) move = true;

  if (move) tracker.p_ref = tilde;
  tracker.tilde_prev = tilde;
  tracker.mid_prev = mid;
  return tracker.p_ref;
}

int level_index(HalfTickPrice p_ref, HalfTickPrice price) {
  if (!p_ref.between_ticks()) throw std::invalid_argument("reference price must be odd in half ticks");
  if (!price.on_tick()) throw std::invalid_argument("level price must be even in half ticks");
  const std::int64_t d = price - p_ref;
  return static_cast<int>(d > 0 ? (d + 1) / 2 : (d - 1) / 2);
}

HalfTickPrice level_price(HalfTickPrice p_ref, int index) {
  if (index == 0) throw std::invalid_argument("level index 0 does not exist");
  return index > 0 ? p_ref + (2 * index - 1) : p_ref + (2 * index + 1);
}

}  // namespace mmsim::lob
