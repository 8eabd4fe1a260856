#include "mmsim/lob/events.hpp"

#include "mmsim/core/errors.hpp"

namespace mmsim::lob {

namespace {

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

}  // namespace

std::vector<Fill> apply_event(Book& book, RefTracker& tracker, const BookEvent& event,
                              QueueModel model) {
  std::vector<Fill> fills = std::visit(
      Overloaded{
          [&](const InsertEvent& e) {
            OrderRecord order{0, e.side, e.price, e.volume, e.owner, 0};
            return match_marketable(book, order).fills;
          },
          [&](const CancelOrderEvent& e) {
            book.cancel(e.order_id, e.volume);
            return std::vector<Fill>{};
          },
          [&](const CancelLevelEvent& e) {
            book.cancel_market_volume(e.side, e.price, e.volume, model);
            return std::vector<Fill>{};
          },
          [&](const TradeEvent& e) {
            const Volume available = book.available(opposite(e.aggressor), e.limit);
            if (e.volume > available) throw Overconsume(e.volume, available);
            return book.take(e.aggressor, e.volume, e.limit, Owner::Historical);
          },
      },
      event);

  if (!book.empty(Side::Bid, View::Market) && !book.empty(Side::Ask, View::Market)) {
    update_reference_price(tracker, book);
  }
  return fills;
}

}  // namespace mmsim::lob
