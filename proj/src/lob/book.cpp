#include "mmsim/lob/book.hpp"

#include <algorithm>
#include <numeric>
#include <stdexcept>

#include "mmsim/core/errors.hpp"

namespace mmsim::lob {

std::optional<HalfTickPrice> Book::best(Side side, View view) const {
  const Ladder& ladder = this->ladder(side);
  if (side == Side::Bid) {
    for (auto it = ladder.rbegin(); it != ladder.rend(); ++it) {
      if (it->second.volume(view) > 0) return HalfTickPrice{it->first};
    }
  } else {
    for (const auto& [price, level] : ladder) {
      if (level.volume(view) > 0) return HalfTickPrice{price};
    }
  }
  return std::nullopt;
}

Volume Book::volume_at(Side side, HalfTickPrice price, View view) const {
  const Ladder& ladder = this->ladder(side);
  const auto it = ladder.find(price.value);
  return it == ladder.end() ? 0 : it->second.volume(view);
}

Volume Book::available(Side resting_side, std::optional<HalfTickPrice> limit) const {
  Volume total = 0;
  for (const auto& [price, level] : ladder(resting_side)) {
    if (limit) {
      const bool ok = resting_side == Side::Ask ? price <= limit->value : price >= limit->value;
      if (!ok) continue;
    }
    total += level.total();
  }
  return total;
}

bool Book::crosses(Side side, HalfTickPrice price) const {
  const auto opp = best(opposite(side));
  if (!opp) return false;
  return side == Side::Bid ? price >= *opp : price <= *opp;
}

void Book::account(Level& level, Owner owner, Volume delta) noexcept {
  if (owner == Owner::Agent) {
    level.agent_volume += delta;
  } else {
    level.market_volume += delta;
  }
}

void Book::erase_if_empty(Side side, Ladder::iterator it) {
  if (it->second.queue.empty()) ladder_mut(side).erase(it);
}

OrderId Book::add(Side side, HalfTickPrice price, Volume volume, Owner owner) {
  if (!price.on_tick()) throw std::invalid_argument("order price must lie on the tick grid");
  if (volume <= 0) throw std::invalid_argument("order volume must be positive");
  if (crosses(side, price)) throw std::logic_error("passive add would cross the book");

  const OrderId id = next_id_++;
  Level& level = ladder_mut(side)[price.value];
  level.queue.push_back(OrderRecord{id, side, price, volume, owner, next_seq_++});
  account(level, owner, volume);
  index_.emplace(id, std::make_pair(side, price.value));
  return id;
}

std::vector<Fill> Book::take(Side aggressor, Volume volume, std::optional<HalfTickPrice> limit,
                             Owner taker) {
  std::vector<Fill> fills;
  const Side resting = opposite(aggressor);
  Ladder& ladder = ladder_mut(resting);

  while (volume > 0 && !ladder.empty()) {
    auto it = resting == Side::Ask ? ladder.begin() : std::prev(ladder.end());
    if (limit) {
      const bool beyond = resting == Side::Ask ? it->first > limit->value : it->first < limit->value;
      if (beyond) break;
    }
    Level& level = it->second;
    while (volume > 0 && !level.queue.empty()) {
      OrderRecord& front = level.queue.front();
      const Volume traded = std::min(volume, front.volume);
      fills.push_back(Fill{front.id, front.owner, front.side, front.price, traded, taker});
      front.volume -= traded;
      volume -= traded;
      account(level, front.owner, -traded);
      if (front.volume == 0) {
        index_.erase(front.id);
        level.queue.pop_front();
      }
    }
    erase_if_empty(resting, it);
  }
  return fills;
}

Volume Book::cancel(OrderId id, Volume volume) {
  const auto idx = index_.find(id);
  if (idx == index_.end()) throw UnknownOrder(id);
  const auto [side, price] = idx->second;
  Ladder& ladder = ladder_mut(side);
  const auto it = ladder.find(price);
  Level& level = it->second;
  const auto pos = std::find_if(level.queue.begin(), level.queue.end(),
                                [id](const OrderRecord& o) { return o.id == id; });

  Volume cancelled = 0;
  if (volume <= 0 || volume >= pos->volume) {
    cancelled = pos->volume;
    account(level, pos->owner, -cancelled);
    level.queue.erase(pos);
    index_.erase(idx);
  } else {
    cancelled = volume;
    pos->volume -= volume;
    account(level, pos->owner, -cancelled);
  }
  erase_if_empty(side, it);
  return cancelled;
}

Volume Book::cancel_market_volume(Side side, HalfTickPrice price, Volume volume,
                                  QueueModel model) {
  Ladder& ladder = ladder_mut(side);
  const auto it = ladder.find(price.value);
  if (it == ladder.end() || volume <= 0) return 0;
  Level& level = it->second;
  const Volume target = std::min(volume, level.market_volume);
  if (target == 0) return 0;

  if (model == QueueModel::Pessimistic) {
    Volume left = target;
    for (auto o = level.queue.rbegin(); o != level.queue.rend() && left > 0; ++o) {
      if (o->owner != Owner::Historical) continue;
      const Volume take = std::min(left, o->volume);
      o->volume -= take;
      left -= take;
    }
  } else {
    // Largest-remainder split of `target` over historical orders by volume.
    const Volume pool = level.market_volume;
    std::vector<std::pair<std::size_t, Volume>> remainders;
    Volume assigned = 0;
    std::vector<Volume> cut(level.queue.size(), 0);
    for (std::size_t i = 0; i < level.queue.size(); ++i) {
      const OrderRecord& o = level.queue[i];
      if (o.owner != Owner::Historical) continue;
      const Volume num = target * o.volume;
      cut[i] = static_cast<Volume>(num / pool);
      remainders.emplace_back(i, static_cast<Volume>(num % pool));
      assigned += cut[i];
    }
    // Ties go to the newer order.
    std::stable_sort(remainders.begin(), remainders.end(), [](const auto& a, const auto& b) {
      return a.second != b.second ? a.second > b.second : a.first > b.first;
    });
    for (std::size_t k = 0; assigned < target && k < remainders.size(); ++k) {
      const std::size_t i = remainders[k].first;
      if (cut[i] < level.queue[i].volume) {
        ++cut[i];
        ++assigned;
      }
    }
    for (std::size_t i = 0; i < level.queue.size(); ++i) level.queue[i].volume -= cut[i];
  }

  level.market_volume -= target;
  for (auto o = level.queue.begin(); o != level.queue.end();) {
    if (o->volume == 0) {
      index_.erase(o->id);
      o = level.queue.erase(o);
    } else {
      ++o;
    }
  }
  erase_if_empty(side, it);
  return target;
}

const OrderRecord* Book::find(OrderId id) const {
  const auto idx = index_.find(id);
  if (idx == index_.end()) return nullptr;
  const auto& level = ladder(idx->second.first).at(idx->second.second);
  for (const auto& o : level.queue) {
    if (o.id == id) return &o;
  }
  return nullptr;
}

Volume Book::volume_ahead(OrderId id) const {
  const auto idx = index_.find(id);
  if (idx == index_.end()) throw UnknownOrder(id);
  const auto& level = ladder(idx->second.first).at(idx->second.second);
  Volume ahead = 0;
  for (const auto& o : level.queue) {
    if (o.id == id) break;
    ahead += o.volume;
  }
  return ahead;
}

std::vector<OrderRecord> Book::orders(Owner owner) const {
  std::vector<OrderRecord> out;
  for (const Ladder* ladder : {&bids_, &asks_}) {
    for (const auto& [price, level] : *ladder) {
      const Volume own = owner == Owner::Agent ? level.agent_volume : level.market_volume;
      if (own == 0) continue;
      for (const auto& o : level.queue) {
        if (o.owner == owner) out.push_back(o);
      }
    }
  }
  return out;
}

MatchResult match_marketable(Book& book, const OrderRecord& order) {
  MatchResult result;
  if (order.volume <= 0) return result;

  Volume remaining = order.volume;
  if (book.crosses(order.side, order.price)) {
    result.fills = book.take(order.side, remaining, order.price, order.owner);
    for (const auto& f : result.fills) remaining -= f.volume;
  }
  if (remaining > 0) {
    OrderRecord rest = order;
    rest.volume = remaining;
    rest.id = book.add(order.side, order.price, remaining, order.owner);
    rest.seq = book.find(rest.id)->seq;
    result.residual = rest;
  }
  return result;
}

}  // namespace mmsim::lob
