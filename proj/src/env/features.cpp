#include "mmsim/env/features.hpp"

#include <algorithm>
#include <cmath>

#include "mmsim/lob/reference_price.hpp"

namespace mmsim::env {

std::vector<std::string> FeatureSchema::feature_names() const {
  std::vector<std::string> names;
  for (int i = K; i >= 1; --i) names.push_back("lvl_bid_" + std::to_string(i));
  for (int i = 1; i <= K; ++i) names.push_back("lvl_ask_" + std::to_string(i));
  names.emplace_back("spread_ticks");
  for (auto lag : kReturnLags) names.push_back("logret_" + std::to_string(lag));
  names.emplace_back("volume_ratio");
  names.emplace_back("time_fraction");
  return names;
}

std::vector<double> Observation::private_vector() const {
  std::vector<double> out;
  out.reserve(1 + q.size() + v.size());
  out.push_back(static_cast<double>(z));
  out.insert(out.end(), q.begin(), q.end());
  out.insert(out.end(), v.begin(), v.end());
  return out;
}

std::vector<double> market_features(const replay::Dataset& data, std::size_t t, const lob::Book& book,
                                    HalfTickPrice p_ref, int K, double time_fraction,
                                    std::size_t volume_window) {
  std::vector<double> row;
  row.reserve(static_cast<std::size_t>(2 * K) + 7);

  double total = 0.0;
  for (int i = -K; i <= K; ++i) {
    if (i == 0) continue;
    const Side side = i < 0 ? Side::Bid : Side::Ask;
    const auto vol =
        static_cast<double>(book.volume_at(side, lob::level_price(p_ref, i), lob::View::Market));
    row.push_back(vol);
    total += vol;
  }
  if (total > 0.0) {
    for (auto& x : row) x /= total;
  }

  const auto& rec = data[t];
  row.push_back(static_cast<double>(rec.spread()) / 2.0);
  for (auto lag : kReturnLags) {
    const std::size_t back = t >= lag ? t - lag : 0;
    const double now = static_cast<double>(rec.mid());
    const double then = static_cast<double>(data[back].mid());
    row.push_back(now > 0.0 && then > 0.0 ? std::log(now / then) : 0.0);
  }
  const std::size_t first = t + 1 >= volume_window ? t + 1 - volume_window : 0;
  double sum = 0.0;
  for (std::size_t i = first; i <= t; ++i) sum += static_cast<double>(data[i].interval_trade_volume);
  const double mean = sum / static_cast<double>(t - first + 1);
  row.push_back(mean > 0.0 ? static_cast<double>(rec.interval_trade_volume) / mean : 0.0);
  row.push_back(time_fraction);
  return row;
}

double queue_value(const std::vector<QueueEntry>& orders, Volume level_volume) noexcept {
  Volume own = 0;
  for (const auto& o : orders) own += o.volume;
  if (own <= 0 || level_volume <= 0) return 0.0;
  double q = 0.0;
  for (const auto& o : orders) {
    q += (static_cast<double>(o.front) / static_cast<double>(level_volume)) *
         (static_cast<double>(o.volume) / static_cast<double>(own));
  }
  return std::clamp(q, 0.0, 1.0);
}

FeatureWindow::FeatureWindow(std::size_t rows, std::size_t width)
    : rows_(rows), width_(width), data_(rows * width, 0.0), last_(width, 0.0) {}

void FeatureWindow::push(const std::vector<double>& row) {
  last_ = row;
  if (rows_ == 0) return;
  std::copy(row.begin(), row.end(), data_.begin() + static_cast<std::ptrdiff_t>(head_ * width_));
  head_ = (head_ + 1) % rows_;
  count_ = std::min(count_ + 1, rows_);
}

void FeatureWindow::flatten_into(std::vector<double>& out) const {
  const std::size_t pad = rows_ - count_;
  out.insert(out.end(), pad * width_, 0.0);
  // Oldest stored row sits at head_ once the ring is full, at 0 before that.
  const std::size_t start = count_ == rows_ ? head_ : 0;
  for (std::size_t k = 0; k < count_; ++k) {
    const auto* row = data_.data() + ((start + k) % rows_) * width_;
    out.insert(out.end(), row, row + width_);
  }
}

}  // namespace mmsim::env
