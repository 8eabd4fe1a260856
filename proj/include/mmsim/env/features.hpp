#pragma once

#include <array>
#include <cstddef>
#include <string>
#include <vector>

#include "mmsim/core/types.hpp"
#include "mmsim/lob/book.hpp"
#include "mmsim/replay/dataset.hpp"

namespace mmsim::env {

inline constexpr int kFeatureSchemaVersion = 1;
inline constexpr std::array<std::size_t, 4> kReturnLags{1, 5, 20, 60};

// Layout of the flattened observation arrays.
struct FeatureSchema {
  int K = 5;
  std::size_t L = 50;
  std::size_t n_signals = 4;

  // 2K level volumes, spread, four log returns, interval volume ratio, time fraction.
  std::size_t features() const noexcept { return static_cast<std::size_t>(2 * K) + 7; }
  std::size_t market_size() const noexcept { return features() * (L + 1); }
  std::size_t private_size() const noexcept { return 1 + 4 * static_cast<std::size_t>(K); }
  std::vector<std::string> feature_names() const;
};

struct Observation {
  // Window of the last L feature rows (oldest first, zero rows before the episode start)
  // followed by the current row again.
  std::vector<double> market;
  std::vector<int> signals;
  Volume z = 0;
  std::vector<double> q;  // levels -K..-1, +1..+K
  std::vector<double> v;  // same order, agent resting volume

  // z, q, v concatenated.
  std::vector<double> private_vector() const;
};

// One feature row at dataset index t. `book` supplies level volumes around p_ref (market view).
std::vector<double> market_features(const replay::Dataset& data, std::size_t t, const lob::Book& book,
                                    HalfTickPrice p_ref, int K, double time_fraction,
                                    std::size_t volume_window);

// q^i = sum_j (front_j / l_i) * (v_j / sum_j v_j), 0 at levels without agent volume.
struct QueueEntry {
  Volume front = 0;
  Volume volume = 0;
};
double queue_value(const std::vector<QueueEntry>& orders, Volume level_volume) noexcept;

// Fixed-size ring of feature rows.
class FeatureWindow {
 public:
  FeatureWindow() = default;
  FeatureWindow(std::size_t rows, std::size_t width);

  void push(const std::vector<double>& row);
  // Rows oldest first, zero-filled when fewer than `rows` have been pushed.
  void flatten_into(std::vector<double>& out) const;
  const std::vector<double>& last() const noexcept { return last_; }

 private:
  std::size_t rows_ = 0;
  std::size_t width_ = 0;
  std::size_t head_ = 0;
  std::size_t count_ = 0;
  std::vector<double> data_;
  std::vector<double> last_;
};

}  // namespace mmsim::env
