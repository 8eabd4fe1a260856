#include "mmsim/signals/signals.hpp"

#include <stdexcept>
#include <string>

#include "mmsim/core/errors.hpp"

namespace mmsim::signals {

namespace {

int label(std::int64_t move_half_ticks, double theta) {
  const double move_ticks = static_cast<double>(move_half_ticks) / 2.0;
  if (move_ticks > theta) return 1;
  if (move_ticks < -theta) return -1;
  return 0;
}

std::uint64_t splitmix64(std::uint64_t x) noexcept {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

}  // namespace

void SignalSpec::validate() const {
  if (horizons.empty()) throw std::invalid_argument("signal horizons must not be empty");
  for (std::size_t i = 0; i < horizons.size(); ++i) {
    if (horizons[i] == 0) throw std::invalid_argument("signal horizons must be positive");
    if (i > 0 && horizons[i] <= horizons[i - 1]) {
      throw std::invalid_argument("signal horizons must be strictly increasing");
    }
  }
  if (theta < 0) throw std::invalid_argument("signal threshold must be >= 0");
  if (noise < 0 || noise > 1) throw std::invalid_argument("signal noise must be in [0, 1]");
}

std::uint64_t derive_seed(std::uint64_t stream, std::uint64_t t, std::uint64_t index) noexcept {
  return splitmix64(splitmix64(splitmix64(stream) ^ t) ^ index);
}

int oracle_signal(const replay::Dataset& data, std::size_t t, std::size_t h, double theta,
                  double noise, std::mt19937_64& rng) {
  if (t + h >= data.size()) {
    throw HorizonOutOfRange("t + h = " + std::to_string(t + h) + " is past the dataset end");
  }
  const int base = label(data[t + h].mid() - data[t].mid(), theta);
  if (noise <= 0.0) return base;
  std::uniform_real_distribution<double> u(0.0, 1.0);
  if (u(rng) >= noise) return base;
  // The two labels other than `base`, in ascending order.
  int others[2];
  int n = 0;
  for (int v = -1; v <= 1; ++v) {
    if (v != base) others[n++] = v;
  }
  return others[std::uniform_int_distribution<int>(0, 1)(rng)];
}

int momentum_signal(const replay::Dataset& data, std::size_t t, std::size_t window, double theta) {
  if (t < window || t >= data.size()) {
    throw WindowOutOfRange("momentum window " + std::to_string(window) + " does not fit at t = " +
                           std::to_string(t));
  }
  return label(data[t].mid() - data[t - window].mid(), theta);
}

OracleProvider::OracleProvider(SignalSpec spec) : spec_(std::move(spec)) { spec_.validate(); }

std::vector<int> OracleProvider::signals(const replay::Dataset& data, std::size_t t,
                                         std::uint64_t stream) const {
  std::vector<int> out(spec_.horizons.size(), 0);
  for (std::size_t i = 0; i < spec_.horizons.size(); ++i) {
    if (t + spec_.horizons[i] >= data.size()) continue;
    std::mt19937_64 rng(derive_seed(stream, t, i));
    out[i] = oracle_signal(data, t, spec_.horizons[i], spec_.theta, spec_.noise, rng);
  }
  return out;
}

MomentumProvider::MomentumProvider(SignalSpec spec) : spec_(std::move(spec)) { spec_.validate(); }

std::vector<int> MomentumProvider::signals(const replay::Dataset& data, std::size_t t,
                                           std::uint64_t) const {
  std::vector<int> out(spec_.horizons.size(), 0);
  for (std::size_t i = 0; i < spec_.horizons.size(); ++i) {
    if (t < spec_.horizons[i]) continue;
    out[i] = momentum_signal(data, t, spec_.horizons[i], spec_.theta);
  }
  return out;
}

std::shared_ptr<const SignalProvider> make_provider(const SignalSpec& spec) {
  if (spec.kind == SignalKind::Momentum) return std::make_shared<MomentumProvider>(spec);
  return std::make_shared<OracleProvider>(spec);
}

}  // namespace mmsim::signals
