#pragma once

#include <cstddef>
#include <cstdint>
#include <memory>
#include <random>
#include <vector>

#include "mmsim/replay/dataset.hpp"

namespace mmsim::signals {

enum class SignalKind : std::uint8_t { LookaheadOracle, Momentum };

struct SignalSpec {
  std::vector<std::size_t> horizons{20, 120, 240, 600};  // steps
  double theta = 1.0;                                    // ticks
  double noise = 0.0;                                    // label resampling probability
  SignalKind kind = SignalKind::LookaheadOracle;

  // Throws std::invalid_argument.
  void validate() const;
};

// Three-class trend label of the dataset mid over (t, t + h]. With probability `noise` the
// label is replaced by one of the other two classes, chosen uniformly.
// Throws HorizonOutOfRange when t + h is past the end of the data.
int oracle_signal(const replay::Dataset& data, std::size_t t, std::size_t h, double theta,
                  double noise, std::mt19937_64& rng);

// Causal sign of mid_t - mid_{t-w}, zero within +-theta. Throws WindowOutOfRange when t < w.
int momentum_signal(const replay::Dataset& data, std::size_t t, std::size_t window, double theta);

// Immutable after construction; safe to query concurrently.
class SignalProvider {
 public:
  virtual ~SignalProvider() = default;

  // One value in {-1, 0, 1} per horizon. `stream` seeds any randomness, so the same
  // (stream, t) always gives the same answer regardless of call order.
  virtual std::vector<int> signals(const replay::Dataset& data, std::size_t t,
                                   std::uint64_t stream) const = 0;

  // How far past t the provider reads.
  virtual std::size_t lookahead() const = 0;
  virtual std::size_t count() const = 0;
};

class OracleProvider final : public SignalProvider {
 public:
  explicit OracleProvider(SignalSpec spec);
  std::vector<int> signals(const replay::Dataset& data, std::size_t t,
                           std::uint64_t stream) const override;
  std::size_t lookahead() const override { return spec_.horizons.back(); }
  std::size_t count() const override { return spec_.horizons.size(); }

 private:
  SignalSpec spec_;
};

// Uses the horizons as look-back windows. Reports 0 while t is shorter than the window.
class MomentumProvider final : public SignalProvider {
 public:
  explicit MomentumProvider(SignalSpec spec);
  std::vector<int> signals(const replay::Dataset& data, std::size_t t,
                           std::uint64_t stream) const override;
  std::size_t lookahead() const override { return 0; }
  std::size_t count() const override { return spec_.horizons.size(); }

 private:
  SignalSpec spec_;
};

std::shared_ptr<const SignalProvider> make_provider(const SignalSpec& spec);

// Seed for the random draw of (stream, t, horizon index).
std::uint64_t derive_seed(std::uint64_t stream, std::uint64_t t, std::uint64_t index) noexcept;

}  // namespace mmsim::signals
