#pragma once

#include <cstdint>
#include <string>

#include "mmsim/env/action.hpp"
#include "mmsim/env/environment.hpp"

namespace mmsim::env {

class Policy {
 public:
  virtual ~Policy() = default;
  virtual std::string name() const = 0;
  virtual void on_reset(std::uint64_t /*seed*/) {}
  virtual Action act(const DecisionContext& ctx) = 0;
};

// Resets `env` with `seed`, runs `policy` until done and returns the trace.
EpisodeTrace run_episode(MarketMakingEnv& env, Policy& policy, std::uint64_t seed);

}  // namespace mmsim::env
