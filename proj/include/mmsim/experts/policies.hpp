#pragma once

#include <cstdint>
#include <memory>
#include <random>
#include <string>
#include <vector>

#include "mmsim/env/policy.hpp"
#include "mmsim/experts/experts.hpp"

namespace mmsim::experts {

class LtiicPolicy final : public env::Policy {
 public:
  // `signal_index` picks the horizon whose signal drives the trend term.
  explicit LtiicPolicy(LtiicParams p, std::size_t signal_index = 0);
  std::string name() const override { return "ltiic"; }
  env::Action act(const env::DecisionContext& ctx) override;

 private:
  LtiicParams p_;
  std::size_t signal_index_;
};

class LiicPolicy final : public env::Policy {
 public:
  explicit LiicPolicy(LtiicParams p);
  std::string name() const override { return "liic"; }
  env::Action act(const env::DecisionContext& ctx) override;

 private:
  LtiicParams p_;
};

class FoicPolicy final : public env::Policy {
 public:
  explicit FoicPolicy(double d);
  std::string name() const override { return "foic"; }
  env::Action act(const env::DecisionContext& ctx) override;

 private:
  double d_;
};

// Uniform over a range a little wider than the clamps, with random level weights.
class RandomPolicy final : public env::Policy {
 public:
  std::string name() const override { return "random"; }
  void on_reset(std::uint64_t seed) override { rng_.seed(seed ^ 0x5eedULL); }
  env::Action act(const env::DecisionContext& ctx) override;

 private:
  std::mt19937_64 rng_{0};
};

class FixedPolicy final : public env::Policy {
 public:
  explicit FixedPolicy(env::Action a) : a_(std::move(a)) {}
  std::string name() const override { return "fixed"; }
  env::Action act(const env::DecisionContext&) override { return a_; }

 private:
  env::Action a_;
};

// Picks, every step, the candidate action with the highest one-step reward as previewed
// against the next snapshot. Ties go to the earlier candidate.
class GreedyPolicy final : public env::Policy {
 public:
  explicit GreedyPolicy(std::vector<env::Action> candidates);
  std::string name() const override { return "greedy"; }
  env::Action act(const env::DecisionContext& ctx) override;

  // Grid over m* and delta*, quoting both sides, only the bid, or only the ask (all volume
  // at the nearest level), plus the empty quote.
  static std::vector<env::Action> default_candidates(int n_levels);

 private:
  std::vector<env::Action> candidates_;
};

struct StrategySpec {
  std::string id = "ltiic";
  LtiicParams params;
  std::size_t signal_index = 0;
  env::Action fixed;  // used by "fixed"; empty weights mean all volume at the nearest level
};

const std::vector<std::string>& strategy_ids();

// Throws std::invalid_argument naming the valid ids when `spec.id` is unknown.
std::unique_ptr<env::Policy> make_policy(const StrategySpec& spec, const env::EpisodeConfig& cfg);

}  // namespace mmsim::experts
