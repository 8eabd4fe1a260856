#include "mmsim/experts/policies.hpp"

#include <stdexcept>

namespace mmsim::experts {

namespace {

std::vector<double> nearest(int n_levels) {
  std::vector<double> w(static_cast<std::size_t>(n_levels), 0.0);
  w[0] = 1.0;
  return w;
}

}  // namespace

LtiicPolicy::LtiicPolicy(LtiicParams p, std::size_t signal_index) : p_(p), signal_index_(signal_index) {
  p_.validate();
}

env::Action LtiicPolicy::act(const env::DecisionContext& ctx) {
  const auto& s = ctx.observation.signals;
  const int y = signal_index_ < s.size() ? s[signal_index_] : 0;
  return encode_quotes_as_action(ltiic_quote(ctx.mid, ctx.z, y, p_), ctx.p_ref, ctx.env.config());
}

LiicPolicy::LiicPolicy(LtiicParams p) : p_(p) { p_.validate(); }

env::Action LiicPolicy::act(const env::DecisionContext& ctx) {
  return encode_quotes_as_action(liic_quote(ctx.mid, ctx.z, p_), ctx.p_ref, ctx.env.config());
}

FoicPolicy::FoicPolicy(double d) : d_(d) {
  if (!(d > 0.0)) throw std::invalid_argument("d must be positive");
}

env::Action FoicPolicy::act(const env::DecisionContext& ctx) {
  return encode_quotes_as_action(foic_quote(ctx.best_bid, ctx.best_ask, ctx.z, d_), ctx.p_ref,
                                 ctx.env.config());
}

env::Action RandomPolicy::act(const env::DecisionContext& ctx) {
  const int n = ctx.env.config().n_levels;
  std::uniform_real_distribution<double> m(-12.0, 12.0);
  std::uniform_real_distribution<double> d(0.0, 22.0);
  std::exponential_distribution<double> e(1.0);
  env::Action a;
  a.m_star = m(rng_);
  a.delta_star = d(rng_);
  auto weights = [&] {
    std::vector<double> w(static_cast<std::size_t>(n));
    double sum = 0.0;
    for (auto& x : w) sum += (x = e(rng_));
    for (auto& x : w) x /= sum;
    return w;
  };
  a.phi_bid = weights();
  a.phi_ask = weights();
  return a;
}

GreedyPolicy::GreedyPolicy(std::vector<env::Action> candidates) : candidates_(std::move(candidates)) {
  if (candidates_.empty()) throw std::invalid_argument("greedy policy needs candidates");
}

std::vector<env::Action> GreedyPolicy::default_candidates(int n_levels) {
  const std::vector<double> on = nearest(n_levels);
  const std::vector<double> off(static_cast<std::size_t>(n_levels), 0.0);
  std::vector<env::Action> out;
  out.push_back({0.0, 1.0, off, off});
  for (double m = -3.0; m <= 3.0; m += 1.0) {
    for (double d : {1.0, 3.0}) {
      out.push_back({m, d, on, on});
      out.push_back({m, d, on, off});
      out.push_back({m, d, off, on});
    }
  }
  return out;
}

env::Action GreedyPolicy::act(const env::DecisionContext& ctx) {
  std::size_t best = 0;
  double best_reward = 0.0;
  for (std::size_t i = 0; i < candidates_.size(); ++i) {
    const double r = ctx.env.preview(candidates_[i]).total;
    if (i == 0 || r > best_reward) {
      best = i;
      best_reward = r;
    }
  }
  return candidates_[best];
}

const std::vector<std::string>& strategy_ids() {
  static const std::vector<std::string> ids{"ltiic", "liic", "foic", "random", "fixed", "greedy"};
  return ids;
}

std::unique_ptr<env::Policy> make_policy(const StrategySpec& spec, const env::EpisodeConfig& cfg) {
  if (spec.id == "ltiic") return std::make_unique<LtiicPolicy>(spec.params, spec.signal_index);
  if (spec.id == "liic") return std::make_unique<LiicPolicy>(spec.params);
  if (spec.id == "foic") return std::make_unique<FoicPolicy>(spec.params.d);
  if (spec.id == "random") return std::make_unique<RandomPolicy>();
  if (spec.id == "fixed") {
    env::Action a = spec.fixed;
    if (a.phi_bid.empty()) a.phi_bid = nearest(cfg.n_levels);
    if (a.phi_ask.empty()) a.phi_ask = nearest(cfg.n_levels);
    env::validate_action(a, cfg.n_levels);
    return std::make_unique<FixedPolicy>(a);
  }
  if (spec.id == "greedy") {
    return std::make_unique<GreedyPolicy>(GreedyPolicy::default_candidates(cfg.n_levels));
  }
  std::string valid;
  for (const auto& id : strategy_ids()) valid += (valid.empty() ? "" : ", ") + id;
  throw std::invalid_argument("unknown strategy '" + spec.id + "'; valid ids: " + valid);
}

}  // namespace mmsim::experts
