#include "mmsim/experts/expert_dataset.hpp"

#include <cstdio>
#include <fstream>
#include <stdexcept>

#include <json.hpp>

#include "mmsim/core/errors.hpp"

namespace mmsim::experts {

using nlohmann::json;

std::string fnv1a_hex(const std::string& text) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : text) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

namespace {

json manifest_json(const ExpertManifest& m) {
  return {{"type", "manifest"},
          {"format", "mmsim-expert"},
          {"schema_version", m.schema_version},
          {"config_hash", m.config_hash},
          {"expert", m.expert},
          {"seed", m.seed},
          {"episodes", m.episodes},
          {"n_levels", m.n_levels},
          {"schema",
           {{"K", m.schema.K},
            {"lookback", m.schema.L},
            {"features", m.schema.features()},
            {"market_size", m.schema.market_size()},
            {"signals", m.schema.n_signals},
            {"private_size", m.schema.private_size()},
            {"feature_names", m.schema.feature_names()}}}};
}

std::vector<double> action_array(const env::Action& a) {
  std::vector<double> out{a.m_star, a.delta_star};
  out.insert(out.end(), a.phi_bid.begin(), a.phi_bid.end());
  out.insert(out.end(), a.phi_ask.begin(), a.phi_ask.end());
  return out;
}

}  // namespace

std::size_t export_expert_dataset(const ExportRequest& req, env::Policy& expert,
                                  const std::filesystem::path& path) {
  if (!req.data) throw std::invalid_argument("export needs a dataset");
  env::MarketMakingEnv environment(*req.data, req.episode, req.reward, req.provider);

  ExpertManifest m;
  m.config_hash = req.config_hash;
  m.expert = expert.name();
  m.seed = req.seed;
  m.episodes = req.episodes;
  m.n_levels = req.episode.n_levels;
  m.schema = environment.schema();

  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write " + path.string());
  out << manifest_json(m).dump() << '\n';

  std::size_t count = 0;
  for (std::size_t e = 0; e < req.episodes; ++e) {
    const std::uint64_t seed = req.seed + e;
    env::Observation obs = environment.reset(seed);
    expert.on_reset(seed);
    while (!environment.done()) {
      const env::Action a = expert.act(environment.context(obs));
      const json line{{"e", e},
                      {"t", environment.steps_taken()},
                      {"market", obs.market},
                      {"signals", obs.signals},
                      {"private", obs.private_vector()},
                      {"action", action_array(a)}};
      out << line.dump() << '\n';
      ++count;
      obs = environment.step(a).observation;
    }
  }
  if (!out) throw Error("write failed: " + path.string());
  return count;
}

ExpertDataset load_expert_dataset(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open " + path.string());
  ExpertDataset ds;
  std::string line;
  std::size_t lineno = 0;
  bool have_manifest = false;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    json j;
    try {
      j = json::parse(line);
    } catch (const json::exception& e) {
      throw ParseError(e.what(), lineno);
    }
    try {
      if (!have_manifest) {
        if (j.value("type", "") != "manifest" || j.value("format", "") != "mmsim-expert") {
          throw SchemaError("first line must be the expert dataset manifest", lineno);
        }
        auto& m = ds.manifest;
        m.schema_version = j.at("schema_version").get<int>();
        if (m.schema_version != kExpertSchemaVersion) {
          throw VersionMismatch("expert dataset schema version " + std::to_string(m.schema_version) +
                                    ", expected " + std::to_string(kExpertSchemaVersion),
                                lineno);
        }
        m.config_hash = j.at("config_hash").get<std::string>();
        m.expert = j.at("expert").get<std::string>();
        m.seed = j.at("seed").get<std::uint64_t>();
        m.episodes = j.at("episodes").get<std::size_t>();
        m.n_levels = j.at("n_levels").get<int>();
        const auto& s = j.at("schema");
        m.schema.K = s.at("K").get<int>();
        m.schema.L = s.at("lookback").get<std::size_t>();
        m.schema.n_signals = s.at("signals").get<std::size_t>();
        if (s.at("features").get<std::size_t>() != m.schema.features() ||
            s.at("market_size").get<std::size_t>() != m.schema.market_size() ||
            s.at("private_size").get<std::size_t>() != m.schema.private_size()) {
          throw VersionMismatch("feature schema does not match this build", lineno);
        }
        have_manifest = true;
        continue;
      }
      ExpertSample sample;
      sample.episode = j.at("e").get<std::size_t>();
      sample.step = j.at("t").get<std::size_t>();
      sample.observation.market = j.at("market").get<std::vector<double>>();
      sample.observation.signals = j.at("signals").get<std::vector<int>>();
      const auto priv = j.at("private").get<std::vector<double>>();
      const auto K = static_cast<std::size_t>(ds.manifest.schema.K);
      if (priv.size() != 1 + 4 * K) throw SchemaError("private vector has the wrong length", lineno);
      sample.observation.z = static_cast<Volume>(priv[0]);
      sample.observation.q.assign(priv.begin() + 1, priv.begin() + 1 + static_cast<std::ptrdiff_t>(2 * K));
      sample.observation.v.assign(priv.begin() + 1 + static_cast<std::ptrdiff_t>(2 * K), priv.end());
      const auto act = j.at("action").get<std::vector<double>>();
      const auto n = static_cast<std::size_t>(ds.manifest.n_levels);
      if (act.size() != 2 + 2 * n) throw SchemaError("action array has the wrong length", lineno);
      sample.action.m_star = act[0];
      sample.action.delta_star = act[1];
      sample.action.phi_bid.assign(act.begin() + 2, act.begin() + 2 + static_cast<std::ptrdiff_t>(n));
      sample.action.phi_ask.assign(act.begin() + 2 + static_cast<std::ptrdiff_t>(n), act.end());
      ds.samples.push_back(std::move(sample));
    } catch (const json::exception& e) {
      throw SchemaError(e.what(), lineno);
    }
  }
  if (!have_manifest) throw SchemaError("expert dataset has no manifest", 0);
  return ds;
}

std::size_t verify_expert_dataset(const ExpertDataset& ds) {
  const auto& schema = ds.manifest.schema;
  for (std::size_t i = 0; i < ds.samples.size(); ++i) {
    const auto& s = ds.samples[i];
    const std::size_t line = i + 2;
    auto fail = [&](const std::string& why) { throw SchemaError("sample " + std::to_string(i) + ": " + why, line); };
    if (s.observation.market.size() != schema.market_size()) fail("market vector has the wrong length");
    if (s.observation.signals.size() != schema.n_signals) fail("signal vector has the wrong length");
    for (int v : s.observation.signals) {
      if (v < -1 || v > 1) fail("signal outside {-1, 0, 1}");
    }
    for (std::size_t k = 0; k < s.observation.q.size(); ++k) {
      const double q = s.observation.q[k];
      if (!(q >= 0.0 && q <= 1.0)) fail("queue value outside [0, 1]");
      if (s.observation.v[k] == 0.0 && q != 0.0) fail("queue value without resting volume");
      if (s.observation.v[k] < 0.0) fail("negative resting volume");
    }
    try {
      env::validate_action(s.action, ds.manifest.n_levels);
    } catch (const std::invalid_argument& e) {
      fail(e.what());
    }
  }
  return ds.samples.size();
}

}  // namespace mmsim::experts
