#include "mmsim/cli/config.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <set>
#include <sstream>

#include "mmsim/env/trace_io.hpp"
#include "mmsim/experts/expert_dataset.hpp"

namespace mmsim::cli {

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string item;
  std::istringstream in(s);
  while (std::getline(in, item, sep)) out.push_back(trim(item));
  return out;
}

const std::map<std::string, std::set<std::string>>& schema() {
  static const std::map<std::string, std::set<std::string>> s{
      {"data", {"path"}},
      {"synth",
       {"seed", "steps", "tick_size", "base_price", "trend", "vol_intensity", "volatility", "instrument"}},
      {"strategy", {"id", "a", "b", "c", "d", "signal_index", "m_star", "delta_star"}},
      {"episode", {"T", "N", "n_levels", "K", "lookback", "start", "queue_model", "dt_ms"}},
      {"reward", {"eta", "beta", "C", "pnl_mode"}},
      {"signals", {"kind", "horizons", "theta", "noise"}},
      {"run", {"episodes", "seed", "output_dir", "jobs", "adv_window"}},
  };
  return s;
}

class Reader {
 public:
  explicit Reader(const IniFile& ini) : ini_(ini) {}

  [[noreturn]] void fail(std::size_t line, const std::string& what) const {
    throw ConfigError(ini_.source(), line, what);
  }

  const IniFile::Entry* entry(const std::string& section, const std::string& key) const {
    return ini_.find(section, key);
  }

  template <class T>
  void integer(const std::string& section, const std::string& key, T& out) const {
    const auto* e = entry(section, key);
    if (!e) return;
    T v{};
    const auto& s = e->value;
    const auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc() || p != s.data() + s.size()) {
      fail(e->line, section + "." + key + ": expected an integer, got '" + s + "'");
    }
    out = v;
  }

  void real(const std::string& section, const std::string& key, double& out) const {
    const auto* e = entry(section, key);
    if (!e) return;
    double v = 0.0;
    const auto& s = e->value;
    const auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc() || p != s.data() + s.size()) {
      fail(e->line, section + "." + key + ": expected a number, got '" + s + "'");
    }
    out = v;
  }

  void text(const std::string& section, const std::string& key, std::string& out) const {
    if (const auto* e = entry(section, key)) out = e->value;
  }

  std::size_t line_of(const std::string& section, const std::string& key) const {
    const auto* e = entry(section, key);
    return e ? e->line : 0;
  }

 private:
  const IniFile& ini_;
};

}  // namespace

IniFile IniFile::parse(std::istream& in, const std::string& source) {
  IniFile ini;
  ini.source_ = source;
  std::string raw;
  std::string section;
  std::size_t lineno = 0;
  while (std::getline(in, raw)) {
    ++lineno;
    std::string line = raw;
    if (const auto c = line.find_first_of("#;"); c != std::string::npos) line.erase(c);
    line = trim(line);
    if (line.empty()) continue;
    if (line.front() == '[') {
      if (line.back() != ']') throw ConfigError(source, lineno, "unterminated section header");
      section = trim(line.substr(1, line.size() - 2));
      if (!schema().count(section)) throw ConfigError(source, lineno, "unknown section [" + section + "]");
      if (ini.section_lines_.count(section)) {
        throw ConfigError(source, lineno, "duplicate section [" + section + "]");
      }
      ini.section_lines_[section] = lineno;
      ini.sections_[section];
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string::npos) throw ConfigError(source, lineno, "expected key = value");
    if (section.empty()) throw ConfigError(source, lineno, "key outside of a section");
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (!schema().at(section).count(key)) {
      throw ConfigError(source, lineno, "unknown key '" + key + "' in [" + section + "]");
    }
    auto& sec = ini.sections_[section];
    if (sec.count(key)) throw ConfigError(source, lineno, "duplicate key '" + key + "'");
    sec[key] = Entry{value, lineno};
  }
  return ini;
}

IniFile IniFile::load(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError(path.string(), 0, "cannot open config file");
  IniFile ini = parse(in, path.string());
  ini.base_dir_ = path.parent_path();
  return ini;
}

const IniFile::Entry* IniFile::find(const std::string& section, const std::string& key) const {
  const auto s = sections_.find(section);
  if (s == sections_.end()) return nullptr;
  const auto k = s->second.find(key);
  return k == s->second.end() ? nullptr : &k->second;
}

void IniFile::set(const std::string& section, const std::string& key, const std::string& value) {
  const auto it = schema().find(section);
  if (it == schema().end()) throw ConfigError(source_, 0, "unknown section [" + section + "]");
  if (!it->second.count(key)) throw ConfigError(source_, 0, "unknown key '" + key + "' in [" + section + "]");
  sections_[section][key] = Entry{value, 0};
}

std::string IniFile::canonical() const {
  std::ostringstream os;
  for (const auto& [section, keys] : sections_) {
    os << '[' << section << "]\n";
    for (const auto& [key, e] : keys) os << section << '.' << key << '=' << e.value << '\n';
  }
  return os.str();
}

RunConfig build_run_config(const IniFile& ini) {
  Reader r(ini);
  RunConfig cfg;

  const bool has_data = ini.find("data", "path") != nullptr;
  const bool has_synth = ini.has_section("synth");
  if (has_data == has_synth) {
    r.fail(0, "exactly one data source is required: [data] path or a [synth] section");
  }
  if (has_data) {
    std::filesystem::path p = ini.find("data", "path")->value;
    if (p.is_relative() && !ini.base_dir().empty()) p = ini.base_dir() / p;
    cfg.data_path = p;
  } else {
    replay::SynthConfig s;
    r.integer("synth", "seed", s.seed);
    r.integer("synth", "steps", s.steps);
    r.real("synth", "tick_size", s.tick_size);
    r.real("synth", "base_price", s.base_price);
    r.real("synth", "trend", s.trend);
    r.real("synth", "vol_intensity", s.vol_intensity);
    r.real("synth", "volatility", s.volatility);
    r.text("synth", "instrument", s.instrument);
    if (s.steps < 2) r.fail(r.line_of("synth", "steps"), "synth.steps must be >= 2");
    if (!(s.tick_size > 0)) r.fail(r.line_of("synth", "tick_size"), "synth.tick_size must be positive");
    if (s.vol_intensity < 0) r.fail(r.line_of("synth", "vol_intensity"), "synth.vol_intensity must be >= 0");
    cfg.synth = s;
  }

  auto& st = cfg.strategy;
  r.text("strategy", "id", st.id);
  const auto& ids = experts::strategy_ids();
  if (std::find(ids.begin(), ids.end(), st.id) == ids.end()) {
    std::string valid;
    for (const auto& id : ids) valid += (valid.empty() ? "" : ", ") + id;
    r.fail(r.line_of("strategy", "id"), "unknown strategy '" + st.id + "'; valid ids: " + valid);
  }
  r.real("strategy", "a", st.params.a);
  r.real("strategy", "b", st.params.b);
  r.real("strategy", "c", st.params.c);
  r.real("strategy", "d", st.params.d);
  r.integer("strategy", "signal_index", st.signal_index);
  r.real("strategy", "m_star", st.fixed.m_star);
  r.real("strategy", "delta_star", st.fixed.delta_star);
  try {
    st.params.validate();
  } catch (const std::invalid_argument& e) {
    r.fail(r.line_of("strategy", "a"), e.what());
  }

  auto& ep = cfg.episode;
  r.integer("episode", "T", ep.T);
  r.integer("episode", "N", ep.N);
  r.integer("episode", "n_levels", ep.n_levels);
  r.integer("episode", "K", ep.K);
  r.integer("episode", "lookback", ep.L);
  r.integer("episode", "dt_ms", ep.dt_ms);
  if (const auto* e = ini.find("episode", "start")) {
    if (e->value == "random") {
      ep.start = env::StartMode::Random;
    } else {
      ep.start = env::StartMode::Fixed;
      r.integer("episode", "start", ep.start_index);
    }
  }
  if (const auto* e = ini.find("episode", "queue_model")) {
    try {
      ep.queue_model = env::queue_model_from_string(e->value);
    } catch (const std::invalid_argument& ex) {
      r.fail(e->line, ex.what());
    }
  }
  try {
    ep.validate();
  } catch (const std::invalid_argument& e) {
    r.fail(0, std::string("[episode] ") + e.what());
  }

  auto& rw = cfg.reward;
  r.real("reward", "eta", rw.eta);
  r.real("reward", "beta", rw.beta);
  r.real("reward", "C", rw.C);
  if (const auto* e = ini.find("reward", "pnl_mode")) {
    try {
      rw.pnl_mode = env::pnl_mode_from_string(e->value);
    } catch (const std::invalid_argument& ex) {
      r.fail(e->line, ex.what());
    }
  }
  try {
    rw.validate();
  } catch (const std::invalid_argument& e) {
    r.fail(0, std::string("[reward] ") + e.what());
  }

  auto& sg = cfg.signals;
  if (const auto* e = ini.find("signals", "kind")) {
    if (e->value == "oracle") {
      sg.kind = signals::SignalKind::LookaheadOracle;
    } else if (e->value == "momentum") {
      sg.kind = signals::SignalKind::Momentum;
    } else {
      r.fail(e->line, "unknown signal kind '" + e->value + "' (oracle|momentum)");
    }
  }
  if (const auto* e = ini.find("signals", "horizons")) {
    sg.horizons.clear();
    for (const auto& item : split(e->value, ',')) {
      std::size_t h = 0;
      const auto [p, ec] = std::from_chars(item.data(), item.data() + item.size(), h);
      if (ec != std::errc() || p != item.data() + item.size()) {
        r.fail(e->line, "signals.horizons: bad entry '" + item + "'");
      }
      sg.horizons.push_back(h);
    }
  }
  r.real("signals", "theta", sg.theta);
  r.real("signals", "noise", sg.noise);
  try {
    sg.validate();
  } catch (const std::invalid_argument& e) {
    r.fail(r.line_of("signals", "horizons"), e.what());
  }

  r.integer("run", "episodes", cfg.episodes);
  r.integer("run", "seed", cfg.seed);
  r.integer("run", "jobs", cfg.jobs);
  r.integer("run", "adv_window", cfg.adv_window);
  if (const auto* e = ini.find("run", "output_dir")) cfg.output_dir = e->value;
  if (cfg.episodes < 1) r.fail(r.line_of("run", "episodes"), "run.episodes must be >= 1");
  if (cfg.jobs < 1) r.fail(r.line_of("run", "jobs"), "run.jobs must be >= 1");
  if (cfg.adv_window < 1) r.fail(r.line_of("run", "adv_window"), "run.adv_window must be >= 1");

  cfg.config_hash = experts::fnv1a_hex(ini.canonical());
  return cfg;
}

std::pair<std::string, std::string> split_override_key(const std::string& key) {
  const auto dot = key.find('.');
  if (dot == std::string::npos) return {"strategy", key};
  return {key.substr(0, dot), key.substr(dot + 1)};
}

std::pair<std::string, std::vector<std::string>> parse_sweep(const std::string& text) {
  const auto eq = text.find('=');
  if (eq == std::string::npos || eq == 0) throw std::invalid_argument("sweep must look like key=v1,v2");
  auto values = split(text.substr(eq + 1), ',');
  values.erase(std::remove(values.begin(), values.end(), std::string()), values.end());
  if (values.empty()) throw std::invalid_argument("sweep '" + text + "' has no values");
  return {trim(text.substr(0, eq)), values};
}

}  // namespace mmsim::cli
