#include "mmsim/env/trace_io.hpp"

#include <fstream>
#include <stdexcept>

#include <json.hpp>

#include "mmsim/core/errors.hpp"

namespace mmsim::env {

using nlohmann::json;

std::string to_string(StartMode m) { return m == StartMode::Random ? "random" : "fixed"; }

StartMode start_mode_from_string(const std::string& s) {
  if (s == "random") return StartMode::Random;
  if (s == "fixed") return StartMode::Fixed;
  throw std::invalid_argument("unknown start mode '" + s + "' (random|fixed)");
}

std::string to_string(lob::QueueModel m) {
  return m == lob::QueueModel::Pessimistic ? "pessimistic" : "proportional";
}

lob::QueueModel queue_model_from_string(const std::string& s) {
  if (s == "pessimistic") return lob::QueueModel::Pessimistic;
  if (s == "proportional") return lob::QueueModel::Proportional;
  throw std::invalid_argument("unknown queue model '" + s + "' (pessimistic|proportional)");
}

PnlMode pnl_mode_from_string(const std::string& s) {
  if (s == "wealth_delta") return PnlMode::WealthDelta;
  if (s == "verbatim") return PnlMode::Verbatim;
  throw std::invalid_argument("unknown pnl mode '" + s + "' (wealth_delta|verbatim)");
}

namespace {

json quotes_json(const std::vector<Quote>& qs) {
  json arr = json::array();
  for (const auto& q : qs) arr.push_back({q.price.value, q.volume});
  return arr;
}

std::vector<Quote> quotes_from(const json& arr) {
  std::vector<Quote> out;
  for (const auto& q : arr) out.push_back({HalfTickPrice{q.at(0).get<std::int64_t>()}, q.at(1).get<Volume>()});
  return out;
}

json meta_json(const TraceMeta& m) {
  const auto& c = m.config;
  return {
      {"type", "meta"},
      {"tick_size", m.tick_size},
      {"instrument", m.instrument},
      {"strategy", m.strategy},
      {"config_hash", m.config_hash},
      {"start", m.start},
      {"mid_0", m.mid_0},
      {"truncated", m.truncated},
      {"episode",
       {{"T", c.T},
        {"dt_ms", c.dt_ms},
        {"N", c.N},
        {"n_levels", c.n_levels},
        {"K", c.K},
        {"L", c.L},
        {"start", to_string(c.start)},
        {"start_index", c.start_index},
        {"seed", c.seed},
        {"queue_model", to_string(c.queue_model)}}},
      {"reward",
       {{"eta", m.reward.eta},
        {"beta", m.reward.beta},
        {"C", m.reward.C},
        {"pnl_mode", std::string(to_string(m.reward.pnl_mode))}}},
  };
}

TraceMeta meta_from(const json& j) {
  TraceMeta m;
  m.tick_size = j.at("tick_size").get<double>();
  m.instrument = j.at("instrument").get<std::string>();
  m.strategy = j.at("strategy").get<std::string>();
  m.config_hash = j.at("config_hash").get<std::string>();
  m.start = j.at("start").get<std::size_t>();
  m.mid_0 = j.at("mid_0").get<std::int64_t>();
  m.truncated = j.at("truncated").get<bool>();
  const auto& e = j.at("episode");
  auto& c = m.config;
  c.T = e.at("T").get<std::size_t>();
  c.dt_ms = e.at("dt_ms").get<std::int64_t>();
  c.N = e.at("N").get<Volume>();
  c.n_levels = e.at("n_levels").get<int>();
  c.K = e.at("K").get<int>();
  c.L = e.at("L").get<std::size_t>();
  c.start = start_mode_from_string(e.at("start").get<std::string>());
  c.start_index = e.at("start_index").get<std::size_t>();
  c.seed = e.at("seed").get<std::uint64_t>();
  c.queue_model = queue_model_from_string(e.at("queue_model").get<std::string>());
  const auto& r = j.at("reward");
  m.reward.eta = r.at("eta").get<double>();
  m.reward.beta = r.at("beta").get<double>();
  m.reward.C = r.at("C").get<double>();
  m.reward.pnl_mode = pnl_mode_from_string(r.at("pnl_mode").get<std::string>());
  return m;
}

json step_json(const StepRecord& s) {
  json fills = json::array();
  for (const auto& f : s.fills) {
    fills.push_back({{"side", std::string(to_string(f.side))},
                     {"price", f.price.value},
                     {"volume", f.volume},
                     {"passive", f.passive}});
  }
  return {
      {"type", "step"},
      {"step", s.step},
      {"t", s.t},
      {"ts_ms", s.timestamp_ms},
      {"mid", s.mid},
      {"mid_next", s.mid_next},
      {"p_ref", s.p_ref.value},
      {"best_bid_next", s.best_bid_next.value},
      {"best_ask_next", s.best_ask_next.value},
      {"spread", s.spread},
      {"z_before", s.z_before},
      {"z_after", s.z_after},
      {"cash_after", s.cash_after},
      {"fills", fills},
      {"pnl_raw", s.reward.pnl_raw},
      {"pnl", s.reward.pnl},
      {"ip", s.reward.ip},
      {"comp", s.reward.comp},
      {"reward", s.reward.total},
      {"quotes_bid", quotes_json(s.quotes.bids)},
      {"quotes_ask", quotes_json(s.quotes.asks)},
      {"signals", s.signals},
      {"n_cancels", s.n_cancels},
      {"n_placements", s.n_placements},
  };
}

StepRecord step_from(const json& j) {
  StepRecord s;
  s.step = j.at("step").get<std::size_t>();
  s.t = j.at("t").get<std::size_t>();
  s.timestamp_ms = j.at("ts_ms").get<std::int64_t>();
  s.mid = j.at("mid").get<std::int64_t>();
  s.mid_next = j.at("mid_next").get<std::int64_t>();
  s.p_ref = {j.at("p_ref").get<std::int64_t>()};
  s.best_bid_next = {j.at("best_bid_next").get<std::int64_t>()};
  s.best_ask_next = {j.at("best_ask_next").get<std::int64_t>()};
  s.spread = j.at("spread").get<std::int64_t>();
  s.z_before = j.at("z_before").get<Volume>();
  s.z_after = j.at("z_after").get<Volume>();
  s.cash_after = j.at("cash_after").get<std::int64_t>();
  for (const auto& f : j.at("fills")) {
    const auto side = f.at("side").get<std::string>();
    if (side != "bid" && side != "ask") throw std::invalid_argument("bad fill side '" + side + "'");
    s.fills.push_back({side == "bid" ? Side::Bid : Side::Ask, {f.at("price").get<std::int64_t>()},
                       f.at("volume").get<Volume>(), f.at("passive").get<bool>()});
  }
  s.reward.pnl_raw = j.at("pnl_raw").get<std::int64_t>();
  s.reward.pnl = j.at("pnl").get<double>();
  s.reward.ip = j.at("ip").get<double>();
  s.reward.comp = j.at("comp").get<double>();
  s.reward.total = j.at("reward").get<double>();
  s.quotes.bids = quotes_from(j.at("quotes_bid"));
  s.quotes.asks = quotes_from(j.at("quotes_ask"));
  s.signals = j.at("signals").get<std::vector<int>>();
  s.n_cancels = j.at("n_cancels").get<std::size_t>();
  s.n_placements = j.at("n_placements").get<std::size_t>();
  return s;
}

}  // namespace

void write_trace(const EpisodeTrace& trace, std::ostream& out) {
  out << meta_json(trace.meta).dump() << '\n';
  for (const auto& s : trace.steps) out << step_json(s).dump() << '\n';
}

void save_trace(const EpisodeTrace& trace, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write " + path.string());
  write_trace(trace, out);
  if (!out) throw Error("write failed: " + path.string());
}

EpisodeTrace read_trace(std::istream& in) {
  EpisodeTrace trace;
  std::string line;
  std::size_t lineno = 0;
  bool have_meta = false;
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
      const auto type = j.at("type").get<std::string>();
      if (!have_meta) {
        if (type != "meta") throw SchemaError("first record must be the meta header", lineno);
        trace.meta = meta_from(j);
        have_meta = true;
      } else if (type == "step") {
        trace.steps.push_back(step_from(j));
      } else {
        throw SchemaError("unexpected record type '" + type + "'", lineno);
      }
    } catch (const json::exception& e) {
      throw SchemaError(e.what(), lineno);
    } catch (const std::invalid_argument& e) {
      throw SchemaError(e.what(), lineno);
    }
  }
  if (!have_meta) throw SchemaError("trace has no meta header", 0);
  return trace;
}

EpisodeTrace load_trace(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open " + path.string());
  return read_trace(in);
}

}  // namespace mmsim::env
