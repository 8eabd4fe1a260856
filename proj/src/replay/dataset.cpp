#include "mmsim/replay/dataset.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <string_view>

#include "mmsim/core/errors.hpp"

namespace mmsim::replay {

namespace {

constexpr std::size_t kColumns = 1 + 4 * kDepth + 2;

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
  return s;
}

std::vector<std::string_view> split(std::string_view line, char sep) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (true) {
    const std::size_t pos = line.find(sep, start);
    out.push_back(trim(line.substr(start, pos == std::string_view::npos ? line.npos : pos - start)));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return out;
}

std::int64_t parse_int(std::string_view field, std::size_t line, std::string_view column) {
  std::int64_t value = 0;
  const auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), value);
  if (ec != std::errc{} || ptr != field.data() + field.size()) {
    throw ParseError("column " + std::string(column) + ": expected integer, got '" +
                         std::string(field) + "'",
                     line);
  }
  return value;
}

double parse_double(std::string_view field, std::size_t line, std::string_view column) {
  double value = 0;
  const auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), value);
  if (ec != std::errc{} || ptr != field.data() + field.size() || !std::isfinite(value)) {
    throw ParseError("column " + std::string(column) + ": expected number, got '" +
                         std::string(field) + "'",
                     line);
  }
  return value;
}

HalfTickPrice parse_price(std::string_view field, const DatasetMeta& meta, std::size_t line,
                          std::string_view column) {
  if (meta.price_format == PriceFormat::HalfTicks) {
    const HalfTickPrice p{parse_int(field, line, column)};
    if (!p.on_tick()) throw SchemaError("column " + std::string(column) + ": odd half-tick price", line);
    return p;
  }
  const double half_ticks = parse_double(field, line, column) * 2.0 / meta.tick_size;
  const double rounded = std::round(half_ticks);
  if (std::abs(half_ticks - rounded) > 1e-6 || std::fmod(rounded, 2.0) != 0.0) {
    throw SchemaError("column " + std::string(column) + ": price " + std::string(field) +
                          " is not on the tick grid",
                      line);
  }
  return HalfTickPrice{static_cast<std::int64_t>(rounded)};
}

int tick_decimals(double tick) {
  for (int k = 0; k <= 9; ++k) {
    const double scaled = tick * std::pow(10.0, k);
    if (std::abs(scaled - std::round(scaled)) < 1e-9 * std::max(1.0, scaled)) return k;
  }
  return 10;
}

std::string format_fixed(double value, int decimals) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", decimals, value);
  return buf;
}

std::string format_price(HalfTickPrice p, const DatasetMeta& meta, int decimals) {
  if (meta.price_format == PriceFormat::HalfTicks) return std::to_string(p.value);
  return format_fixed(to_price(p, meta.tick_size), decimals);
}

}  // namespace

bool Dataset::gap_before(std::size_t i) const {
  return std::binary_search(gaps.begin(), gaps.end(), i);
}

void validate_snapshot(const SnapshotRecord& r, std::size_t line) {
  for (std::size_t i = 0; i < kDepth; ++i) {
    if (!r.bid_prices[i].on_tick() || !r.ask_prices[i].on_tick()) {
      throw SchemaError("price off the tick grid", line);
    }
    if (r.bid_vols[i] < 0 || r.ask_vols[i] < 0) throw SchemaError("negative level volume", line);
    if (i > 0 && !(r.bid_prices[i] < r.bid_prices[i - 1])) {
      throw SchemaError("bid prices must strictly decrease with depth", line);
    }
    if (i > 0 && !(r.ask_prices[i] > r.ask_prices[i - 1])) {
      throw SchemaError("ask prices must strictly increase with depth", line);
    }
  }
  if (!(r.bid_prices[0] < r.ask_prices[0])) {
    throw SchemaError("best bid must be below best ask", line);
  }
  if (r.interval_trade_volume < 0 || r.interval_turnover < 0) {
    throw SchemaError("negative trade volume or turnover", line);
  }
}

void finalize_dataset(Dataset& data) {
  data.gaps.clear();
  for (std::size_t i = 1; i < data.records.size(); ++i) {
    const std::int64_t dt = data.records[i].timestamp_ms - data.records[i - 1].timestamp_ms;
    if (dt <= 0) {
      throw NonMonotoneTimestamps("timestamp " + std::to_string(data.records[i].timestamp_ms) +
                                      " does not increase",
                                  i + 2);  // header is line 1
    }
    if (dt != data.meta.cadence_ms) data.gaps.push_back(i);
  }
}

std::filesystem::path sidecar_path(const std::filesystem::path& csv) {
  std::filesystem::path meta = csv;
  meta.replace_extension(".meta");
  return meta;
}

DatasetMeta load_metadata(const std::filesystem::path& meta_path) {
  DatasetMeta meta;
  std::ifstream in(meta_path);
  if (!in) throw SchemaError("cannot open metadata file " + meta_path.string(), 0);
  std::string raw;
  std::size_t line_no = 0;
  while (std::getline(in, raw)) {
    ++line_no;
    const std::string_view line = trim(raw);
    if (line.empty() || line.front() == '#') continue;
    const auto eq = line.find('=');
    if (eq == std::string_view::npos) throw ParseError("expected key=value", line_no);
    const std::string_view key = trim(line.substr(0, eq));
    const std::string_view value = trim(line.substr(eq + 1));
    if (key == "tick_size") {
      meta.tick_size = parse_double(value, line_no, key);
      if (!(meta.tick_size > 0)) throw SchemaError("tick_size must be positive", line_no);
    } else if (key == "cadence_ms") {
      meta.cadence_ms = parse_int(value, line_no, key);
      if (meta.cadence_ms <= 0) throw SchemaError("cadence_ms must be positive", line_no);
    } else if (key == "instrument") {
      meta.instrument = std::string(value);
    } else if (key == "price_format") {
      if (value == "decimal") {
        meta.price_format = PriceFormat::Decimal;
      } else if (value == "half_ticks") {
        meta.price_format = PriceFormat::HalfTicks;
      } else {
        throw SchemaError("price_format must be decimal or half_ticks", line_no);
      }
    } else if (key == "multiplier") {
      meta.multiplier = parse_double(value, line_no, key);
      if (!(meta.multiplier > 0)) throw SchemaError("multiplier must be positive", line_no);
    } else {
      throw SchemaError("unknown metadata key '" + std::string(key) + "'", line_no);
    }
  }
  return meta;
}

void save_metadata(const DatasetMeta& meta, const std::filesystem::path& meta_path) {
  std::ofstream out(meta_path, std::ios::binary);
  if (!out) throw Error("cannot write " + meta_path.string());
  out << "tick_size=" << format_fixed(meta.tick_size, tick_decimals(meta.tick_size)) << '\n'
      << "cadence_ms=" << meta.cadence_ms << '\n'
      << "instrument=" << meta.instrument << '\n'
      << "price_format=" << (meta.price_format == PriceFormat::Decimal ? "decimal" : "half_ticks")
      << '\n';
  if (meta.multiplier != 1.0) out << "multiplier=" << meta.multiplier << '\n';
}

std::string csv_header() {
  std::string h = "ts_ms";
  for (const char* prefix : {"bp", "bv", "ap", "av"}) {
    for (std::size_t i = 1; i <= kDepth; ++i) h += "," + std::string(prefix) + std::to_string(i);
  }
  return h + ",vol,turnover";
}

Dataset load_dataset(const std::filesystem::path& csv) {
  Dataset data;
  const auto meta_path = sidecar_path(csv);
  if (std::filesystem::exists(meta_path)) data.meta = load_metadata(meta_path);

  std::ifstream in(csv);
  if (!in) throw SchemaError("cannot open dataset " + csv.string(), 0);

  std::string raw;
  if (!std::getline(in, raw)) throw SchemaError("empty dataset file", 1);
  {
    static const std::string header = csv_header();
    if (split(trim(raw), ',') != split(header, ',')) throw SchemaError("header must be: " + header, 1);
  }

  static const std::string header_text = csv_header();
  static const auto names = split(header_text, ',');
  std::size_t line_no = 1;
  while (std::getline(in, raw)) {
    ++line_no;
    const std::string_view line = trim(raw);
    if (line.empty()) continue;
    const auto f = split(line, ',');
    if (f.size() != kColumns) {
      throw ParseError("expected " + std::to_string(kColumns) + " fields, got " +
                           std::to_string(f.size()),
                       line_no);
    }
    SnapshotRecord r;
    r.timestamp_ms = parse_int(f[0], line_no, names[0]);
    for (std::size_t i = 0; i < kDepth; ++i) {
      r.bid_prices[i] = parse_price(f[1 + i], data.meta, line_no, names[1 + i]);
      r.bid_vols[i] = parse_int(f[1 + kDepth + i], line_no, names[1 + kDepth + i]);
      r.ask_prices[i] = parse_price(f[1 + 2 * kDepth + i], data.meta, line_no, names[1 + 2 * kDepth + i]);
      r.ask_vols[i] = parse_int(f[1 + 3 * kDepth + i], line_no, names[1 + 3 * kDepth + i]);
    }
    r.interval_trade_volume = parse_int(f[1 + 4 * kDepth], line_no, "vol");
    if (data.meta.price_format == PriceFormat::HalfTicks) {
      r.interval_turnover = parse_int(f[2 + 4 * kDepth], line_no, "turnover");
    } else {
      const double turnover = parse_double(f[2 + 4 * kDepth], line_no, "turnover");
      r.interval_turnover = static_cast<std::int64_t>(
          std::llround(turnover * 2.0 / (data.meta.tick_size * data.meta.multiplier)));
    }
    validate_snapshot(r, line_no);
    data.records.push_back(r);
  }
  finalize_dataset(data);
  return data;
}

void save_dataset(const Dataset& data, const std::filesystem::path& csv) {
  std::ofstream out(csv, std::ios::binary);
  if (!out) throw Error("cannot write " + csv.string());
  const int decimals = tick_decimals(data.meta.tick_size);
  out << csv_header() << '\n';
  for (const auto& r : data.records) {
    out << r.timestamp_ms;
    for (const auto& p : r.bid_prices) out << ',' << format_price(p, data.meta, decimals);
    for (const auto v : r.bid_vols) out << ',' << v;
    for (const auto& p : r.ask_prices) out << ',' << format_price(p, data.meta, decimals);
    for (const auto v : r.ask_vols) out << ',' << v;
    out << ',' << r.interval_trade_volume << ',';
    if (data.meta.price_format == PriceFormat::HalfTicks) {
      out << r.interval_turnover;
    } else {
      out << format_fixed(half_ticks_to_price_units(r.interval_turnover, data.meta.tick_size) *
                              data.meta.multiplier,
                          decimals);
    }
    out << '\n';
  }
  save_metadata(data.meta, sidecar_path(csv));
}

}  // namespace mmsim::replay
