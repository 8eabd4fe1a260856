#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>

#include "mmsim/env/environment.hpp"

namespace mmsim::env {

// Line-delimited trace: a header line {"type":"meta", ...} followed by one {"type":"step", ...}
// line per step. Prices and cash are written in half ticks so the file round-trips exactly.
void write_trace(const EpisodeTrace& trace, std::ostream& out);
void save_trace(const EpisodeTrace& trace, const std::filesystem::path& path);

// Throws ParseError / SchemaError with the offending line number.
EpisodeTrace read_trace(std::istream& in);
EpisodeTrace load_trace(const std::filesystem::path& path);

std::string to_string(StartMode m);
StartMode start_mode_from_string(const std::string& s);
std::string to_string(lob::QueueModel m);
lob::QueueModel queue_model_from_string(const std::string& s);
PnlMode pnl_mode_from_string(const std::string& s);

}  // namespace mmsim::env
