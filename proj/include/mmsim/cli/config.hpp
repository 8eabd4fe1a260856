#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "mmsim/core/errors.hpp"
#include "mmsim/env/config.hpp"
#include "mmsim/env/reward.hpp"
#include "mmsim/experts/policies.hpp"
#include "mmsim/replay/synth.hpp"
#include "mmsim/signals/signals.hpp"

namespace mmsim::cli {

// Config problems, reported as "source:line: message".
class ConfigError : public DataError {
 public:
  ConfigError(const std::string& source, std::size_t line, const std::string& what)
      : DataError(source + (line ? ":" + std::to_string(line) : std::string()) + ": " + what, 0),
        where_line_(line) {}
  std::size_t config_line() const noexcept { return where_line_; }

 private:
  std::size_t where_line_;
};

// Sectioned key = value text. '#' and ';' start comments; keys outside a section are errors.
class IniFile {
 public:
  struct Entry {
    std::string value;
    std::size_t line = 0;  // 0 for values set programmatically
  };
  using Section = std::map<std::string, Entry>;

  static IniFile parse(std::istream& in, const std::string& source);
  static IniFile load(const std::filesystem::path& path);

  bool has_section(const std::string& section) const { return sections_.count(section) > 0; }
  const Entry* find(const std::string& section, const std::string& key) const;
  void set(const std::string& section, const std::string& key, const std::string& value);
  const std::map<std::string, Section>& sections() const noexcept { return sections_; }
  const std::string& source() const noexcept { return source_; }
  const std::filesystem::path& base_dir() const noexcept { return base_dir_; }

  // Sorted "section.key=value" lines; stable input for the config hash.
  std::string canonical() const;

 private:
  std::string source_;
  std::filesystem::path base_dir_;
  std::map<std::string, Section> sections_;
  std::map<std::string, std::size_t> section_lines_;
};

struct RunConfig {
  std::optional<std::filesystem::path> data_path;
  std::optional<replay::SynthConfig> synth;
  experts::StrategySpec strategy;
  env::EpisodeConfig episode;
  env::RewardParams reward;
  signals::SignalSpec signals;
  std::size_t episodes = 1;
  std::uint64_t seed = 0;
  std::filesystem::path output_dir = "mmsim_out";
  std::size_t jobs = 1;
  std::size_t adv_window = 20;
  std::string config_hash;
};

// Validates sections, keys and values. Throws ConfigError.
RunConfig build_run_config(const IniFile& ini);

// "key" means [strategy] key; "section.key" addresses any section.
std::pair<std::string, std::string> split_override_key(const std::string& key);

// Parses "key=v1,v2,..". Throws std::invalid_argument.
std::pair<std::string, std::vector<std::string>> parse_sweep(const std::string& text);

}  // namespace mmsim::cli
