#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "sponge/components.hpp"
#include "sponge/ifs.hpp"

namespace sponge {

inline constexpr const char* kToolName = "sponge";
inline constexpr const char* kToolVersion = "1.0.0";

enum class OutputFormat { Json, Csv, Text };

struct RunConfig {
  std::string subcommand;
  std::string input_path;
  std::size_t depth = 3;
  std::vector<Rational> deltas;     // empty means the subcommand default
  OutputFormat format = OutputFormat::Json;
  int precision = 12;
  std::size_t cap = kDefaultObjectCap;
  std::size_t workers = 1;
  std::string check = "all";        // cantor: tree | lipschitz | binary | all
  std::optional<Word> word;         // premoran / square
  bool periodic = false;            // square: repeat the word until every side resolves
  bool timing = true;
};

struct Report {
  std::string subcommand;
  std::string input_digest;
  nlohmann::json config;
  nlohmann::json payload;
  std::optional<double> timing_ms;
  bool rejected = false;            // validation failed; the CLI exits with status 2
};

std::string sha256_hex(std::string_view bytes);

/// Rational as its canonical "p/q" string.
inline nlohmann::json rational_json(const Rational& r) { return r.str(); }

/// Runs one subcommand on already-loaded input text. Library errors propagate.
Report run_subcommand(const RunConfig& cfg, std::string_view input_text);

/// Full JSON document; report_digest covers everything except timing_ms.
nlohmann::json report_document(const Report& report);
std::string emit(const Report& report, OutputFormat format);

}  // namespace sponge
