#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

namespace resodim {

/// Validated experiment description: a subcommand plus its key=value
/// parameters. Values stay textual until run() binds them; validation
/// happens in parse_config so that every error is reported at once.
struct ExperimentConfig {
  std::string subcommand;
  std::map<std::string, std::string> values;
  bool dry_run = false;

  const std::string& get(const std::string& key,
                         const std::string& fallback) const {
    auto it = values.find(key);
    return it == values.end() ? fallback : it->second;
  }
  bool has(const std::string& key) const { return values.count(key) > 0; }
};

struct ConfigError {
  int line = 0;  // 1-based; 0 when the error is not tied to a location
  int col = 0;
  std::string key;  // dotted key path when semantic
  std::string message;
};

struct ConfigResult {
  std::optional<ExperimentConfig> config;
  std::vector<ConfigError> errors;  // every problem found, not just the first
};

struct RunResult {
  int status = 0;
  std::string summary;     // human-readable lines for stdout
  std::string csv;         // RFC-4180 rows, empty when not applicable
  std::string svg;         // SVG document, render only
  std::string error_json;  // machine-readable record on failure
};

/// Known subcommand names, in presentation order.
const std::vector<std::string>& subcommand_names();

/// Parses the key-value config text ("key = value" lines, optional
/// [section] prefixes, # comments) and validates keys and values against
/// the subcommand schema.
ConfigResult parse_config(const std::string& text);

/// Merges file text (optional) with override tokens "key=value"; the first
/// bare token names the subcommand and overrides win over the file.
ConfigResult assemble_config(const std::string& file_text,
                             const std::vector<std::string>& overrides,
                             bool dry_run);

/// Executes a validated config; never throws, failures land in the result.
RunResult run(const ExperimentConfig& config);

}  // namespace resodim
