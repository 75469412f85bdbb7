#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace ehf {

struct ParamSpec {
  std::string key;
  std::string fallback;
  std::string help;
};

/// Parameters accepted by each subcommand, with their defaults.
const std::vector<ParamSpec>& param_specs(std::string_view subcommand);

bool is_subcommand(std::string_view name) noexcept;

/// A validated invocation: every key is known to the subcommand and the map
/// holds the resolved value of every parameter, defaults included.
struct RunConfig {
  std::string subcommand;
  std::map<std::string, std::string> params;
  std::filesystem::path out_dir = ".";
  std::uint64_t seed = 0;

  double number(const std::string& key) const;
  std::size_t count(const std::string& key) const;
  bool flag(const std::string& key) const;
  const std::string& text(const std::string& key) const;
  std::vector<double> number_list(const std::string& key) const;
};

/// Split "key=value" tokens. Throws ValidationError on tokens without '=' or with an empty key.
std::map<std::string, std::string> parse_assignments(std::span<const std::string> tokens);

/// Read a flat key=value file: one assignment per line, '#' starts a comment.
std::map<std::string, std::string> read_config_file(const std::filesystem::path& path);

/// Merge file and command-line assignments (command line wins), reject unknown
/// keys and fill defaults.
RunConfig resolve_config(const std::string& subcommand, const std::map<std::string, std::string>& file_params,
                         const std::map<std::string, std::string>& cli_params, const std::filesystem::path& out_dir);

/// "2,3,4" or "start:stop:step" (inclusive of stop within 1e-9 of a step).
std::vector<double> parse_number_list(std::string_view text);

double parse_number(std::string_view text, std::string_view what);

}  // namespace ehf
