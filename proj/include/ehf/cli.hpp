#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>

#include "ehf/run_config.hpp"

namespace ehf {

inline constexpr int kExitOk = 0;
inline constexpr int kExitValidation = 2;
inline constexpr int kExitNumerical = 3;

std::string version();

/// Execute a resolved configuration and write its products into config.out_dir.
/// Validation errors leave the directory untouched. A one-line reason of the
/// form "ehf: status=<kind> reason=<text>" goes to `err` on failure.
int run(const RunConfig& config, std::ostream& err);

/// Merge every *_manifest.json in `dir` into dir/report.json.
int report(const std::filesystem::path& dir, std::ostream& err);

/// Command-line entry point.
int cli_main(int argc, char** argv);

/// 64-bit FNV-1a digest as 16 hex digits.
std::string fnv1a_hex(std::string_view data);

}  // namespace ehf
