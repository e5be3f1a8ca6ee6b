#pragma once

#include "config.hpp"

#include <filesystem>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

namespace visnec::cli {

inline constexpr std::string_view kToolName = "visnec";
inline constexpr std::string_view kToolVersion = "0.1.0";

enum ExitCode : int { kOk = 0, kInputError = 2, kInternalError = 3 };

/// Entry point shared by the executable and the tests. Never throws:
/// failures are reported on `err` and mapped to an ExitCode.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

// Subcommands, callable directly with a resolved config. They throw
// visnec::Error on failure and return the paths they wrote.
std::vector<std::filesystem::path> cmd_score(const PipelineConfig& cfg);
std::vector<std::filesystem::path> cmd_cluster(const PipelineConfig& cfg);
std::vector<std::filesystem::path> cmd_select(const PipelineConfig& cfg);
std::vector<std::filesystem::path> cmd_report(const PipelineConfig& cfg);
std::vector<std::filesystem::path> cmd_pipeline(const PipelineConfig& cfg);

std::string sha256_hex(std::string_view bytes);

}  // namespace visnec::cli
