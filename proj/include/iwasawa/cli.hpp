#pragma once

#include "iwasawa/json_io.hpp"

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace iwasawa::cli {

enum ExitCode : int { kOk = 0, kDomainError = 1, kSchemaViolation = 2, kPrecisionExhausted = 3 };

/// Settings of one invocation after flags and environment overrides.
struct RunConfig {
    std::string command;
    std::string input;  // file path, or "-" for stdin; the directory for suite
    std::optional<int> N, D;
    std::optional<std::string> out;
    std::uint64_t seed = 1;
    int threads = 0;  // suite workers; 0 picks the hardware concurrency
};

inline constexpr int kDefaultPrecision = 16;
inline constexpr int kDefaultDegree = 24;
inline constexpr int kMinPrecision = 4;
inline constexpr int kMinDegree = 4;

/// Subcommands that take a single JSON input document.
const std::vector<std::string>& commands();

/// Validates the input of a subcommand and computes its JSON result.
/// Throws io::SchemaError or iwasawa::Error.
io::Json execute(const std::string& command, const io::Json& input, const RunConfig& cfg);

/// Runs every scenario below dir and writes a TAP report ordered by path.
/// Returns kOk when every scenario passes and kDomainError otherwise.
int run_suite(const std::string& dir, const RunConfig& cfg, std::ostream& out, std::ostream& err);

/// Entry point of the command-line tool.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace iwasawa::cli
