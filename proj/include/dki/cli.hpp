#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>

#include "dki/error.hpp"

namespace dki::cli {

enum ExitCode : int {
    kOk = 0,
    kValidationFailed = 1,
    kConfigParse = 2,
    kInvalidParameter = 3,
    kDimensionTooLarge = 4,
    kIndexOutOfRange = 5,
    kInvalidModel = 6,
    kIoError = 7,
};

int exit_code(ErrorKind kind);

struct RunOptions {
    std::string config_path;                // read when config_text is empty
    std::optional<std::string> config_text;  // inline config, used by tests
    std::optional<std::uint64_t> seed;
    std::optional<std::int64_t> trials;
    unsigned threads = 1;
    std::string out_dir = ".";
};

/// Runs `bounds`, `build`, `simulate` or `sweep`. Errors are reported on `err`
/// and mapped to exit codes; nothing is left in out_dir on failure.
int run(const std::string& subcommand, const RunOptions& opts, std::ostream& out, std::ostream& err);

}  // namespace dki::cli
