#ifndef ORELAB_HARNESS_HPP
#define ORELAB_HARNESS_HPP

#include <cstdint>
#include <map>
#include <optional>
#include <string>

#include <json.hpp>

namespace orelab::harness {

inline constexpr const char* kVersion = "0.1.0";

struct RunOptions {
    std::optional<std::uint64_t> seed;     // overrides the config seed
    bool stable_output = false;            // omit wall-clock timings
    std::optional<std::string> out_dir;    // recorded in the report only
};

struct RunResult {
    nlohmann::ordered_json report;
    int exit_code = 0;  // 0 = all assertions pass, 1 = assertion failure, 2 = config error
    std::map<std::string, std::string> csv_files;  // filename -> contents
};

/// Runs one experiment command from a parsed config. Never throws: errors
/// are folded into the report and the exit code.
RunResult run(const nlohmann::ordered_json& config, const RunOptions& opts = {});

/// Parses the config text first; malformed JSON yields exit code 2.
RunResult run_text(const std::string& config_text, const RunOptions& opts = {});

}  // namespace orelab::harness

#endif
