#pragma once

// The pqmsim command line: estimate | simulate | classify | export.

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

namespace pqm::cli {

inline constexpr int kSchemaVersion = 1;

/// Exit codes besides 0 (success) and CLI11's own usage codes.
inline constexpr int kExitDomain = 2;
inline constexpr int kExitResource = 3;
inline constexpr int kExitParse = 4;
inline constexpr int kExitIo = 5;

struct RunConfig {
    std::string command;
    std::string data;
    std::string label_col;  // empty: last column
    std::string encoding;   // empty: the algorithm's own encoding
    std::string algo = "ppqm";
    std::string variant = "ft";
    std::string layout = "theory";
    double nu = 1.0;
    std::string mode = "exact";
    std::size_t shots = 1024;
    std::uint64_t seed = 0;
    int max_qubits = 26;
    std::string format = "json";
    std::string out;

    // Inline instances.
    std::string patterns;  // comma-separated bit strings
    std::string widths;    // comma-separated feature widths for bit-string input
    std::string target;    // bit string, or comma-separated feature values with --data
    std::optional<std::size_t> z;
    std::optional<std::size_t> a;
    std::size_t r = 1;
    double gamma = 0.0;
    double delta = 0.0;

    bool histogram = false;
    bool measure = false;
    bool literal_nisq_phase = false;
    bool omega_grid = false;
    std::string label;  // export: which label database to build
};

nlohmann::ordered_json to_json(const RunConfig& config);

/// Parses `args` (without the program name) and runs the command. Output goes
/// to `out` unless --out names a file; diagnostics go to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace pqm::cli
