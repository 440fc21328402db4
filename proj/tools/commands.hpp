#pragma once

#include <cstdint>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "config.hpp"

namespace gapinterp::cli {

inline const std::vector<std::string> kCommands{"minimality", "interpolate", "least-favourable", "verify", "simulate"};

enum class Format { Json, Csv, Both };

struct Flags {
    std::optional<std::size_t> grid;
    std::optional<std::vector<int>> truncation;
    std::optional<std::uint64_t> seed;
    std::string out = ".";
    Format format = Format::Json;
};

inline constexpr int kExitOk = 0;
inline constexpr int kExitValidation = 1;
inline constexpr int kExitNumerical = 2;

// JSON text with every floating-point number printed as %.17g; non-finite numbers become null.
std::string dump(const json& j);

json error_record(ErrorCode code, const std::string& message);

// Runs one command, writes <out>/<command>.json and CSV artifacts, echoes the JSON record
// to `out` and returns the exit status.
int run(const std::string& command, const std::string& config_path, const Flags& flags, std::ostream& out);

}  // namespace gapinterp::cli
