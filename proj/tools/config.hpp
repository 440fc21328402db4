#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "gapinterp/interpolator.hpp"
#include "gapinterp/minimax.hpp"
#include "gapinterp/patterns.hpp"
#include "gapinterp/spectral.hpp"

namespace gapinterp::cli {

using nlohmann::json;

struct Options {
    std::size_t grid = kDefaultGrid;
    std::vector<int> truncation = kDefaultSchedule;
    std::uint64_t seed = 1;
    int window = 500;                  // verify: time-domain window
    std::size_t replicates = 100000;   // simulate
    std::size_t path_replicates = 10;  // simulate: paths written to CSV
    std::size_t samples = 100;         // least-favourable: saddle check members
    std::string method = "auto";       // least-favourable: auto | closed_form | numerical
};

struct ExperimentConfig {
    std::optional<SpectralDensity> density;
    std::optional<ObservationPattern> pattern;
    std::optional<FunctionalWeights> weights;
    std::optional<DensityClass> cls;
    Options options;
};

// Each parser throws Error(ConfigError) with the offending key in the message.
SpectralDensity parse_density(const json& j);
ObservationPattern parse_pattern(const json& j);
FunctionalWeights parse_weights(const json& j);
DensityClass parse_class(const json& j);
Options parse_options(const json& j, Options base = {});

// Parses and validates every referenced section before anything is computed.
ExperimentConfig parse_config(const json& j);
json read_json(const std::string& path);
ExperimentConfig load_config(const std::string& path);

}  // namespace gapinterp::cli
