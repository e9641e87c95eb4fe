#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

#include "flexdes/domain.hpp"
#include "flexdes/model.hpp"
#include "flexdes/weather.hpp"

namespace flexdes::cli {

/// Error in user-facing configuration or input data; maps to exit code 2.
class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct RunConfig {
    // Input series, one CSV per series.
    std::string da_price_csv;
    std::string id_price_csv;
    std::string wind_speed_csv;
    std::string irradiance_csv;
    std::string gwi_csv;
    std::string performance_curve;  // empty: built-in generic curve

    ProcessSpec process;
    TechEconSpec econ;
    weather::WindSiteSpec wind_site;
    weather::PvSpec pv_system;

    int cluster_count = 4;
    std::uint64_t seed = 1;
    int kmeans_restarts = 10;

    model::MarketMode market_mode = model::MarketMode::Simultaneous;
    model::ObjectiveKind objective = model::ObjectiveKind::Tac;

    std::string output_dir = "out";
};

/// Parses the JSON run configuration. kWp/kWh-denominated cost entries are
/// converted to the internal MW/MWh unit system here, once. Throws
/// ConfigError with the offending field name.
RunConfig load_config(const std::string& path);
RunConfig parse_config(const std::string& json_text, const std::string& origin);

/// Canonical JSON dump of a config (defaults filled in), used for the run
/// manifest hash.
std::string canonical_config(const RunConfig& cfg);

}  // namespace flexdes::cli
