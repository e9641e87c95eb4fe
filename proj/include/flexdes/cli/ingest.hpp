#pragma once

#include <string>
#include <vector>

#include "flexdes/cli/config.hpp"
#include "flexdes/scenarios.hpp"

namespace flexdes::cli {

struct DroppedDay {
    std::string day_id;
    std::string reason;
};

struct IngestResult {
    std::vector<scenarios::DayProfiles> days;  // sorted by day_id
    std::vector<DroppedDay> dropped;
    std::vector<std::string> warnings;
};

/// Reads the five input series, converts weather measurements to relative
/// power outputs, and aligns everything into per-day bundles. Days failing
/// alignment or the 24/96-step rule are dropped with a reason. Throws
/// ConfigError when a file is missing or no day survives.
IngestResult ingest(const RunConfig& cfg);

}  // namespace flexdes::cli
