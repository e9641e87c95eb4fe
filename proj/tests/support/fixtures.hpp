#pragma once

#include <cstdint>
#include <vector>

#include "flexdes/domain.hpp"
#include "flexdes/scenarios.hpp"

// Seeded synthetic market/weather days for tests: peaky DA price shapes,
// ID prices as DA plus a configurable market deviation, bell-shaped PV,
// smooth wind, and a grid emission factor anti-correlated with renewables.

namespace flexdes::test {

struct FixtureSpec {
    int days = 8;
    std::uint64_t seed = 42;
    double da_base = 70.0;        // EUR/MWh
    double da_amplitude = 25.0;
    double deviation_std = 8.0;   // ID-DA deviation scale, EUR/MWh
    double wind_level = 0.55;
    double pv_level = 0.85;
    double gwi_base = 380.0;      // kg/MWh
    double gwi_amplitude = 140.0;
};

std::vector<scenarios::DayProfiles> make_days(const FixtureSpec& spec);

/// standardize + kmeans + build_tree in one step.
ScenarioTree make_tree(const FixtureSpec& spec, int k, std::uint64_t cluster_seed = 7);

/// Single-scenario tree with flat prices and zero renewables/emissions.
ScenarioTree flat_tree(double price_eur_mwh);

}  // namespace flexdes::test
