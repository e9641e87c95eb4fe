#pragma once

#include <cstddef>
#include <string>
#include <vector>

// Core data types shared by all modules. Internal unit system:
// power MW, energy MWh, money EUR, emissions kgCO2. Values quoted per kWp
// or per kWh in data sheets are converted once at ingestion.

namespace flexdes {

inline constexpr int kQuartersPerDay = 96;
inline constexpr int kHoursPerDay = 24;
inline constexpr double kDeltaTHours = 0.25;
inline constexpr int kDaysPerYear = 365;

enum class Resolution { QuarterHour, Hour };

constexpr int steps_per_day(Resolution r) {
    return r == Resolution::QuarterHour ? kQuartersPerDay : kHoursPerDay;
}

enum class Unit { EurPerMwh, Mw, KgCo2PerMwh, Dimensionless };

const char* unit_name(Unit u);

/// One calendar day of a time series at fixed resolution.
struct DailyProfile {
    Resolution resolution = Resolution::QuarterHour;
    Unit unit = Unit::Dimensionless;
    std::vector<double> values;
    std::string day_id;
};

/// Generalized production process flexibility parameters.
/// Oversizing, part load and ramp limit are fractions of the nominal
/// power intake; the ramp limit is per hour.
struct ProcessSpec {
    double nominal_power_mw = 2.74;
    double oversizing = 0.20;
    double min_part_load = 0.50;
    double storage_hours = 3.0;
    double ramp_per_hour = 0.25;

    double max_power_mw() const { return nominal_power_mw * (1.0 + oversizing); }
    double min_power_mw() const { return nominal_power_mw * min_part_load; }
    /// Product storage capacity in energy-equivalent MWh.
    double storage_capacity_mwh() const { return storage_hours * nominal_power_mw; }

    static ProcessSpec reference() { return ProcessSpec{}; }
    static ProcessSpec inflexible(double nominal_mw) {
        return ProcessSpec{nominal_mw, 0.0, 1.0, 0.0, 0.0};
    }
};

/// Cost and emission data of one technology, in internal units
/// (EUR/MW resp. EUR/MWh for the battery).
struct TechSpec {
    double capex0 = 0.0;         // EUR per MW (battery: per MWh)
    double lifetime_years = 0.0; // gamma2
    double maintenance = 0.0;    // EUR per MW*a (battery: per MWh*a), gamma3
    double gwi_embodied = 0.0;   // kgCO2 per MW (battery: per MWh)
    double capacity_max = 0.0;   // MW (battery: MWh)
};

/// Techno-economic parameters of the PV/wind/battery system.
struct TechEconSpec {
    TechSpec pv;
    TechSpec wind;
    TechSpec battery;
    double interest_rate = 0.08;       // gamma1
    double grid_fee_eur_per_mwh = 29.6;
    double battery_rate_hours = 4.0;   // tau
    double eta_in = 0.0;
    double eta_out = 0.0;

    /// German 2023 data sheet values; capacity caps tied to the process
    /// nominal intake. Embodied GWI factors are licensed data and default
    /// to zero until supplied by the user.
    static TechEconSpec defaults(const ProcessSpec& proc);
};

/// Capital recovery factor: (1+g1)^g2 * g1 / ((1+g1)^g2 - 1).
double annuity_factor(double interest_rate, double lifetime_years);

/// Second-stage node: one typical-day cluster with its averaged DA price.
struct ClusterNode {
    int cluster_id = 0;
    DailyProfile da_price;              // Hour resolution, EUR/MWh
    std::vector<int> member_scenarios;  // scenario ids
};

/// Third-stage node: one historical day mapped to its cluster.
struct ScenarioNode {
    int scenario_id = 0;
    int cluster_id = 0;
    DailyProfile id_price;  // QuarterHour, EUR/MWh
    DailyProfile pv;        // QuarterHour, dimensionless in [0,1]
    DailyProfile wind;      // QuarterHour, dimensionless in [0,1]
    DailyProfile gwi;       // QuarterHour, kgCO2/MWh
    double probability = 0.0;
};

struct ScenarioTree {
    std::vector<ClusterNode> clusters;
    std::vector<ScenarioNode> scenarios;

    const ClusterNode& cluster_of(const ScenarioNode& s) const { return clusters.at(s.cluster_id); }
};

struct CostBreakdown {
    double capex = 0.0;
    double opex_el = 0.0;
    double opex_grid = 0.0;
    double total() const { return capex + opex_el + opex_grid; }
};

struct TradeTotals {
    double da_purchases_mwh = 0.0;
    double da_sales_mwh = 0.0;
    double id_purchases_mwh = 0.0;
    double id_sales_mwh = 0.0;
    double purchases_mwh() const { return da_purchases_mwh + id_purchases_mwh; }
    double sales_mwh() const { return da_sales_mwh + id_sales_mwh; }
};

/// Per-scenario operating schedule extracted from an optimal solution.
struct ScenarioSchedule {
    std::vector<double> process_power_mw;  // 96
    std::vector<double> id_trade_mw;       // 96, purchases > 0
    std::vector<double> charge_mw;         // 96
    std::vector<double> discharge_mw;      // 96
    std::vector<double> soc_mwh;           // 97, cyclic
    std::vector<double> storage_level_mwh; // 97, cyclic
    std::vector<double> opex_grid_eur;     // 96, fee lower envelope
};

/// Optimal design plus schedules and annual accounting.
struct DesignResult {
    double q_pv_mw = 0.0;
    double q_wind_mw = 0.0;
    double q_batt_mwh = 0.0;
    double tac_eur_a = 0.0;
    double gwi_kg_a = 0.0;
    CostBreakdown breakdown;
    TradeTotals trades;
    std::vector<std::vector<double>> da_trade_mw;  // per cluster, 24 hourly values
    std::vector<ScenarioSchedule> schedules;       // per scenario
};

/// Report-based invariant checking; empty result means all invariants hold.
std::vector<std::string> validate(const std::vector<DailyProfile>& profiles,
                                  const ProcessSpec& proc, const TechEconSpec& econ);

std::vector<std::string> validate_profile(const DailyProfile& p);
std::vector<std::string> validate_process(const ProcessSpec& p);
std::vector<std::string> validate_econ(const TechEconSpec& e);
std::vector<std::string> validate_tree(const ScenarioTree& tree);

}  // namespace flexdes
