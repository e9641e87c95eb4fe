#pragma once

#include <string>
#include <vector>

#include "flexdes/domain.hpp"
#include "flexdes/model.hpp"

// Study drivers: Pareto fronts, flexibility sweeps, capacity-scaling
// heatmaps, savings decompositions, and market-mode comparisons. Every
// cell is an independent deterministic solve.

namespace flexdes::studies {

enum class SweepParameter { Oversizing, MinPartLoad, StorageHours, RampLimit, CapacityScale };

const char* sweep_parameter_name(SweepParameter p);

struct SweepSpec {
    SweepParameter parameter = SweepParameter::Oversizing;
    std::vector<double> values;
    ProcessSpec base_process;
    TechEconSpec base_econ;
    model::MarketMode market_mode = model::MarketMode::Simultaneous;
    model::ObjectiveKind objective = model::ObjectiveKind::Tac;

    /// Five evenly spaced values from the inflexible setting to twice the
    /// reference flexibility of `parameter`.
    static SweepSpec default_grid(SweepParameter p, const ProcessSpec& proc,
                                  const TechEconSpec& econ);
};

struct ParetoPoint {
    double gwi_bound = 0.0;  // epsilon bound used (equi-spaced by construction)
    DesignResult design;
};

/// GWI- and TAC-optimal endpoints plus n_points-2 equi-spaced epsilon
/// solves between them, ordered from loose to tight GWI bound.
std::vector<ParetoPoint> pareto_front(const ScenarioTree& tree, const ProcessSpec& proc,
                                      const TechEconSpec& econ, model::MarketMode mode,
                                      int n_points = 5, const lp::SolveOptions& opts = {});

struct SweepRow {
    double value = 0.0;
    double objective_without = 0.0;  // no local energy system
    double objective_with = 0.0;
    double relative_savings = 0.0;   // 1 - with/without
    double q_pv_mw = 0.0, q_wind_mw = 0.0, q_batt_mwh = 0.0;
};

std::vector<SweepRow> flexibility_sweep(const ScenarioTree& tree, const SweepSpec& spec,
                                        const lp::SolveOptions& opts = {});

struct HeatmapCell {
    double oversizing = 0.0;
    double capacity_scale = 0.0;
    double tac = 0.0;
    double q_pv_mw = 0.0, q_wind_mw = 0.0, q_batt_mwh = 0.0;
    double tac_estimate = 0.0;        // corner-based additive savings estimate
    double additivity_gap_rel = 0.0;  // |tac - estimate| / tac
};

/// Grid over process oversizing and a joint scaling factor on the three
/// capacity limits. Grids should include the inflexible (first oversizing)
/// and no-system (scale 0) axes; the default grids do.
std::vector<HeatmapCell> capacity_heatmap(const ScenarioTree& tree, const ProcessSpec& proc,
                                          const TechEconSpec& econ, model::MarketMode mode,
                                          const std::vector<double>& oversizing_values,
                                          const std::vector<double>& scale_values,
                                          const lp::SolveOptions& opts = {});

struct DecompositionRow {
    std::string variant;
    double tac = 0.0;
    double savings = 0.0;  // vs the inflexible no-system baseline
};

std::vector<DecompositionRow> savings_decomposition(const ScenarioTree& tree,
                                                    const ProcessSpec& proc,
                                                    const TechEconSpec& econ,
                                                    model::MarketMode mode,
                                                    const lp::SolveOptions& opts = {});

struct MarketComparison {
    DesignResult id_only;
    DesignResult simultaneous;
    double absolute_savings = 0.0;  // TAC(IdOnly) - TAC(Simultaneous)
    double relative_savings = 0.0;
};

MarketComparison market_mode_comparison(const ScenarioTree& tree, const ProcessSpec& proc,
                                        const TechEconSpec& econ,
                                        const lp::SolveOptions& opts = {});

}  // namespace flexdes::studies
