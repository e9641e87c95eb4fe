#include "flexdes/studies.hpp"

#include <cmath>
#include <stdexcept>

namespace flexdes::studies {

using model::MarketMode;
using model::ModelConfig;
using model::ObjectiveKind;

namespace {

TechEconSpec without_system(TechEconSpec econ) {
    econ.pv.capacity_max = 0.0;
    econ.wind.capacity_max = 0.0;
    econ.battery.capacity_max = 0.0;
    return econ;
}

TechEconSpec scaled_system(TechEconSpec econ, double scale) {
    econ.pv.capacity_max *= scale;
    econ.wind.capacity_max *= scale;
    econ.battery.capacity_max *= scale;
    return econ;
}

ProcessSpec inflexible_like(const ProcessSpec& proc) {
    return ProcessSpec::inflexible(proc.nominal_power_mw);
}

DesignResult solve_or_throw(const ScenarioTree& tree, const ProcessSpec& proc,
                            const TechEconSpec& econ, const ModelConfig& cfg,
                            const lp::SolveOptions& opts) {
    auto out = model::solve_model(tree, proc, econ, cfg, opts);
    if (out.solution.status != lp::SolveStatus::Optimal)
        throw std::runtime_error(std::string("study solve failed: ") +
                                 lp::status_name(out.solution.status));
    // Every study row rests on a certified optimum.
    const auto rep = lp::check_solution(out.model.problem, out.solution);
    if (rep.duality_gap > 1e-6 * (1.0 + std::abs(out.solution.objective)))
        throw std::runtime_error("study solve lacks an optimality certificate (gap " +
                                 std::to_string(rep.duality_gap) + ")");
    return out.design;
}

double objective_value(const DesignResult& r, ObjectiveKind kind) {
    return kind == ObjectiveKind::Gwi ? r.gwi_kg_a : r.tac_eur_a;
}

}  // namespace

const char* sweep_parameter_name(SweepParameter p) {
    switch (p) {
        case SweepParameter::Oversizing: return "oversizing";
        case SweepParameter::MinPartLoad: return "min_part_load";
        case SweepParameter::StorageHours: return "storage_hours";
        case SweepParameter::RampLimit: return "ramp_limit";
        case SweepParameter::CapacityScale: return "capacity_scale";
    }
    return "?";
}

SweepSpec SweepSpec::default_grid(SweepParameter p, const ProcessSpec& proc,
                                  const TechEconSpec& econ) {
    SweepSpec s;
    s.parameter = p;
    s.base_process = proc;
    s.base_econ = econ;
    double lo = 0.0, hi = 0.0;
    switch (p) {
        case SweepParameter::Oversizing:
            lo = 0.0;
            hi = 2.0 * proc.oversizing;
            break;
        case SweepParameter::MinPartLoad:
            // Inflexible means part load pinned at 1; twice the reference
            // flexibility halves the distance to zero load.
            lo = 1.0;
            hi = std::max(0.0, 1.0 - 2.0 * (1.0 - proc.min_part_load));
            break;
        case SweepParameter::StorageHours:
            lo = 0.0;
            hi = 2.0 * proc.storage_hours;
            break;
        case SweepParameter::RampLimit:
            lo = 0.0;
            hi = 2.0 * proc.ramp_per_hour;
            break;
        case SweepParameter::CapacityScale:
            lo = 0.0;
            hi = 2.0;
            break;
    }
    for (int i = 0; i < 5; ++i) s.values.push_back(lo + (hi - lo) * i / 4.0);
    return s;
}

std::vector<ParetoPoint> pareto_front(const ScenarioTree& tree, const ProcessSpec& proc,
                                      const TechEconSpec& econ, model::MarketMode mode,
                                      int n_points, const lp::SolveOptions& opts) {
    if (n_points < 2) throw std::invalid_argument("pareto_front: need at least two points");
    ModelConfig cfg;
    cfg.market_mode = mode;
    cfg.objective = ObjectiveKind::Gwi;
    const DesignResult gwi_opt = solve_or_throw(tree, proc, econ, cfg, opts);
    cfg.objective = ObjectiveKind::Tac;
    const DesignResult tac_opt = solve_or_throw(tree, proc, econ, cfg, opts);

    const double g_hi = tac_opt.gwi_kg_a;
    const double g_lo = gwi_opt.gwi_kg_a;
    std::vector<ParetoPoint> front;
    front.reserve(n_points);
    for (int i = 0; i < n_points; ++i) {
        const double bound = g_hi - (g_hi - g_lo) * i / (n_points - 1);
        ModelConfig pcfg;
        pcfg.market_mode = mode;
        pcfg.objective = ObjectiveKind::EpsilonConstraint;
        pcfg.gwi_bound = bound;
        ParetoPoint pt;
        pt.gwi_bound = bound;
        pt.design = solve_or_throw(tree, proc, econ, pcfg, opts);
        front.push_back(std::move(pt));
    }
    return front;
}

std::vector<SweepRow> flexibility_sweep(const ScenarioTree& tree, const SweepSpec& spec,
                                        const lp::SolveOptions& opts) {
    if (spec.values.empty()) throw std::invalid_argument("flexibility_sweep: empty grid");
    ModelConfig cfg;
    cfg.market_mode = spec.market_mode;
    cfg.objective = spec.objective;

    std::vector<SweepRow> rows;
    bool have_const_without = false;
    double const_without = 0.0;
    for (double v : spec.values) {
        ProcessSpec proc = spec.base_process;
        TechEconSpec econ = spec.base_econ;
        switch (spec.parameter) {
            case SweepParameter::Oversizing: proc.oversizing = v; break;
            case SweepParameter::MinPartLoad: proc.min_part_load = v; break;
            case SweepParameter::StorageHours: proc.storage_hours = v; break;
            case SweepParameter::RampLimit: proc.ramp_per_hour = v; break;
            case SweepParameter::CapacityScale: econ = scaled_system(econ, v); break;
        }
        SweepRow row;
        row.value = v;
        // The no-system reference depends on the process only; cache it
        // for the capacity sweep where the process never changes.
        if (spec.parameter == SweepParameter::CapacityScale && have_const_without) {
            row.objective_without = const_without;
        } else {
            row.objective_without = objective_value(
                solve_or_throw(tree, proc, without_system(econ), cfg, opts), spec.objective);
            const_without = row.objective_without;
            have_const_without = true;
        }
        const DesignResult with = solve_or_throw(tree, proc, econ, cfg, opts);
        row.objective_with = objective_value(with, spec.objective);
        row.relative_savings = 1.0 - row.objective_with / row.objective_without;
        row.q_pv_mw = with.q_pv_mw;
        row.q_wind_mw = with.q_wind_mw;
        row.q_batt_mwh = with.q_batt_mwh;
        rows.push_back(row);
    }
    return rows;
}

std::vector<HeatmapCell> capacity_heatmap(const ScenarioTree& tree, const ProcessSpec& proc,
                                          const TechEconSpec& econ, model::MarketMode mode,
                                          const std::vector<double>& oversizing_values,
                                          const std::vector<double>& scale_values,
                                          const lp::SolveOptions& opts) {
    if (oversizing_values.empty() || scale_values.empty())
        throw std::invalid_argument("capacity_heatmap: empty grid");
    ModelConfig cfg;
    cfg.market_mode = mode;
    cfg.objective = ObjectiveKind::Tac;

    const std::size_t no = oversizing_values.size(), ns = scale_values.size();
    std::vector<HeatmapCell> cells(no * ns);
    for (std::size_t i = 0; i < no; ++i) {
        ProcessSpec pr = proc;
        pr.oversizing = oversizing_values[i];
        for (std::size_t j = 0; j < ns; ++j) {
            auto& cell = cells[i * ns + j];
            cell.oversizing = oversizing_values[i];
            cell.capacity_scale = scale_values[j];
            const DesignResult r =
                solve_or_throw(tree, pr, scaled_system(econ, scale_values[j]), cfg, opts);
            cell.tac = r.tac_eur_a;
            cell.q_pv_mw = r.q_pv_mw;
            cell.q_wind_mw = r.q_wind_mw;
            cell.q_batt_mwh = r.q_batt_mwh;
        }
    }
    // Additive savings estimate off the grid corner.
    const double base = cells[0].tac;
    for (std::size_t i = 0; i < no; ++i) {
        for (std::size_t j = 0; j < ns; ++j) {
            auto& cell = cells[i * ns + j];
            const double flex_savings = base - cells[i * ns].tac;
            const double sys_savings = base - cells[j].tac;
            cell.tac_estimate = base - flex_savings - sys_savings;
            cell.additivity_gap_rel = std::abs(cell.tac - cell.tac_estimate) / cell.tac;
        }
    }
    return cells;
}

std::vector<DecompositionRow> savings_decomposition(const ScenarioTree& tree,
                                                    const ProcessSpec& proc,
                                                    const TechEconSpec& econ,
                                                    model::MarketMode mode,
                                                    const lp::SolveOptions& opts) {
    ModelConfig cfg;
    cfg.market_mode = mode;
    cfg.objective = ObjectiveKind::Tac;
    const ProcessSpec inflex = inflexible_like(proc);

    TechEconSpec battery_only = without_system(econ);
    battery_only.battery.capacity_max = econ.battery.capacity_max;
    TechEconSpec renewables_only = econ;
    renewables_only.battery.capacity_max = 0.0;

    std::vector<DecompositionRow> rows;
    auto add = [&](std::string name, const ProcessSpec& pr, const TechEconSpec& ec) {
        DecompositionRow row;
        row.variant = std::move(name);
        row.tac = solve_or_throw(tree, pr, ec, cfg, opts).tac_eur_a;
        rows.push_back(std::move(row));
    };
    add("inflexible_no_system", inflex, without_system(econ));
    add("flexible_full_system", proc, econ);
    add("inflexible_battery_only", inflex, battery_only);
    add("inflexible_wind_pv_only", inflex, renewables_only);
    add("flexible_no_system", proc, without_system(econ));
    const double base = rows[0].tac;
    for (auto& r : rows) r.savings = base - r.tac;
    return rows;
}

MarketComparison market_mode_comparison(const ScenarioTree& tree, const ProcessSpec& proc,
                                        const TechEconSpec& econ,
                                        const lp::SolveOptions& opts) {
    ModelConfig cfg;
    cfg.objective = ObjectiveKind::Tac;
    cfg.market_mode = MarketMode::IdOnly;
    MarketComparison cmp;
    cmp.id_only = solve_or_throw(tree, proc, econ, cfg, opts);
    cfg.market_mode = MarketMode::Simultaneous;
    cmp.simultaneous = solve_or_throw(tree, proc, econ, cfg, opts);
    cmp.absolute_savings = cmp.id_only.tac_eur_a - cmp.simultaneous.tac_eur_a;
    cmp.relative_savings = cmp.absolute_savings / cmp.id_only.tac_eur_a;
    return cmp;
}

}  // namespace flexdes::studies
