#pragma once

#include <vector>

#include "flexdes/domain.hpp"
#include "flexdes/lp/problem.hpp"
#include "flexdes/lp/solve.hpp"

// Deterministic equivalent of the three-stage design-and-scheduling
// problem: first-stage capacities, cluster-shared DA trades on the second
// stage, quarter-hourly ID trades and operation on the third stage.

namespace flexdes::model {

enum class MarketMode { IdOnly, Simultaneous };
enum class ObjectiveKind { Tac, Gwi, EpsilonConstraint };

struct ModelConfig {
    MarketMode market_mode = MarketMode::Simultaneous;
    ObjectiveKind objective = ObjectiveKind::Tac;
    double gwi_bound = lp::kInf;  // active for EpsilonConstraint
    int days_per_year = kDaysPerYear;
};

struct DofCensus {
    long design = 0;
    long da = 0;
    long id = 0;
    long battery = 0;
};

/// Typed variable handles into the flat LP column space.
class VariableIndex {
public:
    VariableIndex() = default;
    VariableIndex(int num_clusters, int num_scenarios);

    int q_pv() const { return 0; }
    int q_wind() const { return 1; }
    int q_batt() const { return 2; }
    int da(int cluster, int hour) const { return 3 + cluster * kHoursPerDay + hour; }
    /// Hour-of-quarter map from the DA index rule.
    static int hour_of(int t) { return t / 4; }

    int id_trade(int s, int t) const { return scen0_ + s * per_scen_ + t; }
    int charge(int s, int t) const { return scen0_ + s * per_scen_ + 96 + t; }
    int discharge(int s, int t) const { return scen0_ + s * per_scen_ + 2 * 96 + t; }
    int soc(int s, int t) const { return scen0_ + s * per_scen_ + 3 * 96 + t; }       // t in 0..96
    int power(int s, int t) const { return scen0_ + s * per_scen_ + 3 * 96 + 97 + t; }
    int storage(int s, int t) const {  // t in 0..96
        return scen0_ + s * per_scen_ + 4 * 96 + 97 + t;
    }
    int grid_fee(int s, int t) const { return scen0_ + s * per_scen_ + 4 * 96 + 2 * 97 + t; }

    int num_clusters() const { return clusters_; }
    int num_scenarios() const { return scenarios_; }
    int num_vars() const { return scen0_ + scenarios_ * per_scen_; }

    DofCensus census(MarketMode mode) const;

private:
    int clusters_ = 0;
    int scenarios_ = 0;
    int scen0_ = 0;               // first scenario-block column
    static constexpr int per_scen_ = 5 * 96 + 2 * 97;
};

/// Row handles of the per-quarter defining equalities, flat s*96+t.
struct RowRefs {
    std::vector<int> balance;
    std::vector<int> soc_dyn;
    std::vector<int> storage_dyn;
    std::vector<int> fee;
};

struct BuiltModel {
    lp::LpProblem problem;  // constraints and bounds; costs all zero
    VariableIndex index;
    RowRefs rows;

    /// Feasible nominal-operation starting basis: ID trade carries the
    /// balance row, state variables carry their dynamics, fee auxiliaries
    /// their epigraph row. Skips simplex phase 1 on this model family.
    std::vector<std::pair<int, int>> crash_basis() const;
};

/// Assembles every operational constraint. Throws std::invalid_argument
/// on inconsistent tree or profile lengths.
BuiltModel build(const ScenarioTree& tree, const ProcessSpec& proc, const TechEconSpec& econ,
                 const ModelConfig& cfg);

struct ObjectiveVector {
    std::vector<double> costs;
    double constant = 0.0;
};

/// Annualized cost objective: annuitized CAPEX plus expected electricity
/// and grid-fee OPEX.
ObjectiveVector tac_objective(const VariableIndex& index, const ScenarioTree& tree,
                              const TechEconSpec& econ, int days_per_year = kDaysPerYear);

/// Expected annual global warming impact; sales earn credits.
ObjectiveVector gwi_objective(const VariableIndex& index, const ScenarioTree& tree,
                              const TechEconSpec& econ, int days_per_year = kDaysPerYear);

/// Appends the Pareto bound row gwi'x <= bound.
void epsilon_constraint(lp::LpProblem& problem, const ObjectiveVector& gwi, double bound);

/// Capacities, schedules and annual accounting from an Optimal solution.
/// Cost and emission totals are recomputed from the primal values, not
/// read off the solver objective. Throws std::runtime_error otherwise.
DesignResult extract(const lp::LpSolution& sol, const VariableIndex& index,
                     const ScenarioTree& tree, const TechEconSpec& econ,
                     int days_per_year = kDaysPerYear);

struct SolveOutcome {
    DesignResult design;
    lp::LpSolution solution;
    BuiltModel model;
};

/// build + objective + solve + extract in one step.
SolveOutcome solve_model(const ScenarioTree& tree, const ProcessSpec& proc,
                         const TechEconSpec& econ, const ModelConfig& cfg,
                         const lp::SolveOptions& opts = {});

}  // namespace flexdes::model
