#include "flexdes/model.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace flexdes::model {

using lp::kInf;
using lp::LpProblem;
using lp::RowSense;

VariableIndex::VariableIndex(int num_clusters, int num_scenarios)
    : clusters_(num_clusters),
      scenarios_(num_scenarios),
      scen0_(3 + num_clusters * kHoursPerDay) {}

DofCensus VariableIndex::census(MarketMode mode) const {
    DofCensus c;
    c.design = 3;
    c.da = mode == MarketMode::IdOnly ? 0 : static_cast<long>(clusters_) * kHoursPerDay;
    c.id = static_cast<long>(scenarios_) * kQuartersPerDay;
    c.battery = 2L * scenarios_ * kQuartersPerDay;
    return c;
}

namespace {

void check_tree(const ScenarioTree& tree) {
    if (tree.scenarios.empty() || tree.clusters.empty())
        throw std::invalid_argument("model: empty scenario tree");
    for (const auto& c : tree.clusters) {
        if (c.da_price.values.size() != kHoursPerDay)
            throw std::invalid_argument("model: cluster DA profile length mismatch");
    }
    for (const auto& s : tree.scenarios) {
        if (s.cluster_id < 0 || s.cluster_id >= static_cast<int>(tree.clusters.size()))
            throw std::invalid_argument("model: scenario references unknown cluster");
        for (const auto* p : {&s.id_price, &s.pv, &s.wind, &s.gwi}) {
            if (p->values.size() != kQuartersPerDay)
                throw std::invalid_argument("model: scenario profile length mismatch");
        }
    }
}

}  // namespace

BuiltModel build(const ScenarioTree& tree, const ProcessSpec& proc, const TechEconSpec& econ,
                 const ModelConfig& cfg) {
    check_tree(tree);
    const int nc = static_cast<int>(tree.clusters.size());
    const int ns = static_cast<int>(tree.scenarios.size());
    const double dt = kDeltaTHours;
    const double rate_cap = 1.0 / econ.battery_rate_hours;  // q_in/out <= Q_B * rate_cap
    const double pmax = proc.max_power_mw();
    const double pmin = proc.min_power_mw();
    const double ramp = proc.ramp_per_hour * proc.nominal_power_mw * dt;
    const double mcap = proc.storage_capacity_mwh();

    BuiltModel bm;
    bm.index = VariableIndex(nc, ns);
    LpProblem& p = bm.problem;

    p.add_variable("q_pv", 0.0, econ.pv.capacity_max);
    p.add_variable("q_wind", 0.0, econ.wind.capacity_max);
    p.add_variable("q_batt", 0.0, econ.battery.capacity_max);
    for (int c = 0; c < nc; ++c) {
        for (int h = 0; h < kHoursPerDay; ++h) {
            const bool fixed = cfg.market_mode == MarketMode::IdOnly;
            p.add_variable("da_c" + std::to_string(c) + "_h" + std::to_string(h),
                           fixed ? 0.0 : -kInf, fixed ? 0.0 : kInf);
        }
    }
    for (int s = 0; s < ns; ++s) {
        const std::string ss = "_s" + std::to_string(s) + "_t";
        for (int t = 0; t < 96; ++t) p.add_variable("id" + ss + std::to_string(t), -kInf, kInf);
        for (int t = 0; t < 96; ++t) p.add_variable("in" + ss + std::to_string(t), 0.0, kInf);
        for (int t = 0; t < 96; ++t) p.add_variable("out" + ss + std::to_string(t), 0.0, kInf);
        for (int t = 0; t <= 96; ++t) p.add_variable("soc" + ss + std::to_string(t), 0.0, kInf);
        for (int t = 0; t < 96; ++t)
            p.add_variable("p" + ss + std::to_string(t), pmin, pmax);
        for (int t = 0; t <= 96; ++t)
            p.add_variable("m" + ss + std::to_string(t), 0.0, mcap);
        for (int t = 0; t < 96; ++t) p.add_variable("fee" + ss + std::to_string(t), 0.0, kInf);
    }

    const VariableIndex& ix = bm.index;
    for (int s = 0; s < ns; ++s) {
        const auto& scen = tree.scenarios[s];
        const int c = scen.cluster_id;
        const std::string ss = "_s" + std::to_string(s);
        for (int t = 0; t < 96; ++t) {
            const std::string st = ss + "_t" + std::to_string(t);
            const int h = VariableIndex::hour_of(t);
            const int vda = ix.da(c, h);
            const int vid = ix.id_trade(s, t);
            // Relative outputs below one part per million are treated as
            // zero; they are physically negligible and wreck the scaling.
            const double qpv_raw = scen.pv.values[t];
            const double qw_raw = scen.wind.values[t];
            const double qpv = std::abs(qpv_raw) > 1e-6 ? qpv_raw : 0.0;
            const double qw = std::abs(qw_raw) > 1e-6 ? qw_raw : 0.0;

            // Energy balance: p = q_DA + q_ID + qbar_PV Q_PV + qbar_W Q_W - q_in + q_out.
            int r = p.add_row(RowSense::Equal, 0.0, "bal" + st);
            bm.rows.balance.push_back(r);
            p.add_entry(r, ix.power(s, t), 1.0);
            p.add_entry(r, vda, -1.0);
            p.add_entry(r, vid, -1.0);
            if (qpv != 0.0) p.add_entry(r, ix.q_pv(), -qpv);
            if (qw != 0.0) p.add_entry(r, ix.q_wind(), -qw);
            p.add_entry(r, ix.charge(s, t), 1.0);
            p.add_entry(r, ix.discharge(s, t), -1.0);

            // Battery rate and state-of-charge caps.
            r = p.add_row(RowSense::LessEqual, 0.0, "chg" + st);
            p.add_entry(r, ix.charge(s, t), 1.0);
            p.add_entry(r, ix.q_batt(), -rate_cap);
            r = p.add_row(RowSense::LessEqual, 0.0, "dis" + st);
            p.add_entry(r, ix.discharge(s, t), 1.0);
            p.add_entry(r, ix.q_batt(), -rate_cap);
            r = p.add_row(RowSense::LessEqual, 0.0, "socub" + st);
            p.add_entry(r, ix.soc(s, t), 1.0);
            p.add_entry(r, ix.q_batt(), -1.0);

            // SOC dynamics with charge/discharge efficiencies.
            r = p.add_row(RowSense::Equal, 0.0, "socdyn" + st);
            bm.rows.soc_dyn.push_back(r);
            p.add_entry(r, ix.soc(s, t + 1), 1.0);
            p.add_entry(r, ix.soc(s, t), -1.0);
            p.add_entry(r, ix.charge(s, t), -econ.eta_in * dt);
            p.add_entry(r, ix.discharge(s, t), dt / econ.eta_out);

            // Process ramping, cyclic across the day boundary.
            const int tn = (t + 1) % 96;
            r = p.add_row(RowSense::LessEqual, ramp, "rup" + st);
            p.add_entry(r, ix.power(s, tn), 1.0);
            p.add_entry(r, ix.power(s, t), -1.0);
            r = p.add_row(RowSense::LessEqual, ramp, "rdn" + st);
            p.add_entry(r, ix.power(s, t), 1.0);
            p.add_entry(r, ix.power(s, tn), -1.0);

            // Product storage dynamics: m_{t+1} = m_t + (p_t - P_nom) dt.
            r = p.add_row(RowSense::Equal, -proc.nominal_power_mw * dt, "mdyn" + st);
            bm.rows.storage_dyn.push_back(r);
            p.add_entry(r, ix.storage(s, t + 1), 1.0);
            p.add_entry(r, ix.storage(s, t), -1.0);
            p.add_entry(r, ix.power(s, t), -dt);

            // Sales bounded by local generation plus battery discharge
            // capability; DA energy may be re-sold on ID.
            r = p.add_row(RowSense::LessEqual, 0.0, "sda1" + st);
            p.add_entry(r, vda, -1.0);
            if (qpv != 0.0) p.add_entry(r, ix.q_pv(), -qpv);
            if (qw != 0.0) p.add_entry(r, ix.q_wind(), -qw);
            p.add_entry(r, ix.q_batt(), -rate_cap);
            r = p.add_row(RowSense::LessEqual, 0.0, "sda2" + st);
            p.add_entry(r, vda, -1.0);
            if (qpv != 0.0) p.add_entry(r, ix.q_pv(), -qpv);
            if (qw != 0.0) p.add_entry(r, ix.q_wind(), -qw);
            p.add_entry(r, ix.soc(s, t), -1.0 / dt);
            r = p.add_row(RowSense::LessEqual, 0.0, "sid1" + st);
            p.add_entry(r, vda, -1.0);
            p.add_entry(r, vid, -1.0);
            if (qpv != 0.0) p.add_entry(r, ix.q_pv(), -qpv);
            if (qw != 0.0) p.add_entry(r, ix.q_wind(), -qw);
            p.add_entry(r, ix.q_batt(), -rate_cap);
            r = p.add_row(RowSense::LessEqual, 0.0, "sid2" + st);
            p.add_entry(r, vda, -1.0);
            p.add_entry(r, vid, -1.0);
            if (qpv != 0.0) p.add_entry(r, ix.q_pv(), -qpv);
            if (qw != 0.0) p.add_entry(r, ix.q_wind(), -qw);
            p.add_entry(r, ix.soc(s, t), -1.0 / dt);

            // Purchases bounded by process and battery intake capability.
            r = p.add_row(RowSense::LessEqual, pmax, "bda1" + st);
            p.add_entry(r, vda, 1.0);
            p.add_entry(r, ix.q_batt(), -rate_cap);
            r = p.add_row(RowSense::LessEqual, pmax, "bda2" + st);
            p.add_entry(r, vda, 1.0);
            p.add_entry(r, ix.q_batt(), -1.0 / dt);
            p.add_entry(r, ix.soc(s, t), 1.0 / dt);
            r = p.add_row(RowSense::LessEqual, pmax, "bid1" + st);
            p.add_entry(r, vid, 1.0);
            p.add_entry(r, ix.q_batt(), -rate_cap);
            r = p.add_row(RowSense::LessEqual, pmax, "bid2" + st);
            p.add_entry(r, vid, 1.0);
            p.add_entry(r, ix.q_batt(), -1.0 / dt);
            p.add_entry(r, ix.soc(s, t), 1.0 / dt);

            // Grid-fee epigraph: fee >= c_Fee dt (q_DA + q_ID), fee >= 0.
            r = p.add_row(RowSense::GreaterEqual, 0.0, "fee" + st);
            bm.rows.fee.push_back(r);
            p.add_entry(r, ix.grid_fee(s, t), 1.0);
            p.add_entry(r, vda, -econ.grid_fee_eur_per_mwh * dt);
            p.add_entry(r, vid, -econ.grid_fee_eur_per_mwh * dt);
        }
        // Cyclic closure of battery and product storage.
        int r = p.add_row(RowSense::Equal, 0.0, "soccyc" + ss);
        p.add_entry(r, ix.soc(s, 0), 1.0);
        p.add_entry(r, ix.soc(s, 96), -1.0);
        r = p.add_row(RowSense::Equal, 0.0, "mcyc" + ss);
        p.add_entry(r, ix.storage(s, 0), 1.0);
        p.add_entry(r, ix.storage(s, 96), -1.0);
    }

    p.assemble();
    return bm;
}

std::vector<std::pair<int, int>> BuiltModel::crash_basis() const {
    std::vector<std::pair<int, int>> hint;
    const int ns = index.num_scenarios();
    hint.reserve(static_cast<std::size_t>(ns) * 96 * 4);
    for (int s = 0; s < ns; ++s) {
        for (int t = 0; t < 96; ++t) {
            const int k = s * 96 + t;
            hint.emplace_back(rows.balance[k], index.id_trade(s, t));
            hint.emplace_back(rows.soc_dyn[k], index.soc(s, t + 1));
            hint.emplace_back(rows.storage_dyn[k], index.power(s, t));
            hint.emplace_back(rows.fee[k], index.grid_fee(s, t));
        }
    }
    return hint;
}

ObjectiveVector tac_objective(const VariableIndex& index, const ScenarioTree& tree,
                              const TechEconSpec& econ, int days_per_year) {
    ObjectiveVector obj;
    obj.costs.assign(index.num_vars(), 0.0);
    const double dt = kDeltaTHours;
    obj.costs[index.q_pv()] =
        annuity_factor(econ.interest_rate, econ.pv.lifetime_years) * econ.pv.capex0 +
        econ.pv.maintenance;
    obj.costs[index.q_wind()] =
        annuity_factor(econ.interest_rate, econ.wind.lifetime_years) * econ.wind.capex0 +
        econ.wind.maintenance;
    obj.costs[index.q_batt()] =
        annuity_factor(econ.interest_rate, econ.battery.lifetime_years) * econ.battery.capex0 +
        econ.battery.maintenance;
    for (std::size_t s = 0; s < tree.scenarios.size(); ++s) {
        const auto& scen = tree.scenarios[s];
        const double w = days_per_year * scen.probability;
        const auto& da = tree.clusters[scen.cluster_id].da_price.values;
        for (int h = 0; h < kHoursPerDay; ++h)
            obj.costs[index.da(scen.cluster_id, h)] += w * 4.0 * dt * da[h];
        for (int t = 0; t < 96; ++t) {
            obj.costs[index.id_trade(static_cast<int>(s), t)] +=
                w * dt * scen.id_price.values[t];
            obj.costs[index.grid_fee(static_cast<int>(s), t)] += w;
        }
    }
    return obj;
}

ObjectiveVector gwi_objective(const VariableIndex& index, const ScenarioTree& tree,
                              const TechEconSpec& econ, int days_per_year) {
    ObjectiveVector obj;
    obj.costs.assign(index.num_vars(), 0.0);
    const double dt = kDeltaTHours;
    obj.costs[index.q_pv()] = econ.pv.gwi_embodied / econ.pv.lifetime_years;
    obj.costs[index.q_wind()] = econ.wind.gwi_embodied / econ.wind.lifetime_years;
    obj.costs[index.q_batt()] = econ.battery.gwi_embodied / econ.battery.lifetime_years;
    for (std::size_t s = 0; s < tree.scenarios.size(); ++s) {
        const auto& scen = tree.scenarios[s];
        const double w = days_per_year * scen.probability;
        for (int t = 0; t < 96; ++t) {
            const double g = w * dt * scen.gwi.values[t];
            obj.costs[index.da(scen.cluster_id, VariableIndex::hour_of(t))] += g;
            obj.costs[index.id_trade(static_cast<int>(s), t)] += g;
        }
    }
    return obj;
}

void epsilon_constraint(lp::LpProblem& problem, const ObjectiveVector& gwi, double bound) {
    if (std::isnan(bound)) throw std::invalid_argument("epsilon_constraint: bound is NaN");
    if (bound == kInf) return;  // unconstrained: plain cost optimum
    const int r = problem.add_row(RowSense::LessEqual, bound - gwi.constant, "gwi_bound");
    for (int j = 0; j < static_cast<int>(gwi.costs.size()); ++j) {
        if (gwi.costs[j] != 0.0) problem.add_entry(r, j, gwi.costs[j]);
    }
    problem.assemble();
}

DesignResult extract(const lp::LpSolution& sol, const VariableIndex& index,
                     const ScenarioTree& tree, const TechEconSpec& econ, int days_per_year) {
    if (sol.status != lp::SolveStatus::Optimal)
        throw std::runtime_error(std::string("extract: solution status is ") +
                                 lp::status_name(sol.status));
    const double dt = kDeltaTHours;
    const auto& x = sol.x;
    DesignResult res;
    // Basis solutions carry +-1e-17 noise on degenerate zeros; capacities
    // are contractually nonnegative.
    res.q_pv_mw = std::max(0.0, x[index.q_pv()]);
    res.q_wind_mw = std::max(0.0, x[index.q_wind()]);
    res.q_batt_mwh = std::max(0.0, x[index.q_batt()]);

    res.breakdown.capex =
        (annuity_factor(econ.interest_rate, econ.pv.lifetime_years) * econ.pv.capex0 +
         econ.pv.maintenance) * res.q_pv_mw +
        (annuity_factor(econ.interest_rate, econ.wind.lifetime_years) * econ.wind.capex0 +
         econ.wind.maintenance) * res.q_wind_mw +
        (annuity_factor(econ.interest_rate, econ.battery.lifetime_years) * econ.battery.capex0 +
         econ.battery.maintenance) * res.q_batt_mwh;

    res.da_trade_mw.assign(tree.clusters.size(), std::vector<double>(kHoursPerDay, 0.0));
    for (std::size_t c = 0; c < tree.clusters.size(); ++c)
        for (int h = 0; h < kHoursPerDay; ++h)
            res.da_trade_mw[c][h] = x[index.da(static_cast<int>(c), h)];

    res.schedules.resize(tree.scenarios.size());
    double gwi_total = res.q_pv_mw * econ.pv.gwi_embodied / econ.pv.lifetime_years +
                       res.q_wind_mw * econ.wind.gwi_embodied / econ.wind.lifetime_years +
                       res.q_batt_mwh * econ.battery.gwi_embodied / econ.battery.lifetime_years;

    for (std::size_t s = 0; s < tree.scenarios.size(); ++s) {
        const auto& scen = tree.scenarios[s];
        const int si = static_cast<int>(s);
        const double w = days_per_year * scen.probability;
        const auto& da_price = tree.clusters[scen.cluster_id].da_price.values;
        auto& sch = res.schedules[s];
        sch.process_power_mw.resize(96);
        sch.id_trade_mw.resize(96);
        sch.charge_mw.resize(96);
        sch.discharge_mw.resize(96);
        sch.soc_mwh.resize(97);
        sch.storage_level_mwh.resize(97);
        sch.opex_grid_eur.resize(96);
        for (int t = 0; t <= 96; ++t) {
            sch.soc_mwh[t] = x[index.soc(si, t)];
            sch.storage_level_mwh[t] = x[index.storage(si, t)];
        }
        for (int t = 0; t < 96; ++t) {
            const double qda = x[index.da(scen.cluster_id, VariableIndex::hour_of(t))];
            const double qid = x[index.id_trade(si, t)];
            sch.process_power_mw[t] = x[index.power(si, t)];
            sch.id_trade_mw[t] = qid;
            sch.charge_mw[t] = x[index.charge(si, t)];
            sch.discharge_mw[t] = x[index.discharge(si, t)];
            // Fee auxiliaries at their lower envelope, independent of the
            // solver value (under GWI they are unconstrained from above).
            sch.opex_grid_eur[t] =
                std::max(0.0, econ.grid_fee_eur_per_mwh * dt * (qda + qid));
            res.breakdown.opex_el += w * dt * scen.id_price.values[t] * qid;
            res.breakdown.opex_grid += w * sch.opex_grid_eur[t];
            gwi_total += w * dt * scen.gwi.values[t] * (qda + qid);
            res.trades.id_purchases_mwh += w * dt * std::max(qid, 0.0);
            res.trades.id_sales_mwh += w * dt * std::max(-qid, 0.0);
        }
        for (int h = 0; h < kHoursPerDay; ++h) {
            const double qda = x[index.da(scen.cluster_id, h)];
            res.breakdown.opex_el += w * 4.0 * dt * da_price[h] * qda;
            res.trades.da_purchases_mwh += w * 4.0 * dt * std::max(qda, 0.0);
            res.trades.da_sales_mwh += w * 4.0 * dt * std::max(-qda, 0.0);
        }
    }
    res.tac_eur_a = res.breakdown.total();
    res.gwi_kg_a = gwi_total;
    return res;
}

SolveOutcome solve_model(const ScenarioTree& tree, const ProcessSpec& proc,
                         const TechEconSpec& econ, const ModelConfig& cfg,
                         const lp::SolveOptions& opts) {
    SolveOutcome out;
    out.model = build(tree, proc, econ, cfg);
    switch (cfg.objective) {
        case ObjectiveKind::Tac:
            out.model.problem.set_costs(
                tac_objective(out.model.index, tree, econ, cfg.days_per_year).costs);
            break;
        case ObjectiveKind::Gwi:
            out.model.problem.set_costs(
                gwi_objective(out.model.index, tree, econ, cfg.days_per_year).costs);
            break;
        case ObjectiveKind::EpsilonConstraint: {
            out.model.problem.set_costs(
                tac_objective(out.model.index, tree, econ, cfg.days_per_year).costs);
            epsilon_constraint(out.model.problem,
                               gwi_objective(out.model.index, tree, econ, cfg.days_per_year),
                               cfg.gwi_bound);
            break;
        }
    }
    lp::SolveOptions solve_opts = opts;
    if (solve_opts.basis_hint.empty()) solve_opts.basis_hint = out.model.crash_basis();
    out.solution = lp::solve(out.model.problem, solve_opts);
    if (out.solution.status == lp::SolveStatus::Optimal)
        out.design = extract(out.solution, out.model.index, tree, econ, cfg.days_per_year);
    return out;
}

}  // namespace flexdes::model
