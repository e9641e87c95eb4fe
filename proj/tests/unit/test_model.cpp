#include <cmath>

#include "doctest.h"
#include "fixtures.hpp"
#include "flexdes/lp/writer.hpp"
#include "flexdes/model.hpp"

using namespace flexdes;
using namespace flexdes::model;

namespace {

/// Worst energy-balance residual recomputed from the extracted schedules.
double max_balance_residual(const DesignResult& r, const ScenarioTree& tree) {
    double worst = 0.0;
    for (std::size_t s = 0; s < tree.scenarios.size(); ++s) {
        const auto& scen = tree.scenarios[s];
        const auto& sch = r.schedules[s];
        for (int t = 0; t < 96; ++t) {
            const double qda = r.da_trade_mw[scen.cluster_id][t / 4];
            const double lhs = sch.process_power_mw[t];
            const double rhs = qda + sch.id_trade_mw[t] + scen.pv.values[t] * r.q_pv_mw +
                               scen.wind.values[t] * r.q_wind_mw - sch.charge_mw[t] +
                               sch.discharge_mw[t];
            worst = std::max(worst, std::abs(lhs - rhs));
        }
    }
    return worst;
}

}  // namespace

TEST_CASE("degree-of-freedom census") {
    const VariableIndex paper_scale(20, 365);
    const auto c = paper_scale.census(MarketMode::Simultaneous);
    CHECK(c.design == 3);
    CHECK(c.da == 480);
    CHECK(c.id == 35040);
    CHECK(c.battery == 70080);
    const auto id_only = paper_scale.census(MarketMode::IdOnly);
    CHECK(id_only.da == 0);
    CHECK(id_only.id == 35040);
}

TEST_CASE("steady state closed form for an inflexible process") {
    const auto tree = test::flat_tree(50.0);
    ProcessSpec proc = ProcessSpec::inflexible(1.0);
    TechEconSpec econ = TechEconSpec::defaults(proc);
    econ.pv.capacity_max = econ.wind.capacity_max = econ.battery.capacity_max = 0.0;
    const double expect = 365.0 * 24.0 * 1.0 * (50.0 + 29.6);
    CHECK(expect == doctest::Approx(697296.0));
    for (MarketMode mode : {MarketMode::IdOnly, MarketMode::Simultaneous}) {
        ModelConfig cfg;
        cfg.market_mode = mode;
        const auto out = solve_model(tree, proc, econ, cfg);
        REQUIRE(out.solution.status == lp::SolveStatus::Optimal);
        CHECK(std::abs(out.design.tac_eur_a - expect) <= 1e-8 * expect);
        CHECK(out.design.breakdown.capex == 0.0);
        // Fixed intake: every quarter draws exactly the nominal power.
        for (double p : out.design.schedules[0].process_power_mw)
            CHECK(p == doctest::Approx(1.0).epsilon(1e-9));
    }
}

TEST_CASE("zero prices and free grid mean zero electricity cost") {
    auto tree = test::flat_tree(0.0);
    ProcessSpec proc = ProcessSpec::inflexible(1.0);
    TechEconSpec econ = TechEconSpec::defaults(proc);
    econ.grid_fee_eur_per_mwh = 0.0;
    econ.pv.capacity_max = econ.wind.capacity_max = econ.battery.capacity_max = 0.0;
    const auto out = solve_model(tree, proc, econ, ModelConfig{});
    REQUIRE(out.solution.status == lp::SolveStatus::Optimal);
    CHECK(out.design.breakdown.opex_el == doctest::Approx(0.0));
    CHECK(out.design.tac_eur_a == doctest::Approx(0.0));
}

TEST_CASE("structural invariants on an optimal fixture solve") {
    const auto tree = test::make_tree({.days = 6, .seed = 21}, 2);
    const auto proc = ProcessSpec::reference();
    const auto econ = TechEconSpec::defaults(proc);
    ModelConfig cfg;
    const auto out = solve_model(tree, proc, econ, cfg);
    REQUIRE(out.solution.status == lp::SolveStatus::Optimal);
    const auto& r = out.design;

    CHECK(max_balance_residual(r, tree) <= 1e-7);
    CHECK(r.q_pv_mw >= 0.0);
    CHECK(r.q_pv_mw <= econ.pv.capacity_max + 1e-9);
    CHECK(r.q_wind_mw <= econ.wind.capacity_max + 1e-9);
    CHECK(r.q_batt_mwh <= econ.battery.capacity_max + 1e-9);

    for (const auto& sch : r.schedules) {
        CHECK(sch.soc_mwh.front() == doctest::Approx(sch.soc_mwh.back()).epsilon(1e-12));
        CHECK(sch.storage_level_mwh.front() ==
              doctest::Approx(sch.storage_level_mwh.back()).epsilon(1e-12));
    }

    // Grid-fee auxiliaries sit on their lower envelope at the TAC optimum.
    for (std::size_t s = 0; s < tree.scenarios.size(); ++s) {
        const auto& scen = tree.scenarios[s];
        for (int t = 0; t < 96; ++t) {
            const double qda = r.da_trade_mw[scen.cluster_id][t / 4];
            const double envelope = std::max(
                0.0, econ.grid_fee_eur_per_mwh * 0.25 * (qda + r.schedules[s].id_trade_mw[t]));
            const double solver_fee =
                out.solution.x[out.model.index.grid_fee(static_cast<int>(s), t)];
            CHECK(std::abs(solver_fee - envelope) <= 1e-7 * (1.0 + envelope));
        }
    }

    // Breakdown adds up and the LP objective agrees with the recomputation.
    CHECK(std::abs(r.breakdown.total() - r.tac_eur_a) <= 1e-6 * std::abs(r.tac_eur_a));
    CHECK(std::abs(out.solution.objective - r.tac_eur_a) <= 1e-6 * std::abs(r.tac_eur_a));
    CHECK(r.trades.purchases_mwh() ==
          doctest::Approx(r.trades.da_purchases_mwh + r.trades.id_purchases_mwh));

    // The solve certifies optimality.
    const auto rep = lp::check_solution(out.model.problem, out.solution);
    CHECK(rep.duality_gap <= 1e-6 * (1.0 + std::abs(out.solution.objective)));
}

TEST_CASE("id-only mode pins DA trades to zero") {
    const auto tree = test::make_tree({.days = 4, .seed = 22}, 2);
    const auto proc = ProcessSpec::reference();
    const auto econ = TechEconSpec::defaults(proc);
    ModelConfig cfg;
    cfg.market_mode = MarketMode::IdOnly;
    const auto out = solve_model(tree, proc, econ, cfg);
    REQUIRE(out.solution.status == lp::SolveStatus::Optimal);
    for (const auto& cluster : out.design.da_trade_mw)
        for (double v : cluster) CHECK(v == 0.0);
    CHECK(out.design.trades.da_purchases_mwh == 0.0);
}

TEST_CASE("objective coefficients follow the annualization rules") {
    const auto tree = test::flat_tree(50.0);
    auto econ = TechEconSpec::defaults(ProcessSpec::reference());
    econ.pv.gwi_embodied = 1.0e6;      // per MW
    econ.wind.gwi_embodied = 2.0e6;
    econ.battery.gwi_embodied = 3.0e5;  // per MWh
    const VariableIndex ix(1, 1);

    const auto tac = tac_objective(ix, tree, econ);
    // PV: annualized CAPEX per kWp from the data sheet (x1000 for MW).
    const double pv_per_kwp = 927.0 * annuity_factor(0.08, 25.0) + 17.0;
    CHECK(tac.costs[ix.q_pv()] == doctest::Approx(1000.0 * pv_per_kwp).epsilon(1e-12));
    CHECK(pv_per_kwp == doctest::Approx(103.84).epsilon(1e-4));
    // ID trade coefficient: 365 * pi * dt * price.
    CHECK(tac.costs[ix.id_trade(0, 0)] == doctest::Approx(365.0 * 0.25 * 50.0).epsilon(1e-12));
    // DA trade coefficient: 365 * pi * 4dt * price (MW held one hour).
    CHECK(tac.costs[ix.da(0, 0)] == doctest::Approx(365.0 * 50.0).epsilon(1e-12));
    // Fee auxiliaries weighted by 365 * pi.
    CHECK(tac.costs[ix.grid_fee(0, 95)] == doctest::Approx(365.0).epsilon(1e-12));

    const auto gwi = gwi_objective(ix, tree, econ);
    CHECK(gwi.costs[ix.q_batt()] == doctest::Approx(3.0e5 / 15.0).epsilon(1e-12));
    // Flat 400 kg/MWh grid factor: ID quarter carries 365 * 0.25 * 400.
    CHECK(gwi.costs[ix.id_trade(0, 7)] == doctest::Approx(365.0 * 0.25 * 400.0).epsilon(1e-12));
    // The hourly DA variable accumulates its four quarters.
    CHECK(gwi.costs[ix.da(0, 3)] == doctest::Approx(365.0 * 400.0).epsilon(1e-12));
    // Zero capacities and trades mean zero GWI.
    std::vector<double> zero(ix.num_vars(), 0.0);
    double dot = 0.0;
    for (int j = 0; j < ix.num_vars(); ++j) dot += gwi.costs[j] * zero[j];
    CHECK(dot == 0.0);
}

TEST_CASE("gwi sales earn credits") {
    // One scenario, cheap battery-free setup with forced excess wind:
    // selling at a positive grid factor must reduce total GWI below zero
    // when nothing is bought.
    auto tree = test::flat_tree(50.0);
    for (int t = 0; t < 96; ++t) tree.scenarios[0].wind.values[t] = 1.0;
    ProcessSpec proc = ProcessSpec::inflexible(1.0);
    TechEconSpec econ = TechEconSpec::defaults(proc);
    econ.wind.capacity_max = 3.0;  // more than the process needs
    econ.pv.capacity_max = 0.0;
    econ.battery.capacity_max = 0.0;
    ModelConfig cfg;
    cfg.objective = ObjectiveKind::Gwi;
    const auto out = solve_model(tree, proc, econ, cfg);
    REQUIRE(out.solution.status == lp::SolveStatus::Optimal);
    CHECK(out.design.gwi_kg_a < 0.0);          // net seller earns credits
    CHECK(out.design.trades.sales_mwh() > 0.0);
}

TEST_CASE("epsilon constraint bounds the GWI") {
    const auto tree = test::make_tree({.days = 4, .seed = 23}, 2);
    const auto proc = ProcessSpec::reference();
    auto econ = TechEconSpec::defaults(proc);
    econ.pv.gwi_embodied = 8.0e5;
    econ.wind.gwi_embodied = 7.0e5;
    econ.battery.gwi_embodied = 1.0e5;

    ModelConfig cfg;
    const auto tac_opt = solve_model(tree, proc, econ, cfg);
    REQUIRE(tac_opt.solution.status == lp::SolveStatus::Optimal);
    cfg.objective = ObjectiveKind::Gwi;
    const auto gwi_opt = solve_model(tree, proc, econ, cfg);
    REQUIRE(gwi_opt.solution.status == lp::SolveStatus::Optimal);

    // Unbounded epsilon equals the plain TAC optimum.
    cfg.objective = ObjectiveKind::EpsilonConstraint;
    cfg.gwi_bound = lp::kInf;
    const auto loose = solve_model(tree, proc, econ, cfg);
    CHECK(loose.design.tac_eur_a ==
          doctest::Approx(tac_opt.design.tac_eur_a).epsilon(1e-9));

    // At the GWI optimum the bound is feasible and costs at least as much.
    cfg.gwi_bound = gwi_opt.design.gwi_kg_a;
    const auto tight = solve_model(tree, proc, econ, cfg);
    REQUIRE(tight.solution.status == lp::SolveStatus::Optimal);
    CHECK(tight.design.gwi_kg_a <= cfg.gwi_bound + 1e-6 * (1.0 + std::abs(cfg.gwi_bound)));
    CHECK(tight.design.tac_eur_a >= tac_opt.design.tac_eur_a - 1e-6 * tac_opt.design.tac_eur_a);

    // A bound below the GWI optimum is infeasible and surfaces to the caller.
    cfg.gwi_bound = gwi_opt.design.gwi_kg_a - 0.05 * std::abs(gwi_opt.design.gwi_kg_a) - 1.0;
    const auto out = solve_model(tree, proc, econ, cfg);
    CHECK(out.solution.status == lp::SolveStatus::Infeasible);
}

TEST_CASE("DA schedules are shared within a cluster by construction") {
    const auto tree = test::make_tree({.days = 6, .seed = 24}, 2);
    const auto proc = ProcessSpec::reference();
    const auto econ = TechEconSpec::defaults(proc);
    const auto out = solve_model(tree, proc, econ, ModelConfig{});
    REQUIRE(out.solution.status == lp::SolveStatus::Optimal);
    // One DA vector per cluster: scenarios of one cluster read identical
    // (bit-for-bit) hourly trades.
    for (const auto& cluster : tree.clusters) {
        for (int sid : cluster.member_scenarios) {
            const auto& scen = tree.scenarios[sid];
            for (int h = 0; h < 24; ++h) {
                const double a = out.solution.x[out.model.index.da(scen.cluster_id, h)];
                const double b = out.design.da_trade_mw[cluster.cluster_id][h];
                CHECK(a == b);
            }
        }
    }
}

TEST_CASE("model dump fingerprint is stable") {
    const auto tree = test::make_tree({.days = 3, .seed = 25}, 2);
    const auto proc = ProcessSpec::reference();
    const auto econ = TechEconSpec::defaults(proc);
    auto a = build(tree, proc, econ, ModelConfig{});
    auto b = build(tree, proc, econ, ModelConfig{});
    a.problem.set_costs(tac_objective(a.index, tree, econ).costs);
    b.problem.set_costs(tac_objective(b.index, tree, econ).costs);
    CHECK(lp::lp_fingerprint(a.problem) == lp::lp_fingerprint(b.problem));
}
