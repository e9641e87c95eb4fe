#include "flexdes/cli/pipeline.hpp"

#include <filesystem>

#include "flexdes/cli/csv.hpp"
#include "flexdes/cli/serialize.hpp"
#include "flexdes/lp/writer.hpp"
#include "json.hpp"

namespace flexdes::cli {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

constexpr const char* kToolVersion = "0.1.0";

std::string out_path(const RunConfig& cfg, const std::string& name) {
    fs::create_directories(cfg.output_dir);
    return (fs::path(cfg.output_dir) / name).string();
}

json ingest_report(const IngestResult& in) {
    json rep;
    rep["days_kept"] = in.days.size();
    json dropped = json::array();
    for (const auto& d : in.dropped) dropped.push_back({{"day", d.day_id}, {"reason", d.reason}});
    rep["days_dropped"] = std::move(dropped);
    rep["warnings"] = in.warnings;
    return rep;
}

const char* objective_name(model::ObjectiveKind k) {
    return k == model::ObjectiveKind::Gwi ? "gwi" : "tac";
}
const char* mode_name(model::MarketMode m) {
    return m == model::MarketMode::IdOnly ? "id_only" : "simultaneous";
}

}  // namespace

ScenarioTree run_clustering(const RunConfig& cfg, std::vector<std::string>* written) {
    const IngestResult in = ingest(cfg);
    for (const auto& w : in.warnings) std::fprintf(stderr, "warning: %s\n", w.c_str());
    for (const auto& d : in.dropped)
        std::fprintf(stderr, "warning: dropped day %s: %s\n", d.day_id.c_str(),
                     d.reason.c_str());
    if (in.days.size() < 2) throw PipelineError("need at least two complete days");
    if (static_cast<int>(in.days.size()) < cfg.cluster_count)
        throw PipelineError("clustering.k exceeds the number of complete days");

    const auto matrix = scenarios::standardize(in.days);
    scenarios::KMeansOptions ko;
    ko.restarts = cfg.kmeans_restarts;
    const auto clustering = scenarios::kmeans(matrix, cfg.cluster_count, cfg.seed, ko);
    ScenarioTree tree = scenarios::build_tree(clustering, in.days);

    const std::string report_path = out_path(cfg, "ingest_report.json");
    write_text_atomic(report_path, ingest_report(in).dump(1));
    const std::string tree_path = out_path(cfg, "tree.json");
    write_text_atomic(tree_path, tree_to_json(tree));
    if (written) {
        written->push_back(report_path);
        written->push_back(tree_path);
    }
    return tree;
}

PipelineResult run_pipeline(const RunConfig& cfg, bool dump_lp) {
    PipelineResult result;
    const ScenarioTree tree = run_clustering(cfg, &result.written);

    model::ModelConfig mc;
    mc.market_mode = cfg.market_mode;
    mc.objective = cfg.objective;
    const auto out = model::solve_model(tree, cfg.process, cfg.econ, mc);
    if (out.solution.status != lp::SolveStatus::Optimal)
        throw PipelineError(std::string("solve ended with status ") +
                            lp::status_name(out.solution.status));
    result.design = out.design;
    result.lp_iterations = out.solution.iterations;
    result.lp_fingerprint = lp::lp_fingerprint(out.model.problem);

    if (dump_lp) {
        const std::string lp_path = out_path(cfg, "model.lp");
        lp::write_lp_file(out.model.problem, lp_path, "flexdes");
        result.written.push_back(lp_path);
    }

    const std::string result_path = out_path(cfg, "result.json");
    write_text_atomic(result_path, design_result_to_json(result.design,
                                                         objective_name(cfg.objective),
                                                         mode_name(cfg.market_mode)));
    result.written.push_back(result_path);

    // The manifest pins config, seed and output hashes: identical manifests
    // imply byte-identical artifacts.
    json manifest;
    manifest["tool_version"] = kToolVersion;
    manifest["seed"] = cfg.seed;
    manifest["config_hash"] = fnv1a_hex(canonical_config(cfg));
    char fp[20];
    std::snprintf(fp, sizeof(fp), "%016llx", result.lp_fingerprint);
    manifest["lp_fingerprint"] = fp;
    manifest["lp_iterations"] = result.lp_iterations;
    json outputs;
    for (const auto& path : result.written)
        outputs[fs::path(path).filename().string()] = fnv1a_hex(read_text(path));
    manifest["outputs"] = std::move(outputs);
    const std::string manifest_path = out_path(cfg, "manifest.json");
    write_text_atomic(manifest_path, manifest.dump(1));
    result.written.push_back(manifest_path);
    return result;
}

void run_pareto(const RunConfig& cfg, int n_points) {
    const ScenarioTree tree = run_clustering(cfg);
    const auto front =
        studies::pareto_front(tree, cfg.process, cfg.econ, cfg.market_mode, n_points);
    std::vector<std::vector<double>> rows;
    for (const auto& pt : front) {
        rows.push_back({snap12(pt.gwi_bound), snap12(pt.design.gwi_kg_a),
                        snap12(pt.design.tac_eur_a), snap12(pt.design.q_pv_mw),
                        snap12(pt.design.q_wind_mw), snap12(pt.design.q_batt_mwh)});
    }
    write_csv(out_path(cfg, "pareto.csv"),
              "gwi_bound_kg_a,gwi_kg_a,tac_eur_a,pv_mw,wind_mw,battery_mwh", rows);
}

void run_sweep(const RunConfig& cfg, studies::SweepParameter parameter) {
    const ScenarioTree tree = run_clustering(cfg);
    auto spec = studies::SweepSpec::default_grid(parameter, cfg.process, cfg.econ);
    spec.market_mode = cfg.market_mode;
    spec.objective = cfg.objective;
    const auto table = studies::flexibility_sweep(tree, spec);
    std::vector<std::vector<double>> rows;
    for (const auto& r : table) {
        rows.push_back({snap12(r.value), snap12(r.objective_without), snap12(r.objective_with),
                        snap12(r.relative_savings), snap12(r.q_pv_mw), snap12(r.q_wind_mw),
                        snap12(r.q_batt_mwh)});
    }
    write_csv(out_path(cfg, std::string("sweep_") + studies::sweep_parameter_name(parameter) +
                                ".csv"),
              "value,objective_without_system,objective_with_system,relative_savings,"
              "pv_mw,wind_mw,battery_mwh",
              rows);
}

void run_heatmap(const RunConfig& cfg, const std::vector<double>& oversizing,
                 const std::vector<double>& scales) {
    const ScenarioTree tree = run_clustering(cfg);
    const auto cells = studies::capacity_heatmap(tree, cfg.process, cfg.econ, cfg.market_mode,
                                                 oversizing, scales);
    std::vector<std::vector<double>> rows;
    for (const auto& c : cells) {
        rows.push_back({snap12(c.oversizing), snap12(c.capacity_scale), snap12(c.tac),
                        snap12(c.q_pv_mw), snap12(c.q_wind_mw), snap12(c.q_batt_mwh),
                        snap12(c.tac_estimate), snap12(c.additivity_gap_rel)});
    }
    write_csv(out_path(cfg, "heatmap.csv"),
              "oversizing,capacity_scale,tac_eur_a,pv_mw,wind_mw,battery_mwh,"
              "tac_estimate_eur_a,additivity_gap_rel",
              rows);
}

void run_market_comparison(const RunConfig& cfg) {
    const ScenarioTree tree = run_clustering(cfg);
    const auto cmp = studies::market_mode_comparison(tree, cfg.process, cfg.econ);
    std::vector<std::string> labels{"id_only", "simultaneous"};
    std::vector<std::vector<double>> rows;
    for (const DesignResult* r : {&cmp.id_only, &cmp.simultaneous}) {
        rows.push_back({snap12(r->tac_eur_a), snap12(r->q_pv_mw), snap12(r->q_wind_mw),
                        snap12(r->q_batt_mwh), snap12(r->trades.da_purchases_mwh),
                        snap12(r->trades.id_purchases_mwh), snap12(r->trades.purchases_mwh()),
                        snap12(r->trades.da_sales_mwh), snap12(r->trades.id_sales_mwh),
                        snap12(r->trades.sales_mwh())});
    }
    write_csv(out_path(cfg, "market_comparison.csv"),
              "mode,tac_eur_a,pv_mw,wind_mw,battery_mwh,da_purchases_mwh,id_purchases_mwh,"
              "total_purchases_mwh,da_sales_mwh,id_sales_mwh,total_sales_mwh",
              rows, labels);
    std::vector<std::vector<double>> savings{
        {snap12(cmp.absolute_savings), snap12(cmp.relative_savings)}};
    write_csv(out_path(cfg, "market_savings.csv"), "absolute_savings_eur_a,relative_savings",
              savings);
}

void run_report(const RunConfig& cfg, const std::vector<int>& wcss_ks) {
    const IngestResult in = ingest(cfg);
    if (in.days.size() < 2) throw PipelineError("need at least two complete days");
    const auto matrix = scenarios::standardize(in.days);
    scenarios::KMeansOptions ko;
    ko.restarts = cfg.kmeans_restarts;

    std::vector<int> ks = wcss_ks;
    if (ks.empty()) {
        for (int k = 1; k <= std::min<int>(20, matrix.days); k += 2) ks.push_back(k);
    }
    const auto curve = scenarios::wcss_curve(matrix, ks, cfg.seed, ko);
    std::vector<std::vector<double>> wrows;
    for (const auto& [k, w] : curve) wrows.push_back({double(k), snap12(w)});
    write_csv(out_path(cfg, "wcss.csv"), "k,wcss", wrows);

    const auto clustering = scenarios::kmeans(matrix, cfg.cluster_count, cfg.seed, ko);
    const auto tree = scenarios::build_tree(clustering, in.days);
    const auto dev = scenarios::deviation_std_report(tree);
    std::vector<std::vector<double>> drows;
    for (std::size_t c = 0; c < dev.per_cluster.size(); ++c)
        drows.push_back({double(c), snap12(dev.per_cluster[c])});
    drows.push_back({-1.0, snap12(dev.average)});  // -1 marks the average row
    write_csv(out_path(cfg, "deviation_std.csv"), "cluster,mean_daily_std_eur_mwh", drows);

    const model::VariableIndex ix(cfg.cluster_count, static_cast<int>(tree.scenarios.size()));
    const auto census = ix.census(cfg.market_mode);
    json rep;
    rep["ingest"] = {{"days_kept", in.days.size()}, {"days_dropped", in.dropped.size()}};
    rep["degrees_of_freedom"] = {{"design", census.design},
                                 {"da_market", census.da},
                                 {"id_market", census.id},
                                 {"battery_operation", census.battery}};
    rep["deviation_std_avg_eur_mwh"] = snap12(dev.average);
    rep["wcss_at_k"] = json::object();
    for (const auto& [k, w] : curve) rep["wcss_at_k"][std::to_string(k)] = snap12(w);
    write_text_atomic(out_path(cfg, "report.json"), rep.dump(1));
}

}  // namespace flexdes::cli
