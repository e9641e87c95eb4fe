#include <cstdio>
#include <cstdlib>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "flexdes/cli/config.hpp"
#include "flexdes/cli/ingest.hpp"
#include "flexdes/cli/pipeline.hpp"
#include "flexdes/cli/serialize.hpp"
#include "flexdes/studies.hpp"
#include "json.hpp"

// Exit codes: 0 success, 1 pipeline/solver failure, 2 configuration or
// input errors (documented in docs/formats.md).

namespace {

using namespace flexdes;

cli::RunConfig make_config(const std::string& config_path, const std::string& out_override,
                           long long seed_override) {
    cli::RunConfig cfg = cli::load_config(config_path);
    if (!out_override.empty()) cfg.output_dir = out_override;
    if (const char* env = std::getenv("FLEXDES_OUT"); env && out_override.empty())
        cfg.output_dir = env;
    if (seed_override >= 0) cfg.seed = static_cast<std::uint64_t>(seed_override);
    return cfg;
}

studies::SweepParameter parse_parameter(const std::string& name) {
    if (name == "oversizing") return studies::SweepParameter::Oversizing;
    if (name == "min_part_load") return studies::SweepParameter::MinPartLoad;
    if (name == "storage_hours") return studies::SweepParameter::StorageHours;
    if (name == "ramp_limit") return studies::SweepParameter::RampLimit;
    if (name == "capacity_scale") return studies::SweepParameter::CapacityScale;
    throw cli::ConfigError("unknown sweep parameter: " + name);
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Design of a local PV/wind/battery supply system with demand-response "
                 "scheduling of a flexible production process"};
    app.require_subcommand(1);
    app.fallthrough();

    std::string config_path;
    std::string out_dir;
    long long seed = -1;
    app.add_option("--config", config_path, "Run configuration (JSON)")->required();
    app.add_option("--out", out_dir, "Output directory override");
    app.add_option("--seed", seed, "Clustering seed override");

    auto* preprocess = app.add_subcommand("preprocess", "Ingest inputs and report day bundles");
    auto* cluster = app.add_subcommand("cluster", "Build and write the scenario tree");
    auto* solve = app.add_subcommand("solve", "Run the full design pipeline");
    bool dump_lp = false;
    solve->add_flag("--dump-lp", dump_lp, "Also write the model in LP text format");
    std::string objective_override;
    solve->add_option("--objective", objective_override, "tac or gwi")
        ->check(CLI::IsMember({"tac", "gwi"}));
    auto* pareto = app.add_subcommand("pareto", "Trace the cost/emission Pareto front");
    int n_points = 5;
    pareto->add_option("--points", n_points, "Number of Pareto points")->check(CLI::Range(2, 50));
    auto* sweep = app.add_subcommand("sweep", "Flexibility parameter sweep");
    std::string parameter = "oversizing";
    sweep->add_option("--parameter", parameter,
                      "oversizing|min_part_load|storage_hours|ramp_limit|capacity_scale");
    auto* heatmap = app.add_subcommand("heatmap", "Oversizing x capacity-scale TAC grid");
    std::vector<double> thetas, scales;
    heatmap->add_option("--oversizing", thetas, "Oversizing grid values");
    heatmap->add_option("--scales", scales, "Capacity scale grid values");
    auto* compare = app.add_subcommand("compare-markets", "ID-only vs simultaneous trading");
    auto* report = app.add_subcommand("report", "Clustering diagnostics and model census");
    std::vector<int> wcss_ks;
    report->add_option("--wcss-k", wcss_ks, "Cluster counts for the wcss curve");

    CLI11_PARSE(app, argc, argv);

    try {
        cli::RunConfig cfg = make_config(config_path, out_dir, seed);

        if (preprocess->parsed()) {
            const auto in = cli::ingest(cfg);
            for (const auto& w : in.warnings) std::fprintf(stderr, "warning: %s\n", w.c_str());
            for (const auto& d : in.dropped)
                std::fprintf(stderr, "warning: dropped day %s: %s\n", d.day_id.c_str(),
                             d.reason.c_str());
            std::printf("kept %zu days, dropped %zu\n", in.days.size(), in.dropped.size());
        } else if (cluster->parsed()) {
            std::vector<std::string> written;
            cli::run_clustering(cfg, &written);
            for (const auto& p : written) std::printf("wrote %s\n", p.c_str());
        } else if (solve->parsed()) {
            if (objective_override == "tac") cfg.objective = model::ObjectiveKind::Tac;
            if (objective_override == "gwi") cfg.objective = model::ObjectiveKind::Gwi;
            const auto result = cli::run_pipeline(cfg, dump_lp);
            for (const auto& p : result.written) std::printf("wrote %s\n", p.c_str());
            std::printf("TAC %.2f EUR/a, GWI %.2f kg/a, capacities PV %.3f MW, wind %.3f MW, "
                        "battery %.3f MWh\n",
                        result.design.tac_eur_a, result.design.gwi_kg_a, result.design.q_pv_mw,
                        result.design.q_wind_mw, result.design.q_batt_mwh);
        } else if (pareto->parsed()) {
            cli::run_pareto(cfg, n_points);
            std::printf("wrote %s/pareto.csv\n", cfg.output_dir.c_str());
        } else if (sweep->parsed()) {
            cli::run_sweep(cfg, parse_parameter(parameter));
            std::printf("wrote %s/sweep_%s.csv\n", cfg.output_dir.c_str(), parameter.c_str());
        } else if (heatmap->parsed()) {
            if (thetas.empty()) thetas = {0.0, 0.1, 0.2, 0.3, 0.4};
            if (scales.empty()) scales = {0.0, 0.25, 0.5, 0.75, 1.0, 1.25, 1.5, 1.75, 2.0};
            cli::run_heatmap(cfg, thetas, scales);
            std::printf("wrote %s/heatmap.csv\n", cfg.output_dir.c_str());
        } else if (compare->parsed()) {
            cli::run_market_comparison(cfg);
            std::printf("wrote %s/market_comparison.csv\n", cfg.output_dir.c_str());
        } else if (report->parsed()) {
            cli::run_report(cfg, wcss_ks);
            std::printf("wrote %s/report.json\n", cfg.output_dir.c_str());
        }
    } catch (const cli::ConfigError& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 2;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    }
    return 0;
}
