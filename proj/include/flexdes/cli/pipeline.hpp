#pragma once

#include <string>
#include <vector>

#include "flexdes/cli/config.hpp"
#include "flexdes/cli/ingest.hpp"
#include "flexdes/studies.hpp"

namespace flexdes::cli {

/// Stage failure after configuration was accepted; maps to exit code 1.
class PipelineError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct PipelineResult {
    std::vector<std::string> written;  // paths, in write order
    DesignResult design;
    long lp_iterations = 0;
    unsigned long long lp_fingerprint = 0;
};

/// Ingest, cluster, build the scenario tree and write tree.json plus an
/// ingest report. Returns the tree.
ScenarioTree run_clustering(const RunConfig& cfg, std::vector<std::string>* written = nullptr);

/// Full pipeline: preprocess, cluster, build, solve, extract. Writes
/// tree.json, result.json, manifest.json (and model.lp when requested).
PipelineResult run_pipeline(const RunConfig& cfg, bool dump_lp = false);

// Study drivers writing the documented CSV artifacts.
void run_pareto(const RunConfig& cfg, int n_points);
void run_sweep(const RunConfig& cfg, studies::SweepParameter parameter);
void run_heatmap(const RunConfig& cfg, const std::vector<double>& oversizing,
                 const std::vector<double>& scales);
void run_market_comparison(const RunConfig& cfg);
void run_report(const RunConfig& cfg, const std::vector<int>& wcss_ks);

}  // namespace flexdes::cli
