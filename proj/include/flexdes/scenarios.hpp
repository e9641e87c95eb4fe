#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "flexdes/domain.hpp"

// Three-stage scenario tree construction from historical daily profiles:
// standardize, cluster typical days, average DA prices per cluster, and
// rebuild ID prices from market deviations.

namespace flexdes::scenarios {

/// Aligned profiles of one historical day.
struct DayProfiles {
    std::string day_id;
    std::vector<double> da_price;  // 24 hourly EUR/MWh
    std::vector<double> id_price;  // 96 quarter-hourly EUR/MWh
    std::vector<double> wind_rel;  // 96, [0,1]
    std::vector<double> pv_rel;    // 96, [0,1]
    std::vector<double> gwi;       // 96 kgCO2/MWh
};

/// Z-scored day-by-feature matrix: wind | pv | gwi concatenated (288 cols).
struct FeatureMatrix {
    int days = 0;
    int cols = 0;
    std::vector<double> data;  // row-major
    std::vector<double> mean;  // per column, inverse-transform audit
    std::vector<double> stdev; // population convention; 0 marks constant columns

    double at(int d, int c) const { return data[static_cast<std::size_t>(d) * cols + c]; }
    std::span<const double> row(int d) const {
        return {data.data() + static_cast<std::size_t>(d) * cols, static_cast<std::size_t>(cols)};
    }
};

/// Throws std::invalid_argument for fewer than two days or ragged profiles.
FeatureMatrix standardize(std::span<const DayProfiles> days);

struct Clustering {
    int k = 0;
    std::vector<int> assignment;    // day -> cluster
    std::vector<double> centroids;  // k x cols row-major
    double wcss = 0.0;
    std::uint64_t rng_seed = 0;
    std::vector<double> iteration_wcss;  // accepted Lloyd iterations, best restart
};

struct KMeansOptions {
    int max_iter = 100;
    double tol = 1e-9;
    int restarts = 10;
};

/// Seeded k-means++ with Lloyd iterations and empty-cluster repair; the
/// best of `restarts` runs by wcss is kept (ties: lowest restart index).
Clustering kmeans(const FeatureMatrix& matrix, int k, std::uint64_t seed,
                  const KMeansOptions& opts = {});

/// wcss per k, ascending in k. Each k additionally restarts from the
/// previous best centroids plus the farthest point, which makes the curve
/// non-increasing for a fixed seed.
std::vector<std::pair<int, double>> wcss_curve(const FeatureMatrix& matrix,
                                               std::span<const int> k_values,
                                               std::uint64_t seed,
                                               const KMeansOptions& opts = {});

/// Cluster DA averages, deviation-reconstructed ID prices (d = ID - DA),
/// uniform third-stage probabilities.
ScenarioTree build_tree(const Clustering& clustering, std::span<const DayProfiles> days);

struct DeviationStdReport {
    std::vector<double> per_cluster;  // mean daily std of the market deviation
    double average = 0.0;             // plain mean over clusters
};

DeviationStdReport deviation_std_report(const ScenarioTree& tree);

}  // namespace flexdes::scenarios
