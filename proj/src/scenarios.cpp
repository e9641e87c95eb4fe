#include "flexdes/scenarios.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "flexdes/rng.hpp"

namespace flexdes::scenarios {

namespace {

double sq_dist(std::span<const double> a, const double* b, int n) {
    double s = 0.0;
    for (int i = 0; i < n; ++i) {
        const double d = a[i] - b[i];
        s += d * d;
    }
    return s;
}

struct LloydResult {
    std::vector<int> assignment;
    std::vector<double> centroids;
    double wcss = 0.0;
    std::vector<double> iteration_wcss;
};

LloydResult lloyd(const FeatureMatrix& m, int k, std::vector<double> centroids,
                  const KMeansOptions& opts) {
    LloydResult res;
    res.centroids = std::move(centroids);
    res.assignment.assign(m.days, 0);
    std::vector<int> count(k, 0);
    std::vector<double> next(static_cast<std::size_t>(k) * m.cols, 0.0);
    std::vector<double> dist(m.days, 0.0);

    for (int iter = 0; iter < opts.max_iter; ++iter) {
        for (int d = 0; d < m.days; ++d) {
            int best = 0;
            double bestd = sq_dist(m.row(d), res.centroids.data(), m.cols);
            for (int c = 1; c < k; ++c) {
                const double dd = sq_dist(
                    m.row(d), res.centroids.data() + static_cast<std::size_t>(c) * m.cols,
                    m.cols);
                if (dd < bestd) {
                    bestd = dd;
                    best = c;
                }
            }
            res.assignment[d] = best;
            dist[d] = bestd;
        }
        // Empty clusters adopt the farthest point.
        std::fill(count.begin(), count.end(), 0);
        for (int d = 0; d < m.days; ++d) ++count[res.assignment[d]];
        for (int c = 0; c < k; ++c) {
            if (count[c] > 0) continue;
            int far = -1;
            double fard = -1.0;
            for (int d = 0; d < m.days; ++d) {
                if (count[res.assignment[d]] <= 1) continue;
                if (dist[d] > fard) {
                    fard = dist[d];
                    far = d;
                }
            }
            if (far < 0) break;
            --count[res.assignment[far]];
            res.assignment[far] = c;
            count[c] = 1;
            dist[far] = 0.0;
        }
        // Centroid update.
        std::fill(next.begin(), next.end(), 0.0);
        for (int d = 0; d < m.days; ++d) {
            double* t = next.data() + static_cast<std::size_t>(res.assignment[d]) * m.cols;
            const auto row = m.row(d);
            for (int c = 0; c < m.cols; ++c) t[c] += row[c];
        }
        double shift2 = 0.0;
        for (int c = 0; c < k; ++c) {
            double* t = next.data() + static_cast<std::size_t>(c) * m.cols;
            const double* old = res.centroids.data() + static_cast<std::size_t>(c) * m.cols;
            if (count[c] > 0) {
                for (int j = 0; j < m.cols; ++j) t[j] /= count[c];
            } else {
                std::copy(old, old + m.cols, t);
            }
            double s = 0.0;
            for (int j = 0; j < m.cols; ++j) {
                const double dd = t[j] - old[j];
                s += dd * dd;
            }
            shift2 = std::max(shift2, s);
        }
        std::swap(res.centroids, next);
        double wcss = 0.0;
        for (int d = 0; d < m.days; ++d)
            wcss += sq_dist(
                m.row(d),
                res.centroids.data() + static_cast<std::size_t>(res.assignment[d]) * m.cols,
                m.cols);
        res.wcss = wcss;
        res.iteration_wcss.push_back(wcss);
        if (shift2 < opts.tol * opts.tol) break;
    }
    return res;
}

std::vector<double> kmeanspp_init(const FeatureMatrix& m, int k, Rng& rng) {
    std::vector<double> centroids(static_cast<std::size_t>(k) * m.cols);
    std::vector<double> dist(m.days);
    const int first = rng.uniform_int(0, m.days - 1);
    std::copy_n(m.row(first).data(), m.cols, centroids.begin());
    for (int d = 0; d < m.days; ++d) dist[d] = sq_dist(m.row(d), centroids.data(), m.cols);
    for (int c = 1; c < k; ++c) {
        double total = 0.0;
        for (double v : dist) total += v;
        int pick = 0;
        if (total > 0.0) {
            const double target = rng.uniform() * total;
            double acc = 0.0;
            pick = m.days - 1;
            for (int d = 0; d < m.days; ++d) {
                acc += dist[d];
                if (acc >= target) {
                    pick = d;
                    break;
                }
            }
        } else {
            pick = rng.uniform_int(0, m.days - 1);
        }
        double* t = centroids.data() + static_cast<std::size_t>(c) * m.cols;
        std::copy_n(m.row(pick).data(), m.cols, t);
        for (int d = 0; d < m.days; ++d)
            dist[d] = std::min(dist[d], sq_dist(m.row(d), t, m.cols));
    }
    return centroids;
}

}  // namespace

FeatureMatrix standardize(std::span<const DayProfiles> days) {
    if (days.size() < 2) throw std::invalid_argument("standardize: need at least two days");
    const int n = static_cast<int>(days.size());
    FeatureMatrix m;
    m.days = n;
    m.cols = 3 * kQuartersPerDay;
    m.data.assign(static_cast<std::size_t>(n) * m.cols, 0.0);
    for (int d = 0; d < n; ++d) {
        const auto& day = days[d];
        if (day.wind_rel.size() != kQuartersPerDay || day.pv_rel.size() != kQuartersPerDay ||
            day.gwi.size() != kQuartersPerDay)
            throw std::invalid_argument("standardize: profile length mismatch on day " +
                                        day.day_id);
        double* row = m.data.data() + static_cast<std::size_t>(d) * m.cols;
        std::copy(day.wind_rel.begin(), day.wind_rel.end(), row);
        std::copy(day.pv_rel.begin(), day.pv_rel.end(), row + kQuartersPerDay);
        std::copy(day.gwi.begin(), day.gwi.end(), row + 2 * kQuartersPerDay);
    }
    m.mean.assign(m.cols, 0.0);
    m.stdev.assign(m.cols, 0.0);
    for (int c = 0; c < m.cols; ++c) {
        double mu = 0.0;
        for (int d = 0; d < n; ++d) mu += m.at(d, c);
        mu /= n;
        double var = 0.0;
        for (int d = 0; d < n; ++d) {
            const double x = m.at(d, c) - mu;
            var += x * x;
        }
        var /= n;  // population convention
        double sd = std::sqrt(var);
        if (sd <= 1e-12 * std::max(1.0, std::abs(mu))) sd = 0.0;  // constant column
        m.mean[c] = mu;
        m.stdev[c] = sd;
        for (int d = 0; d < n; ++d) {
            double& x = m.data[static_cast<std::size_t>(d) * m.cols + c];
            x = sd > 0.0 ? (x - mu) / sd : 0.0;
        }
    }
    return m;
}

Clustering kmeans(const FeatureMatrix& matrix, int k, std::uint64_t seed,
                  const KMeansOptions& opts) {
    if (k < 1 || k > matrix.days)
        throw std::invalid_argument("kmeans: k must be in [1, days]");
    Rng master(seed);
    std::vector<std::uint64_t> sub(opts.restarts);
    for (auto& s : sub) s = master.next_u64();

    Clustering best;
    best.k = k;
    best.rng_seed = seed;
    bool have = false;
    for (int r = 0; r < opts.restarts; ++r) {
        Rng rng(sub[r]);
        auto res = lloyd(matrix, k, kmeanspp_init(matrix, k, rng), opts);
        if (!have || res.wcss < best.wcss) {
            have = true;
            best.assignment = std::move(res.assignment);
            best.centroids = std::move(res.centroids);
            best.wcss = res.wcss;
            best.iteration_wcss = std::move(res.iteration_wcss);
        }
    }
    return best;
}

std::vector<std::pair<int, double>> wcss_curve(const FeatureMatrix& matrix,
                                               std::span<const int> k_values,
                                               std::uint64_t seed, const KMeansOptions& opts) {
    std::vector<int> ks(k_values.begin(), k_values.end());
    std::sort(ks.begin(), ks.end());
    std::vector<std::pair<int, double>> out;
    Clustering prev;
    bool have_prev = false;
    for (int k : ks) {
        Clustering c = kmeans(matrix, k, seed, opts);
        if (have_prev && prev.k < k) {
            // Nested restart: previous best centroids plus farthest points.
            std::vector<double> centroids = prev.centroids;
            centroids.resize(static_cast<std::size_t>(k) * matrix.cols);
            std::vector<double> dist(matrix.days);
            for (int d = 0; d < matrix.days; ++d) {
                double bd = sq_dist(matrix.row(d), prev.centroids.data(), matrix.cols);
                for (int cc = 1; cc < prev.k; ++cc)
                    bd = std::min(bd,
                                  sq_dist(matrix.row(d),
                                          prev.centroids.data() +
                                              static_cast<std::size_t>(cc) * matrix.cols,
                                          matrix.cols));
                dist[d] = bd;
            }
            for (int extra = prev.k; extra < k; ++extra) {
                int far = 0;
                for (int d = 1; d < matrix.days; ++d)
                    if (dist[d] > dist[far]) far = d;
                double* t = centroids.data() + static_cast<std::size_t>(extra) * matrix.cols;
                std::copy_n(matrix.row(far).data(), matrix.cols, t);
                for (int d = 0; d < matrix.days; ++d)
                    dist[d] = std::min(dist[d], sq_dist(matrix.row(d), t, matrix.cols));
            }
            auto nested = lloyd(matrix, k, std::move(centroids), opts);
            if (nested.wcss < c.wcss) {
                c.assignment = std::move(nested.assignment);
                c.centroids = std::move(nested.centroids);
                c.wcss = nested.wcss;
                c.iteration_wcss = std::move(nested.iteration_wcss);
            }
        }
        out.emplace_back(k, c.wcss);
        prev = std::move(c);
        have_prev = true;
    }
    return out;
}

ScenarioTree build_tree(const Clustering& clustering, std::span<const DayProfiles> days) {
    const int n = static_cast<int>(days.size());
    if (static_cast<int>(clustering.assignment.size()) != n)
        throw std::invalid_argument("build_tree: clustering does not cover all days");
    for (const auto& day : days) {
        if (day.da_price.size() != kHoursPerDay || day.id_price.size() != kQuartersPerDay)
            throw std::invalid_argument("build_tree: missing price data for day " + day.day_id);
    }

    ScenarioTree tree;
    tree.clusters.resize(clustering.k);
    for (int c = 0; c < clustering.k; ++c) {
        auto& node = tree.clusters[c];
        node.cluster_id = c;
        node.da_price.resolution = Resolution::Hour;
        node.da_price.unit = Unit::EurPerMwh;
        node.da_price.day_id = "cluster-" + std::to_string(c);
        node.da_price.values.assign(kHoursPerDay, 0.0);
    }
    for (int d = 0; d < n; ++d) {
        const int c = clustering.assignment[d];
        auto& node = tree.clusters.at(c);
        node.member_scenarios.push_back(d);
        for (int h = 0; h < kHoursPerDay; ++h) node.da_price.values[h] += days[d].da_price[h];
    }
    for (auto& node : tree.clusters) {
        if (node.member_scenarios.empty())
            throw std::invalid_argument("build_tree: empty cluster " +
                                        std::to_string(node.cluster_id));
        for (auto& v : node.da_price.values) v /= node.member_scenarios.size();
    }

    const double prob = 1.0 / n;
    tree.scenarios.resize(n);
    for (int d = 0; d < n; ++d) {
        const auto& day = days[d];
        auto& s = tree.scenarios[d];
        s.scenario_id = d;
        s.cluster_id = clustering.assignment[d];
        s.probability = prob;
        const auto& da_avg = tree.clusters[s.cluster_id].da_price.values;
        s.id_price = {Resolution::QuarterHour, Unit::EurPerMwh,
                      std::vector<double>(kQuartersPerDay, 0.0), day.day_id};
        for (int t = 0; t < kQuartersPerDay; ++t) {
            // Market deviation d = ID - DA of the original day; the rebuilt
            // ID price rides on the cluster DA average.
            const double deviation = day.id_price[t] - day.da_price[t / 4];
            s.id_price.values[t] = da_avg[t / 4] + deviation;
        }
        s.pv = {Resolution::QuarterHour, Unit::Dimensionless, day.pv_rel, day.day_id};
        s.wind = {Resolution::QuarterHour, Unit::Dimensionless, day.wind_rel, day.day_id};
        s.gwi = {Resolution::QuarterHour, Unit::KgCo2PerMwh, day.gwi, day.day_id};
    }
    return tree;
}

DeviationStdReport deviation_std_report(const ScenarioTree& tree) {
    DeviationStdReport rep;
    rep.per_cluster.reserve(tree.clusters.size());
    for (const auto& cluster : tree.clusters) {
        const int nm = static_cast<int>(cluster.member_scenarios.size());
        double daily = 0.0;
        for (int t = 0; t < kQuartersPerDay; ++t) {
            double mu = 0.0;
            for (int sid : cluster.member_scenarios) {
                const auto& s = tree.scenarios[sid];
                mu += s.id_price.values[t] - cluster.da_price.values[t / 4];
            }
            mu /= nm;
            double var = 0.0;
            for (int sid : cluster.member_scenarios) {
                const auto& s = tree.scenarios[sid];
                const double dev = s.id_price.values[t] - cluster.da_price.values[t / 4] - mu;
                var += dev * dev;
            }
            daily += std::sqrt(var / nm);
        }
        rep.per_cluster.push_back(daily / kQuartersPerDay);
    }
    double avg = 0.0;
    for (double v : rep.per_cluster) avg += v;
    rep.average = rep.per_cluster.empty() ? 0.0 : avg / rep.per_cluster.size();
    return rep;
}

}  // namespace flexdes::scenarios
