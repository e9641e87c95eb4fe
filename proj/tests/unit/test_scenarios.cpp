#include <algorithm>
#include <cmath>

#include "doctest.h"
#include "fixtures.hpp"
#include "flexdes/scenarios.hpp"

using namespace flexdes;
using namespace flexdes::scenarios;

namespace {

/// Exhaustive two-cluster partition oracle: minimal wcss over all
/// assignments with both clusters non-empty.
double brute_force_two_cluster_wcss(const FeatureMatrix& m) {
    double best = -1.0;
    for (unsigned mask = 1; mask + 1 < (1u << m.days); ++mask) {
        std::vector<double> c0(m.cols, 0.0), c1(m.cols, 0.0);
        int n0 = 0, n1 = 0;
        for (int d = 0; d < m.days; ++d) {
            const bool in1 = mask & (1u << d);
            auto& c = in1 ? c1 : c0;
            (in1 ? n1 : n0) += 1;
            for (int j = 0; j < m.cols; ++j) c[j] += m.at(d, j);
        }
        for (int j = 0; j < m.cols; ++j) {
            c0[j] /= n0;
            c1[j] /= n1;
        }
        double wcss = 0.0;
        for (int d = 0; d < m.days; ++d) {
            const auto& c = (mask & (1u << d)) ? c1 : c0;
            for (int j = 0; j < m.cols; ++j) {
                const double diff = m.at(d, j) - c[j];
                wcss += diff * diff;
            }
        }
        if (best < 0.0 || wcss < best) best = wcss;
    }
    return best;
}

}  // namespace

TEST_CASE("standardize") {
    auto days = test::make_days({.days = 2, .seed = 1});
    days[1] = days[0];
    days[1].day_id = "copy";
    const auto zero = standardize(days);
    for (double v : zero.data) CHECK(v == 0.0);  // identical days, zero variance

    auto two = test::make_days({.days = 2, .seed = 2});
    two[0].wind_rel.assign(96, 0.0);
    two[1].wind_rel.assign(96, 2.0 / 2.0);  // values {0, 1} -> z-scores -1, +1
    const auto m = standardize(two);
    CHECK(m.at(0, 0) == doctest::Approx(-1.0));
    CHECK(m.at(1, 0) == doctest::Approx(1.0));

    const auto many = test::make_days({.days = 12, .seed = 3});
    const auto big = standardize(many);
    CHECK(big.days == 12);
    CHECK(big.cols == 288);
    // Per-column mean 0, std 1 (population) after z-scoring.
    for (int c = 0; c < big.cols; ++c) {
        double mu = 0.0, var = 0.0;
        for (int d = 0; d < big.days; ++d) mu += big.at(d, c);
        mu /= big.days;
        for (int d = 0; d < big.days; ++d) var += std::pow(big.at(d, c) - mu, 2);
        var /= big.days;
        CHECK(std::abs(mu) <= 1e-9);
        if (big.stdev[c] > 0.0) CHECK(std::abs(var - 1.0) <= 1e-9);
    }

    const std::vector<DayProfiles> single(1, days[0]);
    CHECK_THROWS_AS(standardize(single), std::invalid_argument);
}

TEST_CASE("kmeans degenerate and separable cases") {
    auto days = test::make_days({.days = 3, .seed = 4});
    days[1] = days[0];
    days[2] = days[0];
    const auto m = standardize(days);  // all-zero matrix
    const auto one = kmeans(m, 1, 11);
    CHECK(one.wcss == doctest::Approx(0.0));
    for (double v : one.centroids) CHECK(v == 0.0);

    // Two well-separated pairs: optimum must match the exhaustive search.
    auto quad = test::make_days({.days = 4, .seed = 5});
    for (int d = 0; d < 4; ++d) {
        const double level = d < 2 ? 0.1 : 0.9;
        quad[d].wind_rel.assign(96, level + 0.01 * d);
        quad[d].pv_rel.assign(96, level);
        quad[d].gwi.assign(96, 100.0 + 500.0 * level);
    }
    const auto mq = standardize(quad);
    const auto two = kmeans(mq, 2, 17);
    CHECK(two.wcss == doctest::Approx(brute_force_two_cluster_wcss(mq)).epsilon(1e-9));
    CHECK(two.assignment[0] == two.assignment[1]);
    CHECK(two.assignment[2] == two.assignment[3]);
    CHECK(two.assignment[0] != two.assignment[2]);

    // k = number of days: every day its own cluster.
    const auto all = kmeans(mq, 4, 23);
    CHECK(all.wcss == doctest::Approx(0.0));

    CHECK_THROWS_AS(kmeans(mq, 5, 1), std::invalid_argument);

    // wcss re-derived from assignment matches the reported value.
    const auto fix = standardize(test::make_days({.days = 15, .seed = 6}));
    const auto c = kmeans(fix, 4, 31);
    double wcss = 0.0;
    for (int d = 0; d < fix.days; ++d) {
        for (int j = 0; j < fix.cols; ++j) {
            const double diff =
                fix.at(d, j) - c.centroids[static_cast<std::size_t>(c.assignment[d]) * fix.cols + j];
            wcss += diff * diff;
        }
    }
    CHECK(std::abs(wcss - c.wcss) <= 1e-9 * (1.0 + wcss));

    // Lloyd iterations never increase the objective.
    for (std::size_t i = 1; i < c.iteration_wcss.size(); ++i)
        CHECK(c.iteration_wcss[i] <= c.iteration_wcss[i - 1] + 1e-9);
}

TEST_CASE("wcss curve is non-increasing and anchored") {
    const auto m = standardize(test::make_days({.days = 20, .seed = 7}));
    const std::vector<int> ks{1, 2, 4, 8, 12, 20};
    const auto curve = wcss_curve(m, ks, 13);
    REQUIRE(curve.size() == ks.size());
    // k = 1: wcss equals the total squared deviation from the grand mean.
    double total = 0.0;
    std::vector<double> mean(m.cols, 0.0);
    for (int d = 0; d < m.days; ++d)
        for (int j = 0; j < m.cols; ++j) mean[j] += m.at(d, j) / m.days;
    for (int d = 0; d < m.days; ++d)
        for (int j = 0; j < m.cols; ++j) total += std::pow(m.at(d, j) - mean[j], 2);
    CHECK(curve[0].second == doctest::Approx(total).epsilon(1e-9));
    for (std::size_t i = 1; i < curve.size(); ++i)
        CHECK(curve[i].second <= curve[i - 1].second + 1e-9);
    CHECK(curve.back().second == doctest::Approx(0.0));
}

TEST_CASE("tree reconstruction is exact for identical days") {
    auto days = test::make_days({.days = 6, .seed = 8});
    for (int d = 1; d < 6; ++d) {
        days[d].da_price = days[0].da_price;
        days[d].id_price = days[0].id_price;
        days[d].wind_rel = days[0].wind_rel;
        days[d].pv_rel = days[0].pv_rel;
        days[d].gwi = days[0].gwi;
    }
    Clustering c;
    c.k = 1;
    c.assignment.assign(6, 0);
    c.centroids.assign(288, 0.0);
    const auto tree = build_tree(c, days);
    for (const auto& s : tree.scenarios)
        for (int t = 0; t < 96; ++t)
            CHECK(std::abs(s.id_price.values[t] - days[0].id_price[t]) <= 1e-12);
}

TEST_CASE("two-day cluster averages DA and shifts deviations") {
    auto days = test::make_days({.days = 2, .seed = 9});
    Clustering c;
    c.k = 1;
    c.assignment = {0, 0};
    c.centroids.assign(288, 0.0);
    const auto tree = build_tree(c, days);
    for (int h = 0; h < 24; ++h)
        CHECK(tree.clusters[0].da_price.values[h] ==
              doctest::Approx(0.5 * (days[0].da_price[h] + days[1].da_price[h])).epsilon(1e-12));
    for (int s = 0; s < 2; ++s) {
        for (int t = 0; t < 96; ++t) {
            const double avg = 0.5 * (days[0].da_price[t / 4] + days[1].da_price[t / 4]);
            const double dev = days[s].id_price[t] - days[s].da_price[t / 4];
            CHECK(tree.scenarios[s].id_price.values[t] ==
                  doctest::Approx(avg + dev).epsilon(1e-12));
        }
    }
    // Reconstruction consistency: cluster mean of ID equals DA average
    // plus the mean member deviation.
    for (int t = 0; t < 96; ++t) {
        const double mean_id = 0.5 * (tree.scenarios[0].id_price.values[t] +
                                      tree.scenarios[1].id_price.values[t]);
        const double mean_dev = 0.5 * ((days[0].id_price[t] - days[0].da_price[t / 4]) +
                                       (days[1].id_price[t] - days[1].da_price[t / 4]));
        CHECK(std::abs(mean_id - (tree.clusters[0].da_price.values[t / 4] + mean_dev)) <= 1e-9);
    }
}

TEST_CASE("fixture tree at scale keeps probabilities normalized") {
    const auto tree = test::make_tree({.days = 30, .seed = 10}, 4);
    CHECK(tree.scenarios.size() == 30);
    CHECK(tree.clusters.size() == 4);
    double p = 0.0;
    for (const auto& s : tree.scenarios) p += s.probability;
    CHECK(std::abs(p - 1.0) <= 1e-12);
    CHECK(validate_tree(tree).empty());
}

TEST_CASE("deviation std report") {
    // Single-member clusters have zero deviation spread.
    auto days = test::make_days({.days = 2, .seed = 11});
    Clustering c;
    c.k = 2;
    c.assignment = {0, 1};
    c.centroids.assign(2 * 288, 0.0);
    const auto tree = build_tree(c, days);
    const auto rep = deviation_std_report(tree);
    CHECK(rep.per_cluster[0] == doctest::Approx(0.0));
    CHECK(rep.per_cluster[1] == doctest::Approx(0.0));

    // Two members with deviations +x and -x everywhere: std is x.
    auto pair = test::make_days({.days = 2, .seed = 12});
    pair[1].da_price = pair[0].da_price;
    const double x = 4.25;
    for (int t = 0; t < 96; ++t) {
        pair[0].id_price[t] = pair[0].da_price[t / 4] + x;
        pair[1].id_price[t] = pair[1].da_price[t / 4] - x;
    }
    Clustering c1;
    c1.k = 1;
    c1.assignment = {0, 0};
    c1.centroids.assign(288, 0.0);
    const auto rep2 = deviation_std_report(build_tree(c1, pair));
    CHECK(rep2.average == doctest::Approx(x).epsilon(1e-12));

    // More clusters shrink the within-cluster deviation spread on the
    // synthetic fixture.
    const auto many = test::make_days({.days = 60, .seed = 13});
    const auto m = standardize(many);
    KMeansOptions ko;
    ko.restarts = 4;
    double prev = -1.0;
    for (int k : {10, 20, 30}) {
        const auto rep3 = deviation_std_report(build_tree(kmeans(m, k, 19, ko), many));
        if (prev >= 0.0) CHECK(rep3.average <= prev + 1e-9);
        prev = rep3.average;
    }
}
