#include "fixtures.hpp"

#include <algorithm>
#include <cmath>

#include "flexdes/rng.hpp"

namespace flexdes::test {

namespace {

constexpr double kPi = 3.14159265358979323846;

double gaussian(Rng& rng) {
    // Box-Muller; deterministic on our own generator.
    const double u1 = std::max(rng.uniform(), 1e-12);
    const double u2 = rng.uniform();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * kPi * u2);
}

}  // namespace

std::vector<scenarios::DayProfiles> make_days(const FixtureSpec& spec) {
    Rng rng(spec.seed);
    std::vector<scenarios::DayProfiles> days(spec.days);
    for (int d = 0; d < spec.days; ++d) {
        auto& day = days[d];
        day.day_id = "2022-" + std::to_string(100 + d);
        // Day archetypes: windiness, cloudiness and price level vary by day.
        const double windy = 0.3 + 0.7 * rng.uniform();
        const double sunny = 0.3 + 0.7 * rng.uniform();
        const double price_level = spec.da_base * (0.8 + 0.4 * rng.uniform());

        day.da_price.resize(kHoursPerDay);
        for (int h = 0; h < kHoursPerDay; ++h) {
            const double morning = std::exp(-0.5 * std::pow((h - 8.0) / 2.5, 2));
            const double evening = std::exp(-0.5 * std::pow((h - 19.0) / 2.5, 2));
            const double midday_dip = 0.5 * std::exp(-0.5 * std::pow((h - 13.0) / 2.0, 2));
            day.da_price[h] = price_level +
                              spec.da_amplitude * (morning + evening - midday_dip) +
                              2.0 * gaussian(rng);
        }

        day.id_price.resize(kQuartersPerDay);
        for (int t = 0; t < kQuartersPerDay; ++t)
            day.id_price[t] = day.da_price[t / 4] + spec.deviation_std * gaussian(rng);

        day.wind_rel.resize(kQuartersPerDay);
        double w = std::clamp(spec.wind_level * windy + 0.1 * gaussian(rng), 0.0, 1.0);
        for (int t = 0; t < kQuartersPerDay; ++t) {
            w = std::clamp(w + 0.04 * gaussian(rng), 0.0, 1.0);
            day.wind_rel[t] = w;
        }

        day.pv_rel.resize(kQuartersPerDay);
        for (int t = 0; t < kQuartersPerDay; ++t) {
            // Daylight bell between 06:00 and 18:00.
            const double x = (t - 24) / 48.0;
            const double bell = (x >= 0.0 && x <= 1.0) ? std::sin(kPi * x) : 0.0;
            day.pv_rel[t] = std::clamp(spec.pv_level * sunny * bell, 0.0, 1.0);
        }

        day.gwi.resize(kQuartersPerDay);
        for (int t = 0; t < kQuartersPerDay; ++t) {
            const double renew = 0.5 * (day.wind_rel[t] + day.pv_rel[t]);
            day.gwi[t] = std::max(
                20.0, spec.gwi_base + spec.gwi_amplitude * (0.6 - renew) + 6.0 * gaussian(rng));
        }
    }
    return days;
}

ScenarioTree make_tree(const FixtureSpec& spec, int k, std::uint64_t cluster_seed) {
    const auto days = make_days(spec);
    const auto matrix = scenarios::standardize(days);
    scenarios::KMeansOptions opts;
    opts.restarts = 5;
    const auto clustering = scenarios::kmeans(matrix, k, cluster_seed, opts);
    return scenarios::build_tree(clustering, days);
}

ScenarioTree flat_tree(double price_eur_mwh) {
    ScenarioTree tree;
    ClusterNode c;
    c.cluster_id = 0;
    c.da_price = {Resolution::Hour, Unit::EurPerMwh,
                  std::vector<double>(kHoursPerDay, price_eur_mwh), "flat"};
    c.member_scenarios = {0};
    tree.clusters.push_back(std::move(c));
    ScenarioNode s;
    s.scenario_id = 0;
    s.cluster_id = 0;
    s.probability = 1.0;
    s.id_price = {Resolution::QuarterHour, Unit::EurPerMwh,
                  std::vector<double>(kQuartersPerDay, price_eur_mwh), "flat"};
    s.pv = {Resolution::QuarterHour, Unit::Dimensionless,
            std::vector<double>(kQuartersPerDay, 0.0), "flat"};
    s.wind = {Resolution::QuarterHour, Unit::Dimensionless,
              std::vector<double>(kQuartersPerDay, 0.0), "flat"};
    s.gwi = {Resolution::QuarterHour, Unit::KgCo2PerMwh,
             std::vector<double>(kQuartersPerDay, 400.0), "flat"};
    tree.scenarios.push_back(std::move(s));
    return tree;
}

}  // namespace flexdes::test
