#include <cmath>
#include <stdexcept>

#include "doctest.h"
#include "flexdes/rng.hpp"
#include "flexdes/weather.hpp"

using namespace flexdes;
using namespace flexdes::weather;

TEST_CASE("hub wind speed follows the log law") {
    const WindSiteSpec site{80.0, 10.0, 0.1, 11.8};
    // Independent evaluation: v * ln(80/0.1) / ln(10/0.1).
    const double expect = 5.0 * std::log(800.0) / std::log(100.0);
    CHECK(hub_wind_speed(5.0, site) == doctest::Approx(expect).epsilon(1e-14));
    CHECK(hub_wind_speed(5.0, site) == doctest::Approx(7.2577).epsilon(1e-4));
    CHECK(hub_wind_speed(0.0, site) == 0.0);

    WindSiteSpec same = site;
    same.hub_height_m = same.measure_height_m = 10.0;
    CHECK(hub_wind_speed(3.3, same) == doctest::Approx(3.3).epsilon(1e-14));

    WindSiteSpec bad = site;
    bad.measure_height_m = 0.05;  // below roughness length
    CHECK_THROWS_AS(hub_wind_speed(1.0, bad), std::invalid_argument);

    // Linearity in the measured speed.
    Rng rng(3);
    for (int i = 0; i < 20; ++i) {
        const double v = rng.uniform(0.0, 30.0);
        CHECK(hub_wind_speed(2.0 * v, site) ==
              doctest::Approx(2.0 * hub_wind_speed(v, site)).epsilon(1e-12));
    }
}

TEST_CASE("performance curve interpolation") {
    PerformanceCurve curve({{0.0, 0.0}, {0.4, 0.2}, {0.8, 0.8}, {1.2, 1.0}});
    const WindSiteSpec site{80.0, 10.0, 0.1, 11.8};

    CHECK(wind_relative_output(0.0, site, curve) == 0.0);
    // Exactly at a knot: the knot value. v_measure such that v_hub/v_ref = 0.4.
    const double scale = std::log(800.0) / std::log(100.0);
    const double at_knot = 0.4 * 11.8 / scale;
    CHECK(wind_relative_output(at_knot, site, curve) == doctest::Approx(0.2).epsilon(1e-12));
    // Midway between knots: arithmetic mean of their outputs.
    const double mid = 0.6 * 11.8 / scale;
    CHECK(wind_relative_output(mid, site, curve) == doctest::Approx(0.5).epsilon(1e-12));
    // Beyond the last knot the output holds.
    CHECK(curve.evaluate(5.0) == doctest::Approx(1.0));

    CHECK_THROWS_AS(PerformanceCurve({{0.0, 0.0}, {0.0, 0.5}}), std::invalid_argument);
    CHECK_THROWS_AS(PerformanceCurve({{0.1, 0.0}, {0.5, 0.5}}), std::invalid_argument);

    // Output stays in [0,1] over a dense scan of the shipped curve.
    const auto generic = PerformanceCurve::generic();
    CHECK(generic.points().size() == 50);
    for (int i = 0; i <= 500; ++i) {
        const double q = generic.evaluate(i * 0.01);
        CHECK(q >= 0.0);
        CHECK(q <= 1.0);
    }
}

TEST_CASE("pv relative output clamps at one and is monotone") {
    const PvSpec pv{0.19, 0.1};
    CHECK(pv_relative_output(0.0, pv) == 0.0);
    CHECK(pv_relative_output(1.0, pv) == 1.0);  // 1.9 clamped
    CHECK(pv_relative_output(0.3, pv) == doctest::Approx(0.57).epsilon(1e-12));
    double prev = -1.0;
    for (int i = 0; i <= 100; ++i) {
        const double q = pv_relative_output(i * 0.02, pv);
        CHECK(q >= prev);
        CHECK(q <= 1.0);
        prev = q;
    }
}

TEST_CASE("ten-minute resampling") {
    std::vector<MinuteSample> flat;
    for (int m = 0; m <= 1430; m += 10) flat.push_back({m, 3.5});
    const auto r = resample_10min_to_quarter(flat);
    REQUIRE(r.ok);
    REQUIRE(r.values.size() == 96);
    for (double v : r.values) CHECK(v == doctest::Approx(3.5));

    // Hand-interpolated: 0 at minute 10, 3 at minute 20 -> 1.5 at minute 15.
    std::vector<MinuteSample> ramp;
    for (int m = 0; m <= 1430; m += 10) ramp.push_back({m, m == 20 ? 3.0 : 0.0});
    ramp[1].value = 0.0;
    const auto r2 = resample_10min_to_quarter(ramp);
    REQUIRE(r2.ok);
    CHECK(r2.values[1] == doctest::Approx(1.5));  // minute 15

    // A two-hour hole rejects the day.
    std::vector<MinuteSample> gap;
    for (int m = 0; m <= 1430; m += 10) {
        if (m > 600 && m < 720) continue;
        gap.push_back({m, 1.0});
    }
    const auto r3 = resample_10min_to_quarter(gap);
    CHECK(!r3.ok);
    CHECK(r3.reason == "gap over 30 minutes");
}
