#include <cmath>

#include "doctest.h"
#include "fixtures.hpp"
#include "flexdes/domain.hpp"

using namespace flexdes;

TEST_CASE("profile length mismatch is reported") {
    DailyProfile p{Resolution::QuarterHour, Unit::Mw, std::vector<double>(95, 1.0), "d1"};
    const auto v = validate_profile(p);
    REQUIRE(v.size() == 1);
    CHECK(v[0].find("length mismatch") != std::string::npos);
}

TEST_CASE("reference process and default economics validate cleanly") {
    const auto proc = ProcessSpec::reference();
    CHECK(proc.nominal_power_mw == 2.74);
    CHECK(proc.oversizing == 0.20);
    CHECK(proc.min_part_load == 0.50);
    CHECK(proc.storage_hours == 3.0);
    CHECK(proc.ramp_per_hour == 0.25);
    const auto econ = TechEconSpec::defaults(proc);
    std::vector<DailyProfile> profiles{
        {Resolution::Hour, Unit::EurPerMwh, std::vector<double>(24, 50.0), "d"}};
    CHECK(validate(profiles, proc, econ).empty());
    // Capacity rules follow the nominal intake.
    CHECK(econ.pv.capacity_max == doctest::Approx(2.74));
    CHECK(econ.wind.capacity_max == doctest::Approx(2.74));
    CHECK(econ.battery.capacity_max == doctest::Approx(4.0 * 2.74));
    CHECK(econ.eta_in * econ.eta_out == doctest::Approx(0.9));
}

TEST_CASE("round-trip efficiency above one is rejected") {
    auto econ = TechEconSpec::defaults(ProcessSpec::reference());
    econ.eta_in = 1.05;
    econ.eta_out = 1.05;
    const auto v = validate_econ(econ);
    REQUIRE(!v.empty());
    CHECK(v[0].find("efficiency > 1") != std::string::npos);
}

TEST_CASE("non-finite values and mixed units are reported") {
    std::vector<DailyProfile> profiles{
        {Resolution::Hour, Unit::EurPerMwh, std::vector<double>(24, 1.0), "d"},
        {Resolution::Hour, Unit::Mw, std::vector<double>(24, 1.0), "d"}};
    profiles[0].values[3] = std::nan("");
    const auto v =
        validate(profiles, ProcessSpec::reference(), TechEconSpec::defaults(ProcessSpec::reference()));
    bool saw_finite = false, saw_mixed = false;
    for (const auto& msg : v) {
        saw_finite |= msg.find("non-finite") != std::string::npos;
        saw_mixed |= msg.find("mixed units") != std::string::npos;
    }
    CHECK(saw_finite);
    CHECK(saw_mixed);
}

TEST_CASE("scenario tree invariants hold for fixture trees") {
    const auto tree = test::make_tree({.days = 10, .seed = 5}, 3);
    CHECK(validate_tree(tree).empty());
    double p = 0.0;
    for (const auto& s : tree.scenarios) p += s.probability;
    CHECK(std::abs(p - 1.0) <= 1e-12);
}

TEST_CASE("annuity factor matches a high precision evaluation") {
    // Independent long-double evaluation of the capital recovery factor.
    const long double g = powl(1.08L, 25.0L);
    const long double expect = g * 0.08L / (g - 1.0L);
    CHECK(annuity_factor(0.08, 25.0) ==
          doctest::Approx(static_cast<double>(expect)).epsilon(1e-12));
    CHECK(annuity_factor(0.08, 25.0) == doctest::Approx(0.093679).epsilon(1e-5));
}
