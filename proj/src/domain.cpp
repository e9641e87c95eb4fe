#include "flexdes/domain.hpp"

#include <cmath>
#include <string>

namespace flexdes {

const char* unit_name(Unit u) {
    switch (u) {
        case Unit::EurPerMwh: return "EUR/MWh";
        case Unit::Mw: return "MW";
        case Unit::KgCo2PerMwh: return "kgCO2/MWh";
        case Unit::Dimensionless: return "-";
    }
    return "?";
}

double annuity_factor(double interest_rate, double lifetime_years) {
    const double g = std::pow(1.0 + interest_rate, lifetime_years);
    return g * interest_rate / (g - 1.0);
}

TechEconSpec TechEconSpec::defaults(const ProcessSpec& proc) {
    TechEconSpec e;
    // Data sheet values are quoted per kWp / kWh; internal units are MW / MWh.
    e.pv = TechSpec{927.0 * 1000.0, 25.0, 17.0 * 1000.0, 0.0, proc.nominal_power_mw};
    e.wind = TechSpec{1113.0 * 1000.0, 25.0, 13.0 * 1000.0, 0.0, proc.nominal_power_mw};
    e.battery = TechSpec{550.0 * 1000.0, 15.0, 20.0 * 1000.0, 0.0,
                         4.0 * proc.nominal_power_mw};
    e.interest_rate = 0.08;
    e.grid_fee_eur_per_mwh = 29.6;
    e.battery_rate_hours = 4.0;
    e.eta_in = std::sqrt(0.9);
    e.eta_out = std::sqrt(0.9);
    return e;
}

namespace {

void check_finite(const std::vector<double>& v, const std::string& what,
                  std::vector<std::string>& out) {
    for (double x : v) {
        if (!std::isfinite(x)) {
            out.push_back(what + ": non-finite value");
            return;
        }
    }
}

}  // namespace

std::vector<std::string> validate_profile(const DailyProfile& p) {
    std::vector<std::string> out;
    const std::size_t want = static_cast<std::size_t>(steps_per_day(p.resolution));
    if (p.values.size() != want) {
        out.push_back("profile " + p.day_id + ": length mismatch (have " +
                      std::to_string(p.values.size()) + ", want " + std::to_string(want) + ")");
    }
    check_finite(p.values, "profile " + p.day_id, out);
    return out;
}

std::vector<std::string> validate_process(const ProcessSpec& p) {
    std::vector<std::string> out;
    if (!(p.nominal_power_mw > 0.0)) out.push_back("process: nominal power must be positive");
    if (p.min_part_load < 0.0 || p.min_part_load > 1.0)
        out.push_back("process: min part load outside [0,1]");
    if (p.oversizing < 0.0) out.push_back("process: negative oversizing");
    if (p.storage_hours < 0.0) out.push_back("process: negative storage hours");
    if (p.ramp_per_hour < 0.0) out.push_back("process: negative ramp limit");
    return out;
}

std::vector<std::string> validate_econ(const TechEconSpec& e) {
    std::vector<std::string> out;
    if (!(e.interest_rate > 0.0)) out.push_back("econ: interest rate must be positive");
    for (const auto* t : {&e.pv, &e.wind, &e.battery}) {
        if (!(t->lifetime_years > 0.0)) out.push_back("econ: lifetime must be positive");
        if (t->capacity_max < 0.0) out.push_back("econ: negative capacity limit");
    }
    const double rt = e.eta_in * e.eta_out;
    if (rt > 1.0) out.push_back("econ: efficiency > 1");
    if (!(rt > 0.0)) out.push_back("econ: round-trip efficiency must be positive");
    if (!(e.battery_rate_hours > 0.0)) out.push_back("econ: battery rate must be positive");
    if (e.grid_fee_eur_per_mwh < 0.0) out.push_back("econ: negative grid fee");
    return out;
}

std::vector<std::string> validate(const std::vector<DailyProfile>& profiles,
                                  const ProcessSpec& proc, const TechEconSpec& econ) {
    std::vector<std::string> out;
    for (const auto& p : profiles) {
        auto v = validate_profile(p);
        out.insert(out.end(), v.begin(), v.end());
    }
    // Profiles that describe the same series must agree on their unit tag.
    for (std::size_t i = 0; i + 1 < profiles.size(); ++i) {
        const auto& a = profiles[i];
        const auto& b = profiles[i + 1];
        if (a.day_id == b.day_id && a.resolution == b.resolution && a.unit != b.unit) {
            out.push_back("profiles " + a.day_id + ": mixed units (" +
                          std::string(unit_name(a.unit)) + " vs " + unit_name(b.unit) + ")");
        }
    }
    auto vp = validate_process(proc);
    out.insert(out.end(), vp.begin(), vp.end());
    auto ve = validate_econ(econ);
    out.insert(out.end(), ve.begin(), ve.end());
    return out;
}

std::vector<std::string> validate_tree(const ScenarioTree& tree) {
    std::vector<std::string> out;
    double psum = 0.0;
    for (const auto& s : tree.scenarios) {
        psum += s.probability;
        if (s.cluster_id < 0 || s.cluster_id >= static_cast<int>(tree.clusters.size())) {
            out.push_back("scenario " + std::to_string(s.scenario_id) + ": unknown cluster");
            continue;
        }
        for (const auto* p : {&s.id_price, &s.pv, &s.wind, &s.gwi}) {
            auto v = validate_profile(*p);
            out.insert(out.end(), v.begin(), v.end());
        }
        if (s.id_price.unit != Unit::EurPerMwh) out.push_back("scenario id price: wrong unit");
        if (s.gwi.unit != Unit::KgCo2PerMwh) out.push_back("scenario gwi: wrong unit");
        for (const auto* p : {&s.pv, &s.wind}) {
            if (p->unit != Unit::Dimensionless) out.push_back("relative power profile: wrong unit");
            for (double x : p->values) {
                if (x < -1e-12 || x > 1.0 + 1e-12) {
                    out.push_back("relative power profile outside [0,1]");
                    break;
                }
            }
        }
    }
    if (std::abs(psum - 1.0) > 1e-12)
        out.push_back("scenario probabilities sum to " + std::to_string(psum));
    for (const auto& c : tree.clusters) {
        if (c.member_scenarios.empty())
            out.push_back("cluster " + std::to_string(c.cluster_id) + ": no members");
        auto v = validate_profile(c.da_price);
        out.insert(out.end(), v.begin(), v.end());
        if (c.da_price.resolution != Resolution::Hour) out.push_back("cluster DA price: wrong resolution");
        if (c.da_price.unit != Unit::EurPerMwh) out.push_back("cluster DA price: wrong unit");
    }
    return out;
}

}  // namespace flexdes
