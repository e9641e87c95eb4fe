#include "flexdes/cli/config.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include "json.hpp"

namespace flexdes::cli {

using nlohmann::json;

namespace {

double get_num(const json& j, const std::string& key, double fallback) {
    if (!j.contains(key)) return fallback;
    if (!j[key].is_number()) throw ConfigError("config field '" + key + "' must be a number");
    return j[key].get<double>();
}

std::string get_str(const json& j, const std::string& key, const std::string& fallback) {
    if (!j.contains(key)) return fallback;
    if (!j[key].is_string()) throw ConfigError("config field '" + key + "' must be a string");
    return j[key].get<std::string>();
}

TechSpec parse_tech(const json& j, const std::string& name, const TechSpec& fallback,
                    bool per_kwh) {
    TechSpec t = fallback;
    if (!j.contains(name)) return t;
    const json& tj = j[name];
    const std::string cap_key = per_kwh ? "capex_eur_per_kwh" : "capex_eur_per_kw";
    const std::string maint_key =
        per_kwh ? "maintenance_eur_per_kwh_a" : "maintenance_eur_per_kw_a";
    const std::string gwi_key = per_kwh ? "gwi_kg_per_kwh" : "gwi_kg_per_kw";
    const std::string max_key = per_kwh ? "capacity_max_mwh" : "capacity_max_mw";
    // Data sheets quote per kW / kWh; internal units are MW / MWh.
    if (tj.contains(cap_key)) t.capex0 = 1000.0 * get_num(tj, cap_key, 0.0);
    if (tj.contains(maint_key)) t.maintenance = 1000.0 * get_num(tj, maint_key, 0.0);
    if (tj.contains(gwi_key)) t.gwi_embodied = 1000.0 * get_num(tj, gwi_key, 0.0);
    t.lifetime_years = get_num(tj, "lifetime_years", t.lifetime_years);
    if (tj.contains(max_key)) t.capacity_max = get_num(tj, max_key, t.capacity_max);
    return t;
}

}  // namespace

RunConfig parse_config(const std::string& text, const std::string& origin) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::parse_error& e) {
        throw ConfigError("cannot parse config " + origin + ": " + e.what());
    }

    RunConfig cfg;
    if (j.contains("inputs")) {
        const json& in = j["inputs"];
        cfg.da_price_csv = get_str(in, "da_price_csv", "");
        cfg.id_price_csv = get_str(in, "id_price_csv", "");
        cfg.wind_speed_csv = get_str(in, "wind_speed_csv", "");
        cfg.irradiance_csv = get_str(in, "irradiance_csv", "");
        cfg.gwi_csv = get_str(in, "gwi_csv", "");
        cfg.performance_curve = get_str(in, "performance_curve", "");
    }

    if (j.contains("process")) {
        const json& p = j["process"];
        cfg.process.nominal_power_mw =
            get_num(p, "nominal_power_mw", cfg.process.nominal_power_mw);
        cfg.process.oversizing = get_num(p, "oversizing", cfg.process.oversizing);
        cfg.process.min_part_load = get_num(p, "min_part_load", cfg.process.min_part_load);
        cfg.process.storage_hours = get_num(p, "storage_hours", cfg.process.storage_hours);
        cfg.process.ramp_per_hour = get_num(p, "ramp_per_hour", cfg.process.ramp_per_hour);
    }

    cfg.econ = TechEconSpec::defaults(cfg.process);
    if (j.contains("economics")) {
        const json& e = j["economics"];
        cfg.econ.interest_rate = get_num(e, "interest_rate", cfg.econ.interest_rate);
        cfg.econ.grid_fee_eur_per_mwh =
            get_num(e, "grid_fee_eur_per_mwh", cfg.econ.grid_fee_eur_per_mwh);
        cfg.econ.battery_rate_hours =
            get_num(e, "battery_rate_hours", cfg.econ.battery_rate_hours);
        if (e.contains("round_trip_efficiency")) {
            const double rt = get_num(e, "round_trip_efficiency", 0.9);
            if (!(rt > 0.0))
                throw ConfigError("config field 'round_trip_efficiency' must be positive");
            cfg.econ.eta_in = cfg.econ.eta_out = std::sqrt(rt);
        }
        cfg.econ.pv = parse_tech(e, "pv", cfg.econ.pv, false);
        cfg.econ.wind = parse_tech(e, "wind", cfg.econ.wind, false);
        cfg.econ.battery = parse_tech(e, "battery", cfg.econ.battery, true);
    }

    if (j.contains("wind_site")) {
        const json& w = j["wind_site"];
        cfg.wind_site.hub_height_m = get_num(w, "hub_height_m", cfg.wind_site.hub_height_m);
        cfg.wind_site.measure_height_m =
            get_num(w, "measure_height_m", cfg.wind_site.measure_height_m);
        cfg.wind_site.roughness_m = get_num(w, "roughness_m", cfg.wind_site.roughness_m);
        cfg.wind_site.reference_speed_ms =
            get_num(w, "reference_speed_ms", cfg.wind_site.reference_speed_ms);
    }
    if (j.contains("pv_system")) {
        const json& p = j["pv_system"];
        cfg.pv_system.efficiency = get_num(p, "efficiency", cfg.pv_system.efficiency);
        cfg.pv_system.nominal_capacity_kw_m2 =
            get_num(p, "nominal_capacity_kw_m2", cfg.pv_system.nominal_capacity_kw_m2);
    }

    if (j.contains("clustering")) {
        const json& c = j["clustering"];
        cfg.cluster_count = static_cast<int>(get_num(c, "k", cfg.cluster_count));
        cfg.seed = static_cast<std::uint64_t>(get_num(c, "seed", double(cfg.seed)));
        cfg.kmeans_restarts = static_cast<int>(get_num(c, "restarts", cfg.kmeans_restarts));
    }
    if (cfg.cluster_count < 1) throw ConfigError("config field 'clustering.k' must be >= 1");

    const std::string mode = get_str(j, "market_mode", "simultaneous");
    if (mode == "simultaneous") {
        cfg.market_mode = model::MarketMode::Simultaneous;
    } else if (mode == "id_only") {
        cfg.market_mode = model::MarketMode::IdOnly;
    } else {
        throw ConfigError("config field 'market_mode' must be 'simultaneous' or 'id_only'");
    }

    const std::string obj = get_str(j, "objective", "tac");
    if (obj == "tac") {
        cfg.objective = model::ObjectiveKind::Tac;
    } else if (obj == "gwi") {
        cfg.objective = model::ObjectiveKind::Gwi;
    } else {
        throw ConfigError("config field 'objective' must be 'tac' or 'gwi'");
    }

    cfg.output_dir = get_str(j, "output_dir", cfg.output_dir);

    const auto issues = validate_process(cfg.process);
    if (!issues.empty()) throw ConfigError("config: " + issues.front());
    const auto econ_issues = validate_econ(cfg.econ);
    if (!econ_issues.empty()) throw ConfigError("config: " + econ_issues.front());
    return cfg;
}

RunConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file: " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_config(ss.str(), path);
}

std::string canonical_config(const RunConfig& cfg) {
    json j;
    j["inputs"] = {{"da_price_csv", cfg.da_price_csv},
                   {"id_price_csv", cfg.id_price_csv},
                   {"wind_speed_csv", cfg.wind_speed_csv},
                   {"irradiance_csv", cfg.irradiance_csv},
                   {"gwi_csv", cfg.gwi_csv},
                   {"performance_curve", cfg.performance_curve}};
    j["process"] = {{"nominal_power_mw", cfg.process.nominal_power_mw},
                    {"oversizing", cfg.process.oversizing},
                    {"min_part_load", cfg.process.min_part_load},
                    {"storage_hours", cfg.process.storage_hours},
                    {"ramp_per_hour", cfg.process.ramp_per_hour}};
    auto tech = [](const TechSpec& t) {
        return json{{"capex0", t.capex0},
                    {"lifetime_years", t.lifetime_years},
                    {"maintenance", t.maintenance},
                    {"gwi_embodied", t.gwi_embodied},
                    {"capacity_max", t.capacity_max}};
    };
    j["economics"] = {{"interest_rate", cfg.econ.interest_rate},
                      {"grid_fee_eur_per_mwh", cfg.econ.grid_fee_eur_per_mwh},
                      {"battery_rate_hours", cfg.econ.battery_rate_hours},
                      {"eta_in", cfg.econ.eta_in},
                      {"eta_out", cfg.econ.eta_out},
                      {"pv", tech(cfg.econ.pv)},
                      {"wind", tech(cfg.econ.wind)},
                      {"battery", tech(cfg.econ.battery)}};
    j["wind_site"] = {{"hub_height_m", cfg.wind_site.hub_height_m},
                      {"measure_height_m", cfg.wind_site.measure_height_m},
                      {"roughness_m", cfg.wind_site.roughness_m},
                      {"reference_speed_ms", cfg.wind_site.reference_speed_ms}};
    j["pv_system"] = {{"efficiency", cfg.pv_system.efficiency},
                      {"nominal_capacity_kw_m2", cfg.pv_system.nominal_capacity_kw_m2}};
    j["clustering"] = {{"k", cfg.cluster_count},
                       {"seed", cfg.seed},
                       {"restarts", cfg.kmeans_restarts}};
    j["market_mode"] =
        cfg.market_mode == model::MarketMode::Simultaneous ? "simultaneous" : "id_only";
    j["objective"] = cfg.objective == model::ObjectiveKind::Gwi ? "gwi" : "tac";
    j["output_dir"] = cfg.output_dir;
    return j.dump(2);
}

}  // namespace flexdes::cli
