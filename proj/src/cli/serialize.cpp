#include "flexdes/cli/serialize.hpp"

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include "json.hpp"

namespace flexdes::cli {

using nlohmann::json;

double snap12(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.12g", v);
    return std::strtod(buf, nullptr);
}

namespace {

json profile_values(const std::vector<double>& v) {
    json arr = json::array();
    for (double x : v) arr.push_back(snap12(x));
    return arr;
}

std::vector<double> values_from(const json& arr, std::size_t expected, const char* what) {
    if (!arr.is_array() || arr.size() != expected)
        throw ConfigError(std::string("tree json: bad array length for ") + what);
    std::vector<double> v;
    v.reserve(expected);
    for (const auto& x : arr) v.push_back(x.get<double>());
    return v;
}

}  // namespace

std::string tree_to_json(const ScenarioTree& tree) {
    json j;
    j["schema"] = "flexdes-tree-v1";
    j["delta_t_hours"] = kDeltaTHours;
    json clusters = json::array();
    for (const auto& c : tree.clusters) {
        clusters.push_back({{"cluster_id", c.cluster_id},
                            {"da_price_eur_mwh", profile_values(c.da_price.values)},
                            {"members", c.member_scenarios}});
    }
    j["clusters"] = std::move(clusters);
    json scenarios = json::array();
    for (const auto& s : tree.scenarios) {
        scenarios.push_back({{"scenario_id", s.scenario_id},
                             {"cluster_id", s.cluster_id},
                             {"day_id", s.id_price.day_id},
                             {"probability", snap12(s.probability)},
                             {"id_price_eur_mwh", profile_values(s.id_price.values)},
                             {"pv_rel", profile_values(s.pv.values)},
                             {"wind_rel", profile_values(s.wind.values)},
                             {"gwi_kg_mwh", profile_values(s.gwi.values)}});
    }
    j["scenarios"] = std::move(scenarios);
    return j.dump(1);
}

ScenarioTree tree_from_json(const std::string& text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::parse_error& e) {
        throw ConfigError(std::string("cannot parse tree json: ") + e.what());
    }
    if (!j.contains("schema") || j["schema"] != "flexdes-tree-v1")
        throw ConfigError("tree json: unknown schema");
    ScenarioTree tree;
    for (const auto& c : j["clusters"]) {
        ClusterNode node;
        node.cluster_id = c["cluster_id"].get<int>();
        node.da_price = {Resolution::Hour, Unit::EurPerMwh,
                         values_from(c["da_price_eur_mwh"], kHoursPerDay, "da_price"),
                         "cluster-" + std::to_string(node.cluster_id)};
        node.member_scenarios = c["members"].get<std::vector<int>>();
        tree.clusters.push_back(std::move(node));
    }
    for (const auto& s : j["scenarios"]) {
        ScenarioNode node;
        node.scenario_id = s["scenario_id"].get<int>();
        node.cluster_id = s["cluster_id"].get<int>();
        node.probability = s["probability"].get<double>();
        const std::string day = s["day_id"].get<std::string>();
        node.id_price = {Resolution::QuarterHour, Unit::EurPerMwh,
                         values_from(s["id_price_eur_mwh"], kQuartersPerDay, "id_price"), day};
        node.pv = {Resolution::QuarterHour, Unit::Dimensionless,
                   values_from(s["pv_rel"], kQuartersPerDay, "pv_rel"), day};
        node.wind = {Resolution::QuarterHour, Unit::Dimensionless,
                     values_from(s["wind_rel"], kQuartersPerDay, "wind_rel"), day};
        node.gwi = {Resolution::QuarterHour, Unit::KgCo2PerMwh,
                    values_from(s["gwi_kg_mwh"], kQuartersPerDay, "gwi"), day};
        tree.scenarios.push_back(std::move(node));
    }
    // 12-digit serialization rounds the probabilities; renormalize so the
    // tree invariant holds exactly.
    double psum = 0.0;
    for (const auto& s : tree.scenarios) psum += s.probability;
    if (psum > 0.0)
        for (auto& s : tree.scenarios) s.probability /= psum;
    const auto issues = validate_tree(tree);
    if (!issues.empty()) throw ConfigError("tree json: " + issues.front());
    return tree;
}

std::string design_result_to_json(const DesignResult& r, const std::string& objective,
                                  const std::string& market_mode) {
    json j;
    j["objective"] = objective;
    j["market_mode"] = market_mode;
    j["capacities"] = {{"pv_mw", snap12(r.q_pv_mw)},
                       {"wind_mw", snap12(r.q_wind_mw)},
                       {"battery_mwh", snap12(r.q_batt_mwh)}};
    j["tac_eur_a"] = snap12(r.tac_eur_a);
    j["gwi_kg_a"] = snap12(r.gwi_kg_a);
    j["breakdown"] = {{"capex_eur_a", snap12(r.breakdown.capex)},
                      {"opex_el_eur_a", snap12(r.breakdown.opex_el)},
                      {"opex_grid_eur_a", snap12(r.breakdown.opex_grid)}};
    j["trades_mwh_a"] = {{"da_purchases", snap12(r.trades.da_purchases_mwh)},
                         {"da_sales", snap12(r.trades.da_sales_mwh)},
                         {"id_purchases", snap12(r.trades.id_purchases_mwh)},
                         {"id_sales", snap12(r.trades.id_sales_mwh)},
                         {"total_purchases", snap12(r.trades.purchases_mwh())},
                         {"total_sales", snap12(r.trades.sales_mwh())}};
    json da = json::array();
    for (const auto& cluster : r.da_trade_mw) da.push_back(profile_values(cluster));
    j["da_trade_mw"] = std::move(da);
    json schedules = json::array();
    for (const auto& s : r.schedules) {
        schedules.push_back({{"process_power_mw", profile_values(s.process_power_mw)},
                             {"id_trade_mw", profile_values(s.id_trade_mw)},
                             {"charge_mw", profile_values(s.charge_mw)},
                             {"discharge_mw", profile_values(s.discharge_mw)},
                             {"soc_mwh", profile_values(s.soc_mwh)},
                             {"storage_level_mwh", profile_values(s.storage_level_mwh)},
                             {"opex_grid_eur", profile_values(s.opex_grid_eur)}});
    }
    j["schedules"] = std::move(schedules);
    return j.dump(1);
}

void write_text_atomic(const std::string& path, const std::string& text) {
    const std::string tmp = path + ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary);
        if (!out) throw ConfigError("cannot open for writing: " + tmp);
        out << text;
    }
    if (std::rename(tmp.c_str(), path.c_str()) != 0)
        throw ConfigError("cannot move into place: " + path);
}

std::string read_text(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ConfigError("cannot open file: " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

std::string fnv1a_hex(const std::string& bytes) {
    unsigned long long h = 1469598103934665603ULL;
    for (unsigned char c : bytes) {
        h ^= c;
        h *= 1099511628211ULL;
    }
    char buf[20];
    std::snprintf(buf, sizeof(buf), "%016llx", h);
    return buf;
}

}  // namespace flexdes::cli
