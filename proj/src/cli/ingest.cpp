#include "flexdes/cli/ingest.hpp"

#include "flexdes/cli/csv.hpp"

#include <algorithm>
#include <map>
#include <set>

#include "flexdes/weather.hpp"

namespace flexdes::cli {

namespace {

using weather::MinuteSample;

std::vector<MinuteSample> to_minute_samples(const std::vector<CsvSample>& in) {
    std::vector<MinuteSample> out;
    out.reserve(in.size());
    for (const auto& s : in) out.push_back({s.minute, s.value});
    return out;
}

/// Fixed-step series (hourly or quarter-hourly): exact stamp positions
/// required, otherwise the day is rejected as nonstandard.
bool regular_profile(const std::vector<CsvSample>& samples, int step_minutes, int expected,
                     std::vector<double>& out) {
    if (static_cast<int>(samples.size()) != expected) return false;
    out.resize(expected);
    for (int i = 0; i < expected; ++i) {
        if (samples[i].minute != i * step_minutes) return false;
        out[i] = samples[i].value;
    }
    return true;
}

}  // namespace

IngestResult ingest(const RunConfig& cfg) {
    for (const auto& [field, path] :
         std::initializer_list<std::pair<const char*, const std::string&>>{
             {"inputs.da_price_csv", cfg.da_price_csv},
             {"inputs.id_price_csv", cfg.id_price_csv},
             {"inputs.wind_speed_csv", cfg.wind_speed_csv},
             {"inputs.irradiance_csv", cfg.irradiance_csv},
             {"inputs.gwi_csv", cfg.gwi_csv}}) {
        if (path.empty()) throw ConfigError(std::string("missing input path: ") + field);
    }

    const CsvSeries da = read_series_csv(cfg.da_price_csv);
    const CsvSeries id = read_series_csv(cfg.id_price_csv);
    const CsvSeries wind = read_series_csv(cfg.wind_speed_csv);
    const CsvSeries irr = read_series_csv(cfg.irradiance_csv);
    const CsvSeries gwi = read_series_csv(cfg.gwi_csv);

    const weather::PerformanceCurve curve =
        cfg.performance_curve.empty() ? weather::PerformanceCurve::generic()
                                      : weather::PerformanceCurve::load(cfg.performance_curve);

    IngestResult result;
    for (const auto& s : {&da, &id, &wind, &irr, &gwi})
        result.warnings.insert(result.warnings.end(), s->warnings.begin(), s->warnings.end());

    std::set<std::string> all_days;
    for (const auto* s : {&da, &id, &wind, &irr, &gwi})
        for (const auto& [day, _] : s->by_day) all_days.insert(day);

    for (const std::string& day : all_days) {
        auto reject = [&](const std::string& reason) {
            result.dropped.push_back({day, reason});
        };
        bool poisoned = false;
        for (const auto* s : {&da, &id, &wind, &irr, &gwi})
            poisoned = poisoned || s->poisoned.count(day) > 0;
        if (poisoned) {
            reject("malformed row in input");
            continue;
        }
        const auto da_it = da.by_day.find(day);
        const auto id_it = id.by_day.find(day);
        const auto wind_it = wind.by_day.find(day);
        const auto irr_it = irr.by_day.find(day);
        const auto gwi_it = gwi.by_day.find(day);
        if (da_it == da.by_day.end() || id_it == id.by_day.end() ||
            wind_it == wind.by_day.end() || irr_it == irr.by_day.end() ||
            gwi_it == gwi.by_day.end()) {
            reject("missing in at least one series");
            continue;
        }

        scenarios::DayProfiles bundle;
        bundle.day_id = day;
        if (!regular_profile(da_it->second, 60, kHoursPerDay, bundle.da_price)) {
            reject("nonstandard day length (DA price)");
            continue;
        }
        if (!regular_profile(id_it->second, 15, kQuartersPerDay, bundle.id_price)) {
            reject("nonstandard day length (ID price)");
            continue;
        }
        if (!regular_profile(gwi_it->second, 15, kQuartersPerDay, bundle.gwi)) {
            reject("nonstandard day length (grid emission factor)");
            continue;
        }

        const auto wind_q = weather::resample_10min_to_quarter(to_minute_samples(wind_it->second));
        if (!wind_q.ok) {
            reject("wind speed: " + wind_q.reason);
            continue;
        }
        const auto irr_q = weather::resample_10min_to_quarter(to_minute_samples(irr_it->second));
        if (!irr_q.ok) {
            reject("irradiance: " + irr_q.reason);
            continue;
        }
        bundle.wind_rel.resize(kQuartersPerDay);
        bundle.pv_rel.resize(kQuartersPerDay);
        bool bad_measurement = false;
        for (int t = 0; t < kQuartersPerDay; ++t) {
            if (wind_q.values[t] < 0.0 || irr_q.values[t] < 0.0) {
                bad_measurement = true;
                break;
            }
            bundle.wind_rel[t] =
                weather::wind_relative_output(wind_q.values[t], cfg.wind_site, curve);
            bundle.pv_rel[t] = weather::pv_relative_output(irr_q.values[t], cfg.pv_system);
        }
        if (bad_measurement) {
            reject("negative weather measurement");
            continue;
        }
        result.days.push_back(std::move(bundle));
    }

    std::sort(result.days.begin(), result.days.end(),
              [](const auto& a, const auto& b) { return a.day_id < b.day_id; });
    if (result.days.empty()) throw ConfigError("ingest: no day survived validation");
    return result;
}

}  // namespace flexdes::cli
