#include "flexdes/weather.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace flexdes::weather {

PerformanceCurve::PerformanceCurve(std::vector<std::pair<double, double>> points)
    : points_(std::move(points)) {
    if (points_.size() < 2) throw std::invalid_argument("performance curve: need >= 2 points");
    for (std::size_t i = 0; i < points_.size(); ++i) {
        const auto& [v, q] = points_[i];
        if (i > 0 && !(v > points_[i - 1].first))
            throw std::invalid_argument("performance curve: abscissae not strictly increasing");
        if (q < 0.0 || q > 1.0)
            throw std::invalid_argument("performance curve: output outside [0,1]");
    }
    if (points_.front().first != 0.0 || points_.front().second != 0.0)
        throw std::invalid_argument("performance curve: must start at (0, 0)");
}

double PerformanceCurve::evaluate(double v) const {
    if (points_.empty()) throw std::invalid_argument("performance curve: empty");
    if (v <= points_.front().first) return points_.front().second;
    if (v >= points_.back().first) return points_.back().second;
    auto it = std::upper_bound(points_.begin(), points_.end(), v,
                               [](double x, const auto& p) { return x < p.first; });
    const auto& [v1, q1] = *it;
    const auto& [v0, q0] = *(it - 1);
    const double w = (v - v0) / (v1 - v0);
    return q0 + w * (q1 - q0);
}

PerformanceCurve PerformanceCurve::load(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open performance curve file: " + path);
    std::string line;
    std::getline(in, line);  // header
    std::vector<std::pair<double, double>> pts;
    while (std::getline(in, line)) {
        if (line.empty() || line[0] == '#') continue;
        std::istringstream ss(line);
        double v = 0.0, q = 0.0;
        if (!(ss >> v >> q)) throw std::runtime_error("malformed curve line: " + line);
        pts.emplace_back(v, q);
    }
    return PerformanceCurve(std::move(pts));
}

PerformanceCurve PerformanceCurve::generic() {
    // 50 knots, cut-in at v_rel 0.25, rated output at 1.0, held beyond.
    std::vector<std::pair<double, double>> pts;
    pts.reserve(50);
    const double vin = 0.25;
    const double vin3 = vin * vin * vin;
    for (int i = 0; i < 50; ++i) {
        const double v = i * 0.045;
        double q = 0.0;
        if (v >= 1.0) {
            q = 1.0;
        } else if (v > vin) {
            q = (v * v * v - vin3) / (1.0 - vin3);
        }
        pts.emplace_back(v, q);
    }
    return PerformanceCurve(std::move(pts));
}

double hub_wind_speed(double v_measure_ms, const WindSiteSpec& site) {
    if (!(site.roughness_m > 0.0) || site.measure_height_m <= site.roughness_m ||
        site.hub_height_m <= site.roughness_m)
        throw std::invalid_argument("wind site: heights must exceed roughness length");
    return v_measure_ms * std::log(site.hub_height_m / site.roughness_m) /
           std::log(site.measure_height_m / site.roughness_m);
}

double wind_relative_output(double v_measure_ms, const WindSiteSpec& site,
                            const PerformanceCurve& curve) {
    if (!(site.reference_speed_ms > 0.0))
        throw std::invalid_argument("wind site: reference speed must be positive");
    return curve.evaluate(hub_wind_speed(v_measure_ms, site) / site.reference_speed_ms);
}

double pv_relative_output(double irradiance_kw_m2, const PvSpec& pv) {
    return std::min(pv.efficiency * irradiance_kw_m2 / pv.nominal_capacity_kw_m2, 1.0);
}

ResampleResult resample_10min_to_quarter(const std::vector<MinuteSample>& series) {
    ResampleResult r;
    if (series.size() < 2) {
        r.reason = "too few samples";
        return r;
    }
    for (std::size_t i = 1; i < series.size(); ++i) {
        if (series[i].minute <= series[i - 1].minute) {
            r.reason = "samples not strictly ordered";
            return r;
        }
    }
    r.values.reserve(kQuartersPerDay);
    std::size_t hi = 0;
    for (int k = 0; k < kQuartersPerDay; ++k) {
        const int target = k * 15;
        if (target < series.front().minute || target > series.back().minute) {
            r.values.clear();
            r.reason = "day not fully covered";
            return r;
        }
        while (series[hi].minute < target) ++hi;
        if (series[hi].minute == target) {
            r.values.push_back(series[hi].value);
            continue;
        }
        const auto& b = series[hi];
        const auto& a = series[hi - 1];
        if (b.minute - a.minute > 30) {
            r.values.clear();
            r.reason = "gap over 30 minutes";
            return r;
        }
        const double w = double(target - a.minute) / double(b.minute - a.minute);
        r.values.push_back(a.value + w * (b.value - a.value));
    }
    r.ok = true;
    return r;
}

}  // namespace flexdes::weather
