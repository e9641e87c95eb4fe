#pragma once

#include <string>
#include <utility>
#include <vector>

#include "flexdes/domain.hpp"

// Conversion of raw weather measurements to relative PV and wind power
// output profiles. All functions are pure.

namespace flexdes::weather {

/// Piecewise-linear turbine performance curve over normalized wind speed.
/// Beyond the largest knot the last value is held (no cut-out modeled).
class PerformanceCurve {
public:
    PerformanceCurve() = default;
    /// Throws std::invalid_argument on non-increasing abscissae, values
    /// outside [0,1], or a curve that does not start at (0, 0).
    explicit PerformanceCurve(std::vector<std::pair<double, double>> points);

    double evaluate(double normalized_speed) const;
    const std::vector<std::pair<double, double>>& points() const { return points_; }

    /// Two-column text file (v_rel q_rel), one header line.
    static PerformanceCurve load(const std::string& path);
    /// Generic turbine curve shipped with the tool (50-point stand-in for
    /// the unpublished reference curve; see docs).
    static PerformanceCurve generic();

private:
    std::vector<std::pair<double, double>> points_;
};

struct WindSiteSpec {
    double hub_height_m = 80.0;
    double measure_height_m = 10.0;
    double roughness_m = 0.1;
    double reference_speed_ms = 11.8;
};

struct PvSpec {
    double efficiency = 0.19;
    double nominal_capacity_kw_m2 = 0.1;
};

/// Log-law extrapolation of the measured wind speed to hub height.
/// Throws std::invalid_argument for sites with measure height <= roughness.
double hub_wind_speed(double v_measure_ms, const WindSiteSpec& site);

/// Relative wind power output in [0,1] via the performance curve.
double wind_relative_output(double v_measure_ms, const WindSiteSpec& site,
                            const PerformanceCurve& curve);

/// Relative PV output min(eta*I/cap_nom, 1); irradiance in kW/m^2.
double pv_relative_output(double irradiance_kw_m2, const PvSpec& pv);

/// A timestamped sample within one day, minute in [0, 1440).
struct MinuteSample {
    int minute = 0;
    double value = 0.0;
};

struct ResampleResult {
    bool ok = false;
    std::string reason;           // set when rejected
    std::vector<double> values;   // 96 quarter-hour values when ok
};

/// Linear interpolation of a 10-minute series onto the 96 quarter-hour
/// marks. Days with sampling gaps over 30 minutes around a target mark
/// (or marks outside the sampled range) are rejected with a reason.
ResampleResult resample_10min_to_quarter(const std::vector<MinuteSample>& series);

}  // namespace flexdes::weather
