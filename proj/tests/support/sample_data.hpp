#pragma once

#include <cstdint>
#include <string>

namespace flexdes::test {

struct SampleDataSpec {
    int days = 10;           // <= 28 (timestamps stay within one month)
    std::uint64_t seed = 2024;
    std::string start_date = "2022-03-";  // day-of-month appended
};

/// Writes the five input CSVs (DA price hourly; ID price and grid factor
/// quarter-hourly; wind speed and tilted irradiance at 10 minutes) plus a
/// run configuration pointing at them. Returns the config path.
std::string write_sample_inputs(const std::string& dir, const SampleDataSpec& spec);

}  // namespace flexdes::test
