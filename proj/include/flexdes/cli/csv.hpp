#pragma once

#include <map>
#include <set>
#include <string>
#include <vector>

namespace flexdes::cli {

/// One parsed sample: calendar day plus minute-of-day.
struct CsvSample {
    std::string day_id;  // YYYY-MM-DD
    int minute = 0;
    double value = 0.0;
};

struct CsvSeries {
    std::map<std::string, std::vector<CsvSample>> by_day;  // sorted by minute
    std::vector<std::string> warnings;                     // malformed lines
    std::set<std::string> poisoned;  // days containing malformed rows
};

/// Reads a two-column `timestamp,value` CSV (ISO-8601 timestamps, '#'
/// comment lines). Malformed rows are skipped with a warning; the caller
/// drops incomplete days later. Throws ConfigError when the file cannot
/// be opened.
CsvSeries read_series_csv(const std::string& path);

/// Minimal CSV writer: header plus rows, atomically replaced.
void write_csv(const std::string& path, const std::string& header,
               const std::vector<std::vector<double>>& rows,
               const std::vector<std::string>& row_labels = {});

}  // namespace flexdes::cli
