#include "flexdes/cli/csv.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>

#include "flexdes/cli/config.hpp"

namespace flexdes::cli {

namespace {

// Accepts YYYY-MM-DDThh:mm[:ss][Z]; returns false on malformed input.
bool parse_timestamp(const std::string& s, std::string& day, int& minute) {
    int y = 0, mo = 0, d = 0, h = 0, mi = 0, sec = 0;
    const int n = std::sscanf(s.c_str(), "%4d-%2d-%2dT%2d:%2d:%2d", &y, &mo, &d, &h, &mi, &sec);
    if (n < 5) return false;
    if (mo < 1 || mo > 12 || d < 1 || d > 31 || h < 0 || h > 23 || mi < 0 || mi > 59)
        return false;
    day = s.substr(0, 10);
    minute = h * 60 + mi;
    return true;
}

}  // namespace

CsvSeries read_series_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open input file: " + path);
    CsvSeries series;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty() || line[0] == '#') continue;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        const auto comma = line.find(',');
        bool ok = comma != std::string::npos;
        std::string day;
        int minute = 0;
        double value = 0.0;
        if (ok) ok = parse_timestamp(line.substr(0, comma), day, minute);
        if (ok) {
            const std::string vs = line.substr(comma + 1);
            char* end = nullptr;
            value = std::strtod(vs.c_str(), &end);
            ok = end != vs.c_str() && std::isfinite(value);
            // header row like "timestamp,value" lands here as malformed
            if (ok && lineno == 1 && vs == "value") ok = false;
        }
        if (!ok) {
            if (line.rfind("timestamp", 0) == 0) continue;  // header
            series.warnings.push_back(path + ":" + std::to_string(lineno) +
                                      ": skipped malformed row");
            // A malformed row invalidates its day when the date is readable.
            int y = 0, mo = 0, dd = 0;
            if (std::sscanf(line.c_str(), "%4d-%2d-%2d", &y, &mo, &dd) == 3 && mo >= 1 &&
                mo <= 12 && dd >= 1 && dd <= 31) {
                series.poisoned.insert(line.substr(0, 10));
            }
            continue;
        }
        series.by_day[day].push_back({day, minute, value});
    }
    for (auto& [day, samples] : series.by_day) {
        std::sort(samples.begin(), samples.end(),
                  [](const CsvSample& a, const CsvSample& b) { return a.minute < b.minute; });
    }
    return series;
}

void write_csv(const std::string& path, const std::string& header,
               const std::vector<std::vector<double>>& rows,
               const std::vector<std::string>& row_labels) {
    const std::string tmp = path + ".tmp";
    {
        std::ofstream out(tmp);
        if (!out) throw ConfigError("cannot open for writing: " + tmp);
        out << header << "\n";
        char buf[40];
        for (std::size_t i = 0; i < rows.size(); ++i) {
            if (!row_labels.empty()) out << row_labels[i];
            for (std::size_t k = 0; k < rows[i].size(); ++k) {
                if (k > 0 || !row_labels.empty()) out << ',';
                std::snprintf(buf, sizeof(buf), "%.12g", rows[i][k]);
                out << buf;
            }
            out << "\n";
        }
    }
    std::rename(tmp.c_str(), path.c_str());
}

}  // namespace flexdes::cli
