#include "flexdes/lp/writer.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <ostream>
#include <sstream>
#include <stdexcept>

namespace flexdes::lp {

namespace {

std::string num(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

void write_terms(std::ostream& out, const LpProblem& p, int row) {
    const auto cols = p.row_cols(row);
    const auto vals = p.row_values(row);
    bool first = true;
    for (std::size_t k = 0; k < cols.size(); ++k) {
        const double v = vals[k];
        if (first) {
            out << ' ' << num(v) << ' ' << p.var_name(cols[k]);
            first = false;
        } else {
            out << (v >= 0.0 ? " + " : " - ") << num(std::abs(v)) << ' '
                << p.var_name(cols[k]);
        }
    }
    if (first) out << " 0 " << p.var_name(0);
}

}  // namespace

void write_lp_format(const LpProblem& p, std::ostream& out, const std::string& name) {
    if (!p.assembled()) throw std::invalid_argument("lp writer: problem must be assembled");
    out << "\\ Problem: " << name << "\n";
    out << "Minimize\n obj:";
    bool first = true;
    for (int j = 0; j < p.num_vars(); ++j) {
        const double c = p.cost(j);
        if (c == 0.0) continue;
        if (first) {
            out << ' ' << num(c) << ' ' << p.var_name(j);
            first = false;
        } else {
            out << (c >= 0.0 ? " + " : " - ") << num(std::abs(c)) << ' ' << p.var_name(j);
        }
    }
    if (first) out << " 0 " << (p.num_vars() > 0 ? p.var_name(0) : "x0");
    out << "\nSubject To\n";
    for (int i = 0; i < p.num_rows(); ++i) {
        out << ' ' << p.row_name(i) << ':';
        write_terms(out, p, i);
        switch (p.sense(i)) {
            case RowSense::LessEqual: out << " <= "; break;
            case RowSense::GreaterEqual: out << " >= "; break;
            case RowSense::Equal: out << " = "; break;
        }
        out << num(p.rhs(i)) << "\n";
    }
    out << "Bounds\n";
    for (int j = 0; j < p.num_vars(); ++j) {
        const double lb = p.lower(j), ub = p.upper(j);
        const bool lf = std::isfinite(lb), uf = std::isfinite(ub);
        out << ' ';
        if (lf && uf && lb == ub) {
            out << p.var_name(j) << " = " << num(lb);
        } else if (lf && uf) {
            out << num(lb) << " <= " << p.var_name(j) << " <= " << num(ub);
        } else if (lf) {
            out << p.var_name(j) << " >= " << num(lb);
        } else if (uf) {
            out << p.var_name(j) << " <= " << num(ub);
        } else {
            out << p.var_name(j) << " free";
        }
        out << "\n";
    }
    out << "End\n";
}

void write_lp_file(const LpProblem& p, const std::string& path, const std::string& name) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open for writing: " + path);
    write_lp_format(p, out, name);
}

unsigned long long lp_fingerprint(const LpProblem& p) {
    std::ostringstream ss;
    write_lp_format(p, ss, "fingerprint");
    const std::string s = ss.str();
    unsigned long long h = 1469598103934665603ULL;
    for (unsigned char c : s) {
        h ^= c;
        h *= 1099511628211ULL;
    }
    return h;
}

}  // namespace flexdes::lp
