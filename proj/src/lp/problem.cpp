#include "flexdes/lp/problem.hpp"

#include <algorithm>
#include <stdexcept>

namespace flexdes::lp {

int LpProblem::add_variable(std::string name, double lb, double ub, double cost) {
    if (lb > ub) throw std::invalid_argument("variable " + name + ": lower bound above upper");
    cost_.push_back(cost);
    lb_.push_back(lb);
    ub_.push_back(ub);
    var_names_.push_back(std::move(name));
    assembled_ = false;
    return num_vars() - 1;
}

int LpProblem::add_row(RowSense sense, double rhs, std::string name) {
    sense_.push_back(sense);
    rhs_.push_back(rhs);
    row_names_.push_back(std::move(name));
    assembled_ = false;
    return num_rows() - 1;
}

void LpProblem::add_entry(int row, int col, double value) {
    triplets_.push_back({row, col, value});
    assembled_ = false;
}

void LpProblem::set_costs(std::vector<double> c) {
    if (c.size() != cost_.size()) throw std::invalid_argument("cost vector size mismatch");
    cost_ = std::move(c);
}

void LpProblem::set_bounds(int col, double lb, double ub) {
    if (lb > ub) throw std::invalid_argument("bounds crossed for variable " + var_names_.at(col));
    lb_.at(col) = lb;
    ub_.at(col) = ub;
}

std::size_t LpProblem::num_entries() const {
    return assembled_ ? value_.size() : triplets_.size();
}

void LpProblem::assemble() {
    const int m = num_rows(), n = num_vars();
    for (const auto& t : triplets_) {
        if (t.row < 0 || t.row >= m || t.col < 0 || t.col >= n)
            throw std::invalid_argument("matrix entry index out of range");
    }
    std::sort(triplets_.begin(), triplets_.end(), [](const Triplet& a, const Triplet& b) {
        return a.row != b.row ? a.row < b.row : a.col < b.col;
    });
    row_start_.assign(m + 1, 0);
    col_index_.clear();
    value_.clear();
    col_index_.reserve(triplets_.size());
    value_.reserve(triplets_.size());
    std::size_t k = 0;
    for (int i = 0; i < m; ++i) {
        row_start_[i] = col_index_.size();
        while (k < triplets_.size() && triplets_[k].row == i) {
            const int c = triplets_[k].col;
            double v = 0.0;
            while (k < triplets_.size() && triplets_[k].row == i && triplets_[k].col == c) {
                v += triplets_[k].value;
                ++k;
            }
            if (v != 0.0) {
                col_index_.push_back(c);
                value_.push_back(v);
            }
        }
    }
    row_start_[m] = col_index_.size();
    // Triplets stay: rows may be appended later (epsilon bounds) and the
    // problem re-assembled.
    assembled_ = true;
}

std::span<const int> LpProblem::row_cols(int i) const {
    return {col_index_.data() + row_start_[i], row_start_[i + 1] - row_start_[i]};
}

std::span<const double> LpProblem::row_values(int i) const {
    return {value_.data() + row_start_[i], row_start_[i + 1] - row_start_[i]};
}

double LpProblem::row_activity(int i, std::span<const double> x) const {
    const auto cols = row_cols(i);
    const auto vals = row_values(i);
    double a = 0.0;
    for (std::size_t k = 0; k < cols.size(); ++k) a += vals[k] * x[cols[k]];
    return a;
}

}  // namespace flexdes::lp
