#pragma once

#include <vector>

#include "flexdes/lp/problem.hpp"

// Light presolve: fixed-variable elimination, empty rows/columns, and
// singleton rows converted to variable bounds. Keeps a stack of removed
// singleton rows so the postsolve can reconstruct their duals.

namespace flexdes::lp::detail {

struct SingletonRecord {
    int row = 0;
    int col = 0;
    double coef = 0.0;
    RowSense sense = RowSense::LessEqual;
    double implied_value = 0.0;  // rhs_eff / coef
};

struct PresolveOutcome {
    bool infeasible = false;
    bool unbounded = false;
    std::vector<double> unbounded_ray;  // original column space

    LpProblem reduced;
    std::vector<int> col_map;  // orig col -> reduced col or -1
    std::vector<int> row_map;  // orig row -> reduced row or -1
    std::vector<signed char> col_fixed;
    std::vector<double> fixed_value;
    std::vector<SingletonRecord> stack;  // in removal order
};

PresolveOutcome presolve(const LpProblem& p, double feas_tol);

}  // namespace flexdes::lp::detail
