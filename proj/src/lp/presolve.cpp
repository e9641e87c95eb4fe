#include "presolve.hpp"

#include <cmath>
#include <cstdlib>

namespace flexdes::lp::detail {

namespace {
bool nearly_fixed(double lb, double ub) {
    if (!std::isfinite(lb) || !std::isfinite(ub)) return false;
    return ub - lb <= 1e-12 * (1.0 + std::abs(lb));
}
}  // namespace

PresolveOutcome presolve(const LpProblem& p, double feas_tol) {
    const int m = p.num_rows(), n = p.num_vars();
    PresolveOutcome out;
    out.col_map.assign(n, -1);
    out.row_map.assign(m, -1);
    out.col_fixed.assign(n, 0);
    out.fixed_value.assign(n, 0.0);

    std::vector<double> lb(n), ub(n);
    for (int j = 0; j < n; ++j) {
        lb[j] = p.lower(j);
        ub[j] = p.upper(j);
    }
    std::vector<signed char> row_active(m, 1), col_active(n, 1);

    auto fix_col = [&](int j, double v) {
        out.col_fixed[j] = 1;
        out.fixed_value[j] = v;
        col_active[j] = 0;
    };

    for (int pass = 0; pass < 20; ++pass) {
        bool changed = false;

        for (int j = 0; j < n; ++j) {
            if (!col_active[j]) continue;
            if (lb[j] > ub[j] + 1e-9 * (1.0 + std::abs(lb[j]))) {
                out.infeasible = true;
                return out;
            }
            if (nearly_fixed(lb[j], ub[j])) {
                fix_col(j, lb[j] == ub[j] ? lb[j] : 0.5 * (lb[j] + ub[j]));
                changed = true;
            }
        }

        for (int i = 0; i < m; ++i) {
            if (!row_active[i]) continue;
            const auto cols = p.row_cols(i);
            const auto vals = p.row_values(i);
            int count = 0, last = -1;
            double coef = 0.0, fixed_part = 0.0;
            for (std::size_t k = 0; k < cols.size(); ++k) {
                const int j = cols[k];
                if (col_active[j]) {
                    ++count;
                    last = j;
                    coef = vals[k];
                    if (count > 1) break;
                } else if (out.col_fixed[j]) {
                    fixed_part += vals[k] * out.fixed_value[j];
                }
            }
            if (count > 1) continue;
            const double rhs_eff = p.rhs(i) - fixed_part;
            if (count == 0) {
                const double tol = feas_tol * (1.0 + std::abs(p.rhs(i)));
                const bool ok = (p.sense(i) == RowSense::LessEqual && rhs_eff >= -tol) ||
                                (p.sense(i) == RowSense::GreaterEqual && rhs_eff <= tol) ||
                                (p.sense(i) == RowSense::Equal && std::abs(rhs_eff) <= tol);
                if (!ok) {
                    out.infeasible = true;
                    return out;
                }
                row_active[i] = 0;
                changed = true;
                continue;
            }
            // Singleton row: becomes a bound on `last`.
            if (std::abs(coef) <= 1e-11) continue;
            const double v = rhs_eff / coef;
            const RowSense s = p.sense(i);
            const bool upper_side = (s == RowSense::LessEqual) == (coef > 0.0);
            if (s == RowSense::Equal) {
                lb[last] = std::max(lb[last], v);
                ub[last] = std::min(ub[last], v);
            } else if (upper_side) {
                ub[last] = std::min(ub[last], v);
            } else {
                lb[last] = std::max(lb[last], v);
            }
            out.stack.push_back({i, last, coef, s, v});
            row_active[i] = 0;
            changed = true;
        }

        // Columns with no active rows: settle at the cost-optimal bound.
        std::vector<signed char> seen(n, 0);
        for (int i = 0; i < m; ++i) {
            if (!row_active[i]) continue;
            for (int j : p.row_cols(i))
                if (col_active[j]) seen[j] = 1;
        }
        for (int j = 0; j < n; ++j) {
            if (!col_active[j] || seen[j]) continue;
            if (lb[j] > ub[j] + 1e-9 * (1.0 + std::abs(lb[j]))) {
                out.infeasible = true;
                return out;
            }
            const double c = p.cost(j);
            double v = 0.0;
            if (c > 0.0 || (c == 0.0 && std::isfinite(lb[j]))) {
                v = lb[j];
                if (!std::isfinite(v)) {
                    if (c == 0.0) {
                        v = std::isfinite(ub[j]) ? ub[j] : 0.0;
                    } else {
                        out.unbounded = true;
                        out.unbounded_ray.assign(n, 0.0);
                        out.unbounded_ray[j] = -1.0;
                        return out;
                    }
                }
            } else if (c < 0.0) {
                v = ub[j];
                if (!std::isfinite(v)) {
                    out.unbounded = true;
                    out.unbounded_ray.assign(n, 0.0);
                    out.unbounded_ray[j] = 1.0;
                    return out;
                }
            } else {
                v = std::isfinite(ub[j]) ? ub[j] : 0.0;
            }
            fix_col(j, v);
            changed = true;
        }

        if (!changed) break;
    }

    // Assemble the reduced problem.
    for (int j = 0; j < n; ++j) {
        if (!col_active[j]) continue;
        out.col_map[j] = out.reduced.add_variable(p.var_name(j), lb[j], ub[j], p.cost(j));
    }
    for (int i = 0; i < m; ++i) {
        if (!row_active[i]) continue;
        double fixed_part = 0.0;
        const auto cols = p.row_cols(i);
        const auto vals = p.row_values(i);
        for (std::size_t k = 0; k < cols.size(); ++k) {
            if (out.col_fixed[cols[k]]) fixed_part += vals[k] * out.fixed_value[cols[k]];
        }
        out.row_map[i] = out.reduced.add_row(p.sense(i), p.rhs(i) - fixed_part, p.row_name(i));
        for (std::size_t k = 0; k < cols.size(); ++k) {
            if (out.col_map[cols[k]] >= 0)
                out.reduced.add_entry(out.row_map[i], out.col_map[cols[k]], vals[k]);
        }
    }
    out.reduced.set_objective_constant(0.0);
    out.reduced.assemble();
    return out;
}

}  // namespace flexdes::lp::detail
