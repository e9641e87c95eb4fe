#include <algorithm>
#include <cmath>
#include <vector>

#include "flexdes/lp/solve.hpp"

namespace flexdes::lp {

ResidualReport check_solution(const LpProblem& p, const LpSolution& sol) {
    ResidualReport rep;
    const int n = p.num_vars(), m = p.num_rows();
    const std::vector<double>& x = sol.x;
    const std::vector<double>& y = sol.y;

    for (int i = 0; i < m; ++i) {
        const double act = p.row_activity(i, x);
        const double b = p.rhs(i);
        double viol = 0.0;
        switch (p.sense(i)) {
            case RowSense::LessEqual: viol = act - b; break;
            case RowSense::GreaterEqual: viol = b - act; break;
            case RowSense::Equal: viol = std::abs(act - b); break;
        }
        rep.max_primal_residual = std::max(rep.max_primal_residual, viol);
        // Dual sign and complementary slackness of the row.
        double sign_viol = 0.0, comp = 0.0;
        if (p.sense(i) == RowSense::LessEqual) {
            sign_viol = std::max(0.0, y[i]);
            comp = std::abs(y[i] * (b - act));
        } else if (p.sense(i) == RowSense::GreaterEqual) {
            sign_viol = std::max(0.0, -y[i]);
            comp = std::abs(y[i] * (act - b));
        }
        rep.max_dual_residual = std::max(rep.max_dual_residual, sign_viol);
        rep.complementarity = std::max(rep.complementarity, comp);
    }

    // Reduced costs recomputed from the duals.
    std::vector<double> d(p.costs());
    for (int i = 0; i < m; ++i) {
        if (y[i] == 0.0) continue;
        const auto cols = p.row_cols(i);
        const auto vals = p.row_values(i);
        for (std::size_t k = 0; k < cols.size(); ++k) d[cols[k]] -= y[i] * vals[k];
    }

    double dual_obj = p.objective_constant();
    for (int i = 0; i < m; ++i) dual_obj += y[i] * p.rhs(i);
    double primal_obj = p.objective_constant();

    for (int j = 0; j < n; ++j) {
        primal_obj += p.cost(j) * x[j];
        const double lb = p.lower(j), ub = p.upper(j);
        rep.max_primal_residual =
            std::max({rep.max_primal_residual, lb - x[j], x[j] - ub});
        if (d[j] > 0.0) {
            if (std::isfinite(lb)) {
                dual_obj += d[j] * lb;
                rep.complementarity = std::max(rep.complementarity, d[j] * (x[j] - lb));
            } else {
                rep.max_dual_residual = std::max(rep.max_dual_residual, d[j]);
            }
        } else if (d[j] < 0.0) {
            if (std::isfinite(ub)) {
                dual_obj += d[j] * ub;
                rep.complementarity = std::max(rep.complementarity, -d[j] * (ub - x[j]));
            } else {
                rep.max_dual_residual = std::max(rep.max_dual_residual, -d[j]);
            }
        }
    }
    rep.duality_gap = std::abs(primal_obj - dual_obj);
    return rep;
}

double infeasibility_certificate_value(const LpProblem& p, const std::vector<double>& ray) {
    const int n = p.num_vars(), m = p.num_rows();
    // Sign conditions: <= rows need y <= 0, >= rows y >= 0.
    for (int i = 0; i < m; ++i) {
        if (p.sense(i) == RowSense::LessEqual && ray[i] > 1e-9) return -kInf;
        if (p.sense(i) == RowSense::GreaterEqual && ray[i] < -1e-9) return -kInf;
    }
    double value = 0.0;
    for (int i = 0; i < m; ++i) value += ray[i] * p.rhs(i);
    // Subtract sup_x y'Ax over the bound box.
    std::vector<double> coef(n, 0.0);
    for (int i = 0; i < m; ++i) {
        if (ray[i] == 0.0) continue;
        const auto cols = p.row_cols(i);
        const auto vals = p.row_values(i);
        for (std::size_t k = 0; k < cols.size(); ++k) coef[cols[k]] += ray[i] * vals[k];
    }
    double scale = 1.0;
    for (int i = 0; i < m; ++i) scale = std::max(scale, std::abs(ray[i]));
    for (int j = 0; j < n; ++j) {
        double c = coef[j];
        if (std::abs(c) <= 1e-9 * scale) continue;
        const double bound = c > 0.0 ? p.upper(j) : p.lower(j);
        if (!std::isfinite(bound)) return -kInf;  // sup is infinite; not a certificate
        value -= c * bound;
    }
    return value;
}

double unbounded_certificate_value(const LpProblem& p, const std::vector<double>& ray) {
    const int n = p.num_vars(), m = p.num_rows();
    double norm = 0.0;
    for (double v : ray) norm = std::max(norm, std::abs(v));
    if (norm == 0.0) return kInf;
    const double tol = 1e-9 * norm;
    for (int j = 0; j < n; ++j) {
        if (ray[j] > tol && std::isfinite(p.upper(j))) return kInf;
        if (ray[j] < -tol && std::isfinite(p.lower(j))) return kInf;
    }
    for (int i = 0; i < m; ++i) {
        const double a = p.row_activity(i, ray);
        switch (p.sense(i)) {
            case RowSense::LessEqual:
                if (a > tol) return kInf;
                break;
            case RowSense::GreaterEqual:
                if (a < -tol) return kInf;
                break;
            case RowSense::Equal:
                if (std::abs(a) > tol) return kInf;
                break;
        }
    }
    double cr = 0.0;
    for (int j = 0; j < n; ++j) cr += p.cost(j) * ray[j];
    return cr;
}

}  // namespace flexdes::lp
