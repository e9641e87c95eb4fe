#include "lp_brute.hpp"

#include <cmath>
#include <stdexcept>
#include <string>
#include <utility>

namespace flexdes::test {

namespace {

// Dense Gaussian elimination with partial pivoting; returns false if singular.
bool dense_solve(std::vector<std::vector<double>> a, std::vector<double> b,
                 std::vector<double>& x) {
    const int k = static_cast<int>(b.size());
    for (int col = 0; col < k; ++col) {
        int piv = col;
        for (int r = col + 1; r < k; ++r)
            if (std::abs(a[r][col]) > std::abs(a[piv][col])) piv = r;
        if (std::abs(a[piv][col]) < 1e-10) return false;
        std::swap(a[piv], a[col]);
        std::swap(b[piv], b[col]);
        for (int r = col + 1; r < k; ++r) {
            const double f = a[r][col] / a[col][col];
            if (f == 0.0) continue;
            for (int c = col; c < k; ++c) a[r][c] -= f * a[col][c];
            b[r] -= f * b[col];
        }
    }
    x.assign(k, 0.0);
    for (int r = k - 1; r >= 0; --r) {
        double s = b[r];
        for (int c = r + 1; c < k; ++c) s -= a[r][c] * x[c];
        x[r] = s / a[r][r];
    }
    return true;
}

}  // namespace

BruteResult brute_force_lp(const lp::LpProblem& p, double feas_tol) {
    const int n = p.num_vars(), m = p.num_rows();
    if (n > 10) throw std::invalid_argument("brute force oracle: too many variables");
    for (int j = 0; j < n; ++j) {
        if (!std::isfinite(p.lower(j)) || !std::isfinite(p.upper(j)))
            throw std::invalid_argument("brute force oracle: needs bounded variables");
    }

    // Dense copy of the rows.
    std::vector<std::vector<double>> A(m, std::vector<double>(n, 0.0));
    for (int i = 0; i < m; ++i) {
        const auto cols = p.row_cols(i);
        const auto vals = p.row_values(i);
        for (std::size_t t = 0; t < cols.size(); ++t) A[i][cols[t]] = vals[t];
    }

    BruteResult best;
    std::vector<double> x(n);

    auto consider = [&](const std::vector<double>& cand) {
        for (int j = 0; j < n; ++j)
            if (cand[j] < p.lower(j) - feas_tol || cand[j] > p.upper(j) + feas_tol) return;
        for (int i = 0; i < m; ++i) {
            double act = 0.0;
            for (int j = 0; j < n; ++j) act += A[i][j] * cand[j];
            const double b = p.rhs(i);
            const double tol = feas_tol * (1.0 + std::abs(b));
            switch (p.sense(i)) {
                case lp::RowSense::LessEqual:
                    if (act > b + tol) return;
                    break;
                case lp::RowSense::GreaterEqual:
                    if (act < b - tol) return;
                    break;
                case lp::RowSense::Equal:
                    if (std::abs(act - b) > tol) return;
                    break;
            }
        }
        double obj = p.objective_constant();
        for (int j = 0; j < n; ++j) obj += p.cost(j) * cand[j];
        if (!best.feasible || obj < best.objective) {
            best.feasible = true;
            best.objective = obj;
            best.x = cand;
        }
    };

    // Choose a subset R of rows held at equality and pin the remaining
    // n - |R| variables at a bound; solve for the free variables.
    std::vector<int> rows, freev;
    std::vector<int> pinned;  // variable indices pinned, aligned with `side`

    auto solve_combo = [&](const std::vector<int>& R, const std::vector<int>& pin,
                           unsigned sides) {
        const int k = static_cast<int>(R.size());
        std::vector<signed char> is_pinned(n, 0);
        std::vector<double> pinval(n, 0.0);
        for (std::size_t t = 0; t < pin.size(); ++t) {
            const int j = pin[t];
            is_pinned[j] = 1;
            pinval[j] = (sides >> t) & 1u ? p.upper(j) : p.lower(j);
        }
        std::vector<int> free_idx;
        for (int j = 0; j < n; ++j)
            if (!is_pinned[j]) free_idx.push_back(j);
        if (static_cast<int>(free_idx.size()) != k) return;

        std::vector<std::vector<double>> M(k, std::vector<double>(k));
        std::vector<double> rhs(k);
        for (int r = 0; r < k; ++r) {
            const int i = R[r];
            double s = p.rhs(i);
            for (int j = 0; j < n; ++j)
                if (is_pinned[j]) s -= A[i][j] * pinval[j];
            rhs[r] = s;
            for (int c = 0; c < k; ++c) M[r][c] = A[i][free_idx[c]];
        }
        std::vector<double> sol;
        if (k > 0 && !dense_solve(M, rhs, sol)) return;
        for (int j = 0; j < n; ++j) x[j] = pinval[j];
        for (int c = 0; c < k; ++c) x[free_idx[c]] = sol.empty() ? 0.0 : sol[c];
        consider(x);
    };

    // Enumerate subsets of rows via bitmask, then subsets of pinned vars.
    for (unsigned rmask = 0; rmask < (1u << m); ++rmask) {
        rows.clear();
        for (int i = 0; i < m; ++i)
            if (rmask & (1u << i)) rows.push_back(i);
        const int k = static_cast<int>(rows.size());
        if (k > n) continue;
        const int npin = n - k;
        // choose npin variables out of n
        std::vector<int> comb(npin);
        for (int i = 0; i < npin; ++i) comb[i] = i;
        while (true) {
            for (unsigned sides = 0; sides < (1u << npin); ++sides)
                solve_combo(rows, comb, sides);
            // next combination
            int i = npin - 1;
            while (i >= 0 && comb[i] == n - npin + i) --i;
            if (i < 0) break;
            ++comb[i];
            for (int t = i + 1; t < npin; ++t) comb[t] = comb[t - 1] + 1;
        }
    }
    return best;
}

lp::LpProblem make_random_lp(Rng& rng, int n, int m) {
    lp::LpProblem p;
    std::vector<double> x0(n);
    for (int j = 0; j < n; ++j) {
        const double lb = -rng.uniform_int(0, 5);
        const double ub = lb + 1 + rng.uniform_int(0, 8);
        x0[j] = rng.uniform(lb, ub);
        p.add_variable("x" + std::to_string(j), lb, ub, rng.uniform_int(-9, 9));
    }
    for (int i = 0; i < m; ++i) {
        double act = 0.0;
        std::vector<std::pair<int, double>> entries;
        for (int j = 0; j < n; ++j) {
            const int c = rng.uniform_int(-3, 3);
            if (c == 0) continue;
            entries.emplace_back(j, double(c));
            act += c * x0[j];
        }
        const int kind = rng.uniform_int(0, 9);
        lp::RowSense s = kind < 5   ? lp::RowSense::LessEqual
                         : kind < 8 ? lp::RowSense::GreaterEqual
                                    : lp::RowSense::Equal;
        double b = act;
        if (s == lp::RowSense::LessEqual) b += rng.uniform(0.1, 2.0);
        if (s == lp::RowSense::GreaterEqual) b -= rng.uniform(0.1, 2.0);
        const int r = p.add_row(s, b, "r" + std::to_string(i));
        for (auto& [j, v] : entries) p.add_entry(r, j, v);
    }
    p.assemble();
    return p;
}

}  // namespace flexdes::test
