#include "basis_lu.hpp"

#include <algorithm>
#include <cmath>

namespace flexdes::lp::detail {

namespace {
constexpr double kPivotTiny = 1e-11;
}

bool BasisLu::factorize(int m, const std::vector<SparseColumn>& columns) {
    m_ = m;
    failed_positions_.clear();
    lcols_.assign(m, {});
    ucols_.assign(m, {});
    udiag_.assign(m, 0.0);
    pivot_row_.assign(m, -1);
    pinv_.assign(m, -1);
    cinv_.assign(m, -1);

    // Process sparser columns first; stable on basis position.
    colperm_.resize(m);
    for (int i = 0; i < m; ++i) colperm_[i] = i;
    std::stable_sort(colperm_.begin(), colperm_.end(), [&](int a, int b) {
        return columns[a].size() < columns[b].size();
    });

    std::vector<double> work(m, 0.0);
    std::vector<int> pattern;  // postorder of rows reachable through L
    std::vector<int> stack;
    std::vector<int> edge;
    std::vector<signed char> mark(m, 0);
    pattern.reserve(64);

    for (int k = 0; k < m; ++k) {
        const int pos = colperm_[k];
        const SparseColumn& col = columns[pos];

        // Pattern of L^{-1} col via iterative DFS through pivoted L columns.
        pattern.clear();
        for (const auto& root : col) {
            if (mark[root.index]) continue;
            stack.assign(1, root.index);
            edge.assign(1, 0);
            mark[root.index] = 1;
            while (!stack.empty()) {
                const int node = stack.back();
                const int lk = pinv_[node];
                bool descended = false;
                if (lk >= 0) {
                    const auto& lc = lcols_[lk];
                    int p = edge.back();
                    while (p < static_cast<int>(lc.size())) {
                        const int child = lc[p].index;
                        ++p;
                        if (!mark[child]) {
                            mark[child] = 1;
                            edge.back() = p;
                            stack.push_back(child);
                            edge.push_back(0);
                            descended = true;
                            break;
                        }
                    }
                    if (!descended) edge.back() = p;
                }
                if (!descended) {
                    pattern.push_back(node);
                    stack.pop_back();
                    edge.pop_back();
                }
            }
        }

        for (const auto& e : col) work[e.index] += e.value;

        // Numeric sparse triangular solve in reverse postorder.
        for (auto it = pattern.rbegin(); it != pattern.rend(); ++it) {
            const int node = *it;
            const int lk = pinv_[node];
            if (lk < 0) continue;
            const double xk = work[node];
            if (xk == 0.0) continue;
            for (const auto& le : lcols_[lk]) work[le.index] -= le.value * xk;
        }

        // Partial pivoting over not-yet-pivotal rows.
        int prow = -1;
        double pmax = 0.0;
        for (int node : pattern) {
            if (pinv_[node] >= 0) continue;
            const double a = std::abs(work[node]);
            if (a > pmax || (a == pmax && prow >= 0 && node < prow)) {
                pmax = a;
                prow = node;
            }
        }
        if (prow < 0 || pmax <= kPivotTiny) {
            // Dependent column: record it, clear the workspace, and keep
            // going so every deficiency is known after one pass.
            failed_positions_.push_back(pos);
            for (int node : pattern) {
                work[node] = 0.0;
                mark[node] = 0;
            }
            continue;
        }

        const double piv = work[prow];
        udiag_[k] = piv;
        pivot_row_[k] = prow;
        pinv_[prow] = k;
        cinv_[pos] = k;
        auto& uc = ucols_[k];
        auto& lc = lcols_[k];
        for (int node : pattern) {
            const double v = work[node];
            work[node] = 0.0;
            mark[node] = 0;
            if (node == prow || v == 0.0) continue;
            if (pinv_[node] >= 0) {
                uc.push_back({pinv_[node], v});
            } else {
                lc.push_back({node, v / piv});
            }
        }
    }

    if (!failed_positions_.empty()) return false;
    // Map L row indices to elimination indices for the transpose solves.
    for (int k = 0; k < m; ++k)
        for (auto& e : lcols_[k]) e.index = pinv_[e.index];
    return true;
}

std::vector<int> BasisLu::unpivoted_rows() const {
    std::vector<int> rows;
    for (int r = 0; r < m_; ++r)
        if (pinv_[r] < 0) rows.push_back(r);
    return rows;
}

std::size_t BasisLu::fill() const {
    std::size_t n = 0;
    for (const auto& c : lcols_) n += c.size();
    for (const auto& c : ucols_) n += c.size();
    return n + udiag_.size();
}

void BasisLu::ftran(std::vector<double>& b) const {
    std::vector<double> z(m_);
    for (int k = 0; k < m_; ++k) z[k] = b[pivot_row_[k]];
    for (int k = 0; k < m_; ++k) {
        const double zk = z[k];
        if (zk == 0.0) continue;
        for (const auto& e : lcols_[k]) z[e.index] -= e.value * zk;
    }
    for (int k = m_ - 1; k >= 0; --k) {
        const double wk = z[k] / udiag_[k];
        z[k] = wk;
        if (wk == 0.0) continue;
        for (const auto& e : ucols_[k]) z[e.index] -= e.value * wk;
    }
    for (int k = 0; k < m_; ++k) b[colperm_[k]] = z[k];
}

void BasisLu::btran(std::vector<double>& c) const {
    std::vector<double> u(m_);
    for (int k = 0; k < m_; ++k) u[k] = c[colperm_[k]];
    for (int k = 0; k < m_; ++k) {
        double s = u[k];
        for (const auto& e : ucols_[k]) s -= e.value * u[e.index];
        u[k] = s / udiag_[k];
    }
    for (int k = m_ - 1; k >= 0; --k) {
        double s = u[k];
        for (const auto& e : lcols_[k]) s -= e.value * u[e.index];
        u[k] = s;
    }
    for (int k = 0; k < m_; ++k) c[pivot_row_[k]] = u[k];
}

bool EtaFile::push(int r, const std::vector<double>& alpha, double drop_tol) {
    const double dr = alpha[r];
    if (std::abs(dr) <= kPivotTiny) return false;
    Eta e;
    e.position = r;
    e.diag = dr;
    for (int i = 0; i < static_cast<int>(alpha.size()); ++i) {
        if (i != r && std::abs(alpha[i]) > drop_tol) e.entries.push_back({i, alpha[i]});
    }
    etas_.push_back(std::move(e));
    return true;
}

void EtaFile::apply_ftran(std::vector<double>& x) const {
    for (const auto& e : etas_) {
        if (x[e.position] == 0.0) continue;
        const double xr = x[e.position] / e.diag;
        x[e.position] = xr;
        for (const auto& en : e.entries) x[en.index] -= en.value * xr;
    }
}

void EtaFile::apply_btran(std::vector<double>& x) const {
    for (auto it = etas_.rbegin(); it != etas_.rend(); ++it) {
        double s = x[it->position];
        for (const auto& en : it->entries) s -= en.value * x[en.index];
        x[it->position] = s / it->diag;
    }
}

}  // namespace flexdes::lp::detail
