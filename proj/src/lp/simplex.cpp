#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <vector>

#include "basis_lu.hpp"
#include "flexdes/lp/solve.hpp"
#include "presolve.hpp"

// Bounded-variable revised primal simplex. Phase 1 minimizes the sum of
// artificial variables covering the rows violated by the all-slack basis;
// phase 2 prices with Devex weights over a candidate list, maintains
// reduced costs through pivotal-row updates, and refreshes all quantities
// at every refactorization. Bland's rule takes over after a run of
// stalled degenerate iterations.

namespace flexdes::lp {

const char* status_name(SolveStatus s) {
    switch (s) {
        case SolveStatus::Optimal: return "Optimal";
        case SolveStatus::Infeasible: return "Infeasible";
        case SolveStatus::Unbounded: return "Unbounded";
        case SolveStatus::IterationLimit: return "IterationLimit";
    }
    return "?";
}

namespace detail {
namespace {

enum class VarState : signed char { Basic, AtLower, AtUpper, FreeZero };

constexpr double kRatioPivotTol = 1e-11;
constexpr double kStablePivotTol = 1e-7;
constexpr double kAlphaDropTol = 1e-12;
constexpr double kVrowDropTol = 1e-13;
constexpr int kCandidateCap = 64;

struct RatioResult {
    enum class Kind { Flip, Pivot, Unbounded } kind = Kind::Unbounded;
    int position = -1;
    double step = 0.0;
};

class Simplex {
public:
    Simplex(const LpProblem& p, const SolveOptions& opts) : prob_(p), opts_(opts) { build(); }

    LpSolution run();

private:
    const LpProblem& prob_;
    SolveOptions opts_;

    int n_ = 0, m_ = 0, nart_ = 0;
    // Scaled matrix, both orientations.
    std::vector<std::size_t> cptr_;
    std::vector<int> cidx_;
    std::vector<double> cval_;
    std::vector<std::size_t> rptr_;
    std::vector<int> rcol_;
    std::vector<double> rval_;

    std::vector<double> lb_, ub_, cost_;
    std::vector<double> rhs_;
    std::vector<int> art_row_;
    std::vector<double> art_sign_;
    std::vector<double> rscale_, cscale_;
    double cost_scale_ = 1.0;

    std::vector<VarState> state_;
    std::vector<double> xval_;
    std::vector<int> basic_;
    std::vector<int> basis_pos_;
    BasisLu lu_;
    EtaFile etas_;
    std::vector<double> d_;
    std::vector<double> devex_;
    std::vector<int> candidates_;
    bool phase1_ = false;
    bool bland_ = false;
    bool lu_valid_ = false;
    bool want_restart_ = false;
    double tol_mult_ = 1.0;  // endgame pricing tightener
    int stall_ = 0;
    long iters_ = 0;
    long max_iters_ = 0;
    double zval_ = 0.0;

    int unbounded_q_ = -1;
    int unbounded_dir_ = 1;
    std::vector<double> unbounded_alpha_;

    int total_cols() const { return n_ + m_ + nart_; }
    bool is_fixed(int j) const { return lb_[j] == ub_[j]; }
    double phase_cost(int j) const {
        if (j >= n_ + m_) return phase1_ ? 1.0 : 0.0;
        return phase1_ ? 0.0 : cost_[j];
    }

    template <class F>
    void for_entries(int j, F&& f) const {
        if (j < n_) {
            for (std::size_t k = cptr_[j]; k < cptr_[j + 1]; ++k) f(cidx_[k], cval_[k]);
        } else if (j < n_ + m_) {
            f(j - n_, 1.0);
        } else {
            f(art_row_[j - n_ - m_], art_sign_[j - n_ - m_]);
        }
    }

    void build();
    void scale_problem(std::vector<double>& vals_rowmajor);
    void set_initial_point();
    bool factorize(bool recompute);
    void compute_basic_values();
    void refresh_reduced_costs();
    double recompute_objective() const;
    void full_ftran(std::vector<double>& v) const;
    void full_btran(std::vector<double>& v) const;
    bool eligible(int j) const;
    int price_full();
    int price_quick();
    RatioResult ratio_test(int q, int dir, const std::vector<double>& alpha) const;
    bool feasible_within(double tol) const;
    // Pins violated basic slacks at their bound and puts an artificial in
    // their place. Returns the number created; uncoverable (structural)
    // violations set the flag.
    int cover_violations(bool& uncoverable);
    SolveStatus iterate();
    LpSolution run_once();
    LpSolution finish(SolveStatus st);
    LpSolution make_unbounded();
    LpSolution make_infeasible();
};

void Simplex::build() {
    if (!prob_.assembled()) throw std::invalid_argument("lp: problem must be assembled first");
    n_ = prob_.num_vars();
    m_ = prob_.num_rows();

    std::vector<double> vals;
    vals.reserve(prob_.num_entries());
    for (int i = 0; i < m_; ++i) {
        const auto rv = prob_.row_values(i);
        vals.insert(vals.end(), rv.begin(), rv.end());
    }
    rscale_.assign(m_, 1.0);
    cscale_.assign(n_, 1.0);
    if (opts_.scale) scale_problem(vals);

    // Scaled CSR.
    rptr_.assign(m_ + 1, 0);
    rcol_.resize(vals.size());
    rval_ = vals;
    {
        std::size_t k = 0;
        for (int i = 0; i < m_; ++i) {
            rptr_[i] = k;
            const auto cols = prob_.row_cols(i);
            for (std::size_t t = 0; t < cols.size(); ++t, ++k) rcol_[k] = cols[t];
        }
        rptr_[m_] = k;
    }
    // Scaled CSC.
    cptr_.assign(n_ + 1, 0);
    {
        std::vector<int> count(n_, 0);
        for (int c : rcol_) ++count[c];
        for (int j = 0; j < n_; ++j) cptr_[j + 1] = cptr_[j] + count[j];
        cidx_.resize(rcol_.size());
        cval_.resize(rcol_.size());
        std::vector<std::size_t> fill(cptr_.begin(), cptr_.end() - 1);
        for (int i = 0; i < m_; ++i) {
            for (std::size_t k = rptr_[i]; k < rptr_[i + 1]; ++k) {
                const int j = rcol_[k];
                cidx_[fill[j]] = i;
                cval_[fill[j]] = rval_[k];
                ++fill[j];
            }
        }
    }

    lb_.resize(n_ + m_);
    ub_.resize(n_ + m_);
    cost_.assign(n_ + m_, 0.0);
    rhs_.resize(m_);
    for (int j = 0; j < n_; ++j) {
        lb_[j] = prob_.lower(j) / cscale_[j];
        ub_[j] = prob_.upper(j) / cscale_[j];
        cost_[j] = prob_.cost(j) * cscale_[j];
    }
    double cmax = 0.0;
    for (int j = 0; j < n_; ++j) cmax = std::max(cmax, std::abs(cost_[j]));
    cost_scale_ = cmax > 0.0 ? cmax : 1.0;
    for (int j = 0; j < n_; ++j) cost_[j] /= cost_scale_;
    for (int i = 0; i < m_; ++i) {
        rhs_[i] = prob_.rhs(i) * rscale_[i];
        const int s = n_ + i;
        switch (prob_.sense(i)) {
            case RowSense::LessEqual:
                lb_[s] = 0.0;
                ub_[s] = kInf;
                break;
            case RowSense::GreaterEqual:
                lb_[s] = -kInf;
                ub_[s] = 0.0;
                break;
            case RowSense::Equal:
                lb_[s] = 0.0;
                ub_[s] = 0.0;
                break;
        }
    }

    max_iters_ = opts_.max_iterations > 0 ? opts_.max_iterations
                                          : std::max<long>(100000, 30L * (n_ + m_));
}

void Simplex::scale_problem(std::vector<double>& vals) {
    // Per-sweep factors are clamped so pathological columns (profiles with
    // near-zero entries) cannot blow up the unscaling of costs and duals.
    const auto clamp_factor = [](double f) { return std::clamp(f, 1e-2, 1e2); };
    for (int sweep = 0; sweep < 2; ++sweep) {
        std::size_t k = 0;
        for (int i = 0; i < m_; ++i) {
            double lo = kInf, hi = 0.0;
            const std::size_t len = prob_.row_cols(i).size();
            for (std::size_t t = 0; t < len; ++t) {
                const double a = std::abs(vals[k + t]);
                if (a > 0.0) {
                    lo = std::min(lo, a);
                    hi = std::max(hi, a);
                }
            }
            if (hi > 0.0) {
                const double f = clamp_factor(1.0 / std::sqrt(lo * hi));
                rscale_[i] *= f;
                for (std::size_t t = 0; t < len; ++t) vals[k + t] *= f;
            }
            k += len;
        }
        std::vector<double> clo(n_, kInf), chi(n_, 0.0);
        k = 0;
        for (int i = 0; i < m_; ++i) {
            const auto cols = prob_.row_cols(i);
            for (std::size_t t = 0; t < cols.size(); ++t, ++k) {
                const double a = std::abs(vals[k]);
                if (a > 0.0) {
                    clo[cols[t]] = std::min(clo[cols[t]], a);
                    chi[cols[t]] = std::max(chi[cols[t]], a);
                }
            }
        }
        std::vector<double> cf(n_, 1.0);
        for (int j = 0; j < n_; ++j) {
            if (chi[j] > 0.0) {
                cf[j] = clamp_factor(1.0 / std::sqrt(clo[j] * chi[j]));
                cscale_[j] *= cf[j];
            }
        }
        k = 0;
        for (int i = 0; i < m_; ++i) {
            const auto cols = prob_.row_cols(i);
            for (std::size_t t = 0; t < cols.size(); ++t, ++k) vals[k] *= cf[cols[t]];
        }
    }
}

void Simplex::set_initial_point() {
    const int total = n_ + m_;
    state_.assign(total, VarState::AtLower);
    xval_.assign(total, 0.0);
    basic_.resize(m_);
    basis_pos_.assign(total, -1);
    for (int j = 0; j < n_; ++j) {
        if (std::isfinite(lb_[j])) {
            state_[j] = VarState::AtLower;
            xval_[j] = lb_[j];
        } else if (std::isfinite(ub_[j])) {
            state_[j] = VarState::AtUpper;
            xval_[j] = ub_[j];
        } else {
            state_[j] = VarState::FreeZero;
            xval_[j] = 0.0;
        }
    }
    for (int i = 0; i < m_; ++i) {
        const int s = n_ + i;
        basic_[i] = s;
        basis_pos_[s] = i;
        state_[s] = VarState::Basic;
    }
    for (const auto& [row, col] : opts_.basis_hint) {
        if (row < 0 || row >= m_ || col < 0 || col >= n_) continue;
        if (basis_pos_[col] >= 0 || basic_[row] != n_ + row) continue;
        const int s = n_ + row;
        basic_[row] = col;
        basis_pos_[col] = row;
        state_[col] = VarState::Basic;
        basis_pos_[s] = -1;
        switch (prob_.sense(row)) {
            case RowSense::GreaterEqual: state_[s] = VarState::AtUpper; break;
            default: state_[s] = VarState::AtLower; break;
        }
        xval_[s] = 0.0;
    }
    nart_ = 0;
    art_row_.clear();
    art_sign_.clear();
    lb_.resize(n_ + m_);
    ub_.resize(n_ + m_);
    etas_.clear();
    bland_ = false;
    stall_ = 0;
    candidates_.clear();
}

void Simplex::full_ftran(std::vector<double>& v) const {
    lu_.ftran(v);
    etas_.apply_ftran(v);
}

void Simplex::full_btran(std::vector<double>& v) const {
    etas_.apply_btran(v);
    lu_.btran(v);
}

bool Simplex::factorize(bool recompute) {
    std::vector<SparseColumn> cols(m_);
    for (int i = 0; i < m_; ++i) {
        cols[i].clear();
        for_entries(basic_[i], [&](int r, double v) { cols[i].push_back({r, v}); });
    }
    lu_valid_ = false;
    for (int round = 0; round < 20 && !lu_valid_; ++round) {
        if (lu_.factorize(m_, cols)) {
            lu_valid_ = true;
            break;
        }
        // Numerically dependent basis: drop every failed column and cover
        // the unpivoted rows with their slacks in one sweep.
        const std::vector<int> bad = lu_.failed_positions();
        std::vector<int> rows = lu_.unpivoted_rows();
        std::size_t next_row = 0;
        auto kick = [&](int position) {
            const int out = basic_[position];
            basis_pos_[out] = -1;
            if (std::isfinite(lb_[out])) {
                state_[out] = VarState::AtLower;
                xval_[out] = lb_[out];
            } else if (std::isfinite(ub_[out])) {
                state_[out] = VarState::AtUpper;
                xval_[out] = ub_[out];
            } else {
                state_[out] = VarState::FreeZero;
                xval_[out] = 0.0;
            }
        };
        bool progress = false;
        for (int position : bad) {
            while (next_row < rows.size() && basis_pos_[n_ + rows[next_row]] >= 0) ++next_row;
            if (next_row >= rows.size()) break;
            const int row = rows[next_row++];
            kick(position);
            const int s = n_ + row;
            basic_[position] = s;
            basis_pos_[s] = position;
            state_[s] = VarState::Basic;
            cols[position].clear();
            cols[position].push_back({row, 1.0});
            progress = true;
        }
        if (!progress) {
            // Uncovered rows whose slacks are basic elsewhere: fall back to
            // the identity basis, which always factorizes.
            for (int i = 0; i < m_; ++i) {
                if (basic_[i] != n_ + i) kick(i);
            }
            for (int i = 0; i < m_; ++i) {
                const int s = n_ + i;
                basic_[i] = s;
                basis_pos_[s] = i;
                state_[s] = VarState::Basic;
                cols[i].clear();
                cols[i].push_back({i, 1.0});
            }
        }
    }
    if (!lu_valid_) return false;
    etas_.clear();
    if (recompute) {
        compute_basic_values();
        refresh_reduced_costs();
        zval_ = recompute_objective();
        candidates_.clear();
    }
    return true;
}

void Simplex::compute_basic_values() {
    std::vector<double> r = rhs_;
    const int total = total_cols();
    for (int j = 0; j < total; ++j) {
        if (basis_pos_[j] >= 0 || xval_[j] == 0.0) continue;
        const double xj = xval_[j];
        for_entries(j, [&](int row, double v) { r[row] -= v * xj; });
    }
    full_ftran(r);
    for (int i = 0; i < m_; ++i) xval_[basic_[i]] = r[i];
}

void Simplex::refresh_reduced_costs() {
    std::vector<double> y(m_);
    for (int i = 0; i < m_; ++i) y[i] = phase_cost(basic_[i]);
    full_btran(y);
    const int total = total_cols();
    d_.assign(total, 0.0);
    for (int j = 0; j < total; ++j) {
        if (basis_pos_[j] >= 0) continue;
        double dj = phase_cost(j);
        for_entries(j, [&](int row, double v) { dj -= y[row] * v; });
        d_[j] = dj;
    }
}

double Simplex::recompute_objective() const {
    double z = 0.0;
    for (int j = 0; j < total_cols(); ++j) z += phase_cost(j) * xval_[j];
    return z;
}

bool Simplex::eligible(int j) const {
    if (basis_pos_[j] >= 0 || is_fixed(j)) return false;
    const double dj = d_[j];
    const double tol = opts_.opt_tol * tol_mult_;
    switch (state_[j]) {
        case VarState::AtLower: return dj < -tol;
        case VarState::AtUpper: return dj > tol;
        case VarState::FreeZero: return std::abs(dj) > tol;
        case VarState::Basic: return false;
    }
    return false;
}

int Simplex::price_full() {
    const int total = total_cols();
    candidates_.clear();
    if (bland_) {
        for (int j = 0; j < total; ++j)
            if (eligible(j)) return j;
        return -1;
    }
    // Keep the best kCandidateCap candidates by Devex score.
    int best = -1;
    double best_score = 0.0;
    std::vector<std::pair<double, int>> top;
    top.reserve(kCandidateCap + 1);
    for (int j = 0; j < total; ++j) {
        if (!eligible(j)) continue;
        const double score =
            opts_.devex ? d_[j] * d_[j] / devex_[j] : std::abs(d_[j]);
        if (score > best_score) {
            best_score = score;
            best = j;
        }
        if (static_cast<int>(top.size()) < kCandidateCap) {
            top.emplace_back(score, j);
            if (static_cast<int>(top.size()) == kCandidateCap)
                std::make_heap(top.begin(), top.end(), std::greater<>());
        } else if (score > top.front().first) {
            std::pop_heap(top.begin(), top.end(), std::greater<>());
            top.back() = {score, j};
            std::push_heap(top.begin(), top.end(), std::greater<>());
        }
    }
    candidates_.clear();
    for (const auto& [s, j] : top) candidates_.push_back(j);
    std::sort(candidates_.begin(), candidates_.end());
    return best;
}

int Simplex::price_quick() {
    if (bland_ || candidates_.empty()) return price_full();
    int best = -1;
    double best_score = 0.0;
    std::size_t keep = 0;
    for (std::size_t k = 0; k < candidates_.size(); ++k) {
        const int j = candidates_[k];
        if (!eligible(j)) continue;
        candidates_[keep++] = j;
        const double score =
            opts_.devex ? d_[j] * d_[j] / devex_[j] : std::abs(d_[j]);
        if (score > best_score) {
            best_score = score;
            best = j;
        }
    }
    candidates_.resize(keep);
    if (best < 0) return price_full();
    return best;
}

RatioResult Simplex::ratio_test(int q, int dir, const std::vector<double>& alpha) const {
    RatioResult res;
    double own = kInf;
    if (std::isfinite(lb_[q]) && std::isfinite(ub_[q])) own = ub_[q] - lb_[q];

    if (bland_) {
        double theta = own;
        int pos = -1;
        int posvar = -1;
        int pos_big = -1;
        double big_a = 0.0;
        for (int i = 0; i < m_; ++i) {
            const double a = alpha[i];
            if (std::abs(a) <= kRatioPivotTol) continue;
            const int b = basic_[i];
            const double delta = -dir * a;
            double t = kInf;
            if (delta > 0.0 && std::isfinite(ub_[b]))
                t = (ub_[b] - xval_[b]) / delta;
            else if (delta < 0.0 && std::isfinite(lb_[b]))
                t = (xval_[b] - lb_[b]) / (-delta);
            else
                continue;
            if (t < theta - 1e-12 ||
                (t < theta + 1e-12 && std::abs(a) > kStablePivotTol &&
                 (posvar < 0 || b < posvar))) {
                if (t < theta) theta = t;
                if (std::abs(a) > kStablePivotTol || pos < 0) {
                    pos = i;
                    posvar = b;
                }
            }
            if (t <= theta + 1e-12 && std::abs(a) > big_a) {
                big_a = std::abs(a);
                pos_big = i;
            }
        }
        if (pos < 0) {
            if (!std::isfinite(theta)) return res;
            res.kind = RatioResult::Kind::Flip;
            res.step = own;
            return res;
        }
        if (std::abs(alpha[pos]) < kStablePivotTol && pos_big >= 0) pos = pos_big;
        res.kind = RatioResult::Kind::Pivot;
        res.position = pos;
        res.step = std::max(theta, 0.0);
        return res;
    }

    // Harris two-pass ratio test.
    const double expand = opts_.feas_tol;
    double theta_rel = own;
    int pos1 = -1;
    double pos1_theta = 0.0;
    for (int i = 0; i < m_; ++i) {
        const double a = alpha[i];
        if (std::abs(a) <= kRatioPivotTol) continue;
        const int b = basic_[i];
        const double delta = -dir * a;
        double t = kInf, ts = kInf;
        if (delta > 0.0 && std::isfinite(ub_[b])) {
            t = (ub_[b] - xval_[b] + expand) / delta;
            ts = (ub_[b] - xval_[b]) / delta;
        } else if (delta < 0.0 && std::isfinite(lb_[b])) {
            t = (xval_[b] - lb_[b] + expand) / (-delta);
            ts = (xval_[b] - lb_[b]) / (-delta);
        } else {
            continue;
        }
        if (t < theta_rel) {
            theta_rel = t;
            pos1 = i;
            pos1_theta = ts;
        }
    }
    if (!std::isfinite(theta_rel)) return res;
    if (own <= theta_rel) {
        res.kind = RatioResult::Kind::Flip;
        res.step = own;
        return res;
    }
    int pos = -1;
    double best_a = 0.0, theta = 0.0;
    for (int i = 0; i < m_; ++i) {
        const double a = alpha[i];
        if (std::abs(a) <= kRatioPivotTol) continue;
        const int b = basic_[i];
        const double delta = -dir * a;
        double ts = kInf;
        if (delta > 0.0 && std::isfinite(ub_[b]))
            ts = (ub_[b] - xval_[b]) / delta;
        else if (delta < 0.0 && std::isfinite(lb_[b]))
            ts = (xval_[b] - lb_[b]) / (-delta);
        else
            continue;
        if (ts <= theta_rel && std::abs(a) > best_a) {
            best_a = std::abs(a);
            pos = i;
            theta = ts;
        }
    }
    if (pos < 0) {
        pos = pos1;
        theta = pos1_theta;
    }
    res.kind = RatioResult::Kind::Pivot;
    res.position = pos;
    res.step = std::max(theta, 0.0);
    return res;
}

bool Simplex::feasible_within(double tol) const {
    for (int i = 0; i < m_; ++i) {
        const int b = basic_[i];
        const double v = xval_[b];
        if (v < lb_[b] - tol || v > ub_[b] + tol) return false;
    }
    return true;
}

SolveStatus Simplex::iterate() {
    const int total = total_cols();
    devex_.assign(total, 1.0);
    tol_mult_ = 1.0;
    candidates_.clear();
    int since_refactor = 0;
    std::vector<double> alpha(m_), vrow(m_), ahat(total, 0.0);
    std::vector<int> touched;
    touched.reserve(256);

    while (true) {
        if (iters_ >= max_iters_) return SolveStatus::IterationLimit;

        int q = price_quick();
        if (q < 0) {
            if (etas_.size() > 0 || since_refactor > 0) {
                if (!factorize(true)) return SolveStatus::IterationLimit;
                since_refactor = 0;
                q = price_full();
            }
            // Polish pass: once nothing prices out at the working
            // tolerance, sweep the near-zero reduced costs as well so the
            // final duals certify the optimum sharply.
            if (q < 0 && !phase1_ && tol_mult_ > 1e-4) {
                tol_mult_ = 1e-4;
                q = price_full();
            }
            if (q < 0) return SolveStatus::Optimal;
        }

        const int dir = (state_[q] == VarState::AtUpper)                     ? -1
                        : (state_[q] == VarState::FreeZero && d_[q] > 0.0) ? -1
                                                                           : 1;

        std::fill(alpha.begin(), alpha.end(), 0.0);
        for_entries(q, [&](int row, double v) { alpha[row] += v; });
        full_ftran(alpha);

        const RatioResult rt = ratio_test(q, dir, alpha);
        ++iters_;
        ++since_refactor;

        if (rt.kind == RatioResult::Kind::Unbounded) {
            if (etas_.size() > 0) {
                if (!factorize(true)) return SolveStatus::IterationLimit;
                since_refactor = 0;
                continue;
            }
            if (phase1_) return SolveStatus::IterationLimit;  // defensive; phase 1 is bounded
            unbounded_q_ = q;
            unbounded_dir_ = dir;
            unbounded_alpha_ = alpha;
            return SolveStatus::Unbounded;
        }

        const double progress = std::abs(d_[q] * rt.step);
        if (progress <= 1e-12 * (1.0 + std::abs(zval_))) {
            if (++stall_ >= opts_.bland_stall_limit) bland_ = true;
        } else {
            stall_ = 0;
            bland_ = false;
        }

        if (rt.kind == RatioResult::Kind::Flip) {
            const double step = dir * rt.step;
            for (int i = 0; i < m_; ++i) {
                if (alpha[i] != 0.0) xval_[basic_[i]] -= alpha[i] * step;
            }
            xval_[q] += step;
            state_[q] = dir > 0 ? VarState::AtUpper : VarState::AtLower;
            zval_ += d_[q] * step;
            continue;
        }

        const int r = rt.position;
        const double alpha_r = alpha[r];
        const int leaving = basic_[r];

        // A fragile pivot straight after an eta chain: refactorize and
        // redo the iteration on exact data.
        if (std::abs(alpha_r) < kStablePivotTol && etas_.size() > 0) {
            if (!factorize(true)) return SolveStatus::IterationLimit;
            if (!feasible_within(100.0 * opts_.feas_tol)) {
                want_restart_ = true;
                return SolveStatus::IterationLimit;
            }
            since_refactor = 0;
            continue;
        }

        // Pivotal row of the pre-pivot basis.
        std::fill(vrow.begin(), vrow.end(), 0.0);
        vrow[r] = 1.0;
        full_btran(vrow);

        double ahat_q = 0.0;
        for_entries(q, [&](int row, double v) { ahat_q += vrow[row] * v; });
        if (std::abs(ahat_q - alpha_r) > 1e-6 * (1.0 + std::abs(alpha_r))) {
            if (!factorize(true)) return SolveStatus::IterationLimit;
            since_refactor = 0;
            continue;
        }

        // Primal step.
        const double step = dir * rt.step;
        for (int i = 0; i < m_; ++i) {
            if (alpha[i] != 0.0) xval_[basic_[i]] -= alpha[i] * step;
        }
        xval_[q] += step;
        zval_ += d_[q] * step;

        const double delta_r = -dir * alpha_r;
        if (is_fixed(leaving)) {
            state_[leaving] = VarState::AtLower;
            xval_[leaving] = lb_[leaving];
        } else if (delta_r > 0.0) {
            state_[leaving] = VarState::AtUpper;
            xval_[leaving] = ub_[leaving];
        } else {
            state_[leaving] = VarState::AtLower;
            xval_[leaving] = lb_[leaving];
        }

        // Sparse pivotal-row pass: touch only columns present in rows where
        // vrow is non-negligible.
        touched.clear();
        for (int i = 0; i < m_; ++i) {
            const double vi = vrow[i];
            if (std::abs(vi) <= kVrowDropTol) continue;
            for (std::size_t k = rptr_[i]; k < rptr_[i + 1]; ++k) {
                const int j = rcol_[k];
                if (ahat[j] == 0.0) touched.push_back(j);
                ahat[j] += vi * rval_[k];
            }
            const int s = n_ + i;  // slack of row i
            if (ahat[s] == 0.0) touched.push_back(s);
            ahat[s] += vi;
        }
        for (int k = 0; k < nart_; ++k) {
            const int a = n_ + m_ + k;
            const double v = vrow[art_row_[k]] * art_sign_[k];
            if (v != 0.0 && ahat[a] == 0.0) touched.push_back(a);
            ahat[a] += v;
        }

        const double theta_d = d_[q] / alpha_r;
        const double devex_ref = devex_[q] / (alpha_r * alpha_r);
        for (int j : touched) {
            const double aj = ahat[j];
            ahat[j] = 0.0;
            if (basis_pos_[j] >= 0 || j == q) continue;
            d_[j] -= theta_d * aj;
            if (opts_.devex) {
                const double w = aj * aj * devex_ref;
                if (w > devex_[j]) devex_[j] = w;
            }
        }
        d_[leaving] = -theta_d;
        d_[q] = 0.0;
        devex_[leaving] = std::max(devex_ref, 1.0);
        if (devex_ref > 1e12) std::fill(devex_.begin(), devex_.end(), 1.0);

        basic_[r] = q;
        basis_pos_[q] = r;
        basis_pos_[leaving] = -1;
        state_[q] = VarState::Basic;

        if (!etas_.push(r, alpha, kAlphaDropTol) ||
            static_cast<int>(etas_.size()) >= opts_.refactor_interval) {
            if (!factorize(true)) return SolveStatus::IterationLimit;
            if (!feasible_within(100.0 * opts_.feas_tol)) {
                // Basis repair or numerical drift broke primal feasibility.
                want_restart_ = true;
                return SolveStatus::IterationLimit;
            }
            since_refactor = 0;
        }
    }
}

int Simplex::cover_violations(bool& uncoverable) {
    uncoverable = false;
    int created = 0;
    for (int i = 0; i < m_; ++i) {
        const int b = basic_[i];
        const double v = xval_[b];
        double pin = 0.0, sign = 0.0;
        if (v > ub_[b] + opts_.feas_tol) {
            pin = ub_[b];
            sign = 1.0;
        } else if (v < lb_[b] - opts_.feas_tol) {
            pin = lb_[b];
            sign = -1.0;
        } else {
            continue;
        }
        if (b < n_ || b >= n_ + m_) {
            // Only unit (slack) columns can hand their row to an artificial.
            uncoverable = true;
            return created;
        }
        const int a = n_ + m_ + nart_;
        art_row_.push_back(b - n_);
        art_sign_.push_back(sign);
        ++nart_;
        lb_.push_back(0.0);
        ub_.push_back(kInf);
        state_.push_back(VarState::Basic);
        xval_.push_back(sign * (v - pin));
        basis_pos_.push_back(i);
        basic_[i] = a;
        basis_pos_[b] = -1;
        state_[b] = (sign > 0.0) ? VarState::AtUpper : VarState::AtLower;
        if (is_fixed(b)) state_[b] = VarState::AtLower;
        xval_[b] = pin;
        ++created;
    }
    return created;
}

LpSolution Simplex::run_once() {
    set_initial_point();
    if (!factorize(false)) return finish(SolveStatus::IterationLimit);
    compute_basic_values();

    for (int cycle = 0; cycle < 6; ++cycle) {
        bool uncoverable = false;
        const int created = cover_violations(uncoverable);
        if (uncoverable) {
            want_restart_ = true;
            return finish(SolveStatus::IterationLimit);
        }
        if (created > 0) {
            phase1_ = true;
            bland_ = false;
            stall_ = 0;
            if (!factorize(true)) return finish(SolveStatus::IterationLimit);
            const SolveStatus st1 = iterate();
            if (st1 != SolveStatus::Optimal) return finish(st1);
            double infeas = 0.0;
            for (int k = 0; k < nart_; ++k) infeas += std::abs(xval_[n_ + m_ + k]);
            if (infeas > opts_.feas_tol * std::max(1.0, std::sqrt(double(m_)))) {
                return make_infeasible();
            }
            for (int k = 0; k < nart_; ++k) {
                const int a = n_ + m_ + k;
                ub_[a] = 0.0;
                if (basis_pos_[a] < 0) {
                    state_[a] = VarState::AtLower;
                    xval_[a] = 0.0;
                }
            }
        }
        phase1_ = false;
        bland_ = false;
        stall_ = 0;
        if (!factorize(true)) return finish(SolveStatus::IterationLimit);

        const SolveStatus st = iterate();
        if (st == SolveStatus::Unbounded) return make_unbounded();
        if (want_restart_) {
            // Feasibility broke mid-flight; cover the damage and resume.
            want_restart_ = false;
            continue;
        }
        return finish(st);
    }
    want_restart_ = true;
    return finish(SolveStatus::IterationLimit);
}

LpSolution Simplex::run() {
    for (int attempt = 0;; ++attempt) {
        want_restart_ = false;
        LpSolution sol = run_once();
        const bool drifted =
            sol.status == SolveStatus::Optimal && !feasible_within(opts_.feas_tol * 10.0);
        if (attempt < 3 && (want_restart_ || drifted)) {
            // Restart from the slack basis with a tighter refactorization
            // cadence; numerical repair events are rare but destructive.
            opts_.refactor_interval = std::max(8, opts_.refactor_interval / 4);
            continue;
        }
        return sol;
    }
}

LpSolution Simplex::finish(SolveStatus st) {
    LpSolution sol;
    sol.status = st;
    sol.iterations = iters_;
    sol.x.assign(n_, 0.0);
    for (int j = 0; j < n_; ++j) sol.x[j] = xval_[j] * cscale_[j];

    std::vector<double> y(m_, 0.0);
    if (lu_valid_) {
        for (int i = 0; i < m_; ++i) y[i] = phase_cost(basic_[i]);
        full_btran(y);
    }
    sol.y.assign(m_, 0.0);
    for (int i = 0; i < m_; ++i) sol.y[i] = y[i] * rscale_[i] * cost_scale_;
    sol.reduced_costs.assign(n_, 0.0);
    for (int j = 0; j < n_; ++j) {
        double dj = cost_[j];
        for (std::size_t k = cptr_[j]; k < cptr_[j + 1]; ++k) dj -= y[cidx_[k]] * cval_[k];
        sol.reduced_costs[j] = dj * cost_scale_ / cscale_[j];
    }

    double obj = prob_.objective_constant();
    for (int j = 0; j < n_; ++j) obj += prob_.cost(j) * sol.x[j];
    sol.objective = obj;
    return sol;
}

LpSolution Simplex::make_unbounded() {
    LpSolution sol = finish(SolveStatus::Unbounded);
    sol.primal_ray.assign(n_, 0.0);
    if (unbounded_q_ < n_) sol.primal_ray[unbounded_q_] = unbounded_dir_ * cscale_[unbounded_q_];
    for (int i = 0; i < m_; ++i) {
        const int b = basic_[i];
        if (b < n_ && unbounded_alpha_[i] != 0.0)
            sol.primal_ray[b] = -unbounded_dir_ * unbounded_alpha_[i] * cscale_[b];
    }
    return sol;
}

LpSolution Simplex::make_infeasible() {
    LpSolution sol;
    sol.status = SolveStatus::Infeasible;
    sol.iterations = iters_;
    sol.x.assign(n_, 0.0);
    for (int j = 0; j < n_; ++j) sol.x[j] = xval_[j] * cscale_[j];
    std::vector<double> y(m_, 0.0);
    if (lu_valid_) {
        for (int i = 0; i < m_; ++i) y[i] = phase_cost(basic_[i]);
        full_btran(y);
    }
    sol.dual_ray.assign(m_, 0.0);
    for (int i = 0; i < m_; ++i) sol.dual_ray[i] = y[i] * rscale_[i];
    sol.y = sol.dual_ray;
    sol.reduced_costs.assign(n_, 0.0);
    sol.objective = 0.0;
    return sol;
}

LpSolution solve_direct(const LpProblem& p, const SolveOptions& opts) {
    Simplex s(p, opts);
    return s.run();
}

}  // namespace
}  // namespace detail

LpSolution solve(const LpProblem& problem, const SolveOptions& opts) {
    if (!problem.assembled()) throw std::invalid_argument("lp: problem must be assembled first");
    if (!opts.presolve) return detail::solve_direct(problem, opts);

    auto pre = detail::presolve(problem, opts.feas_tol);
    SolveOptions direct = opts;
    direct.presolve = false;
    if (pre.infeasible || pre.unbounded) {
        // Let the simplex produce the certificate on the full problem.
        return detail::solve_direct(problem, direct);
    }

    SolveOptions red_opts = opts;
    red_opts.basis_hint.clear();
    for (const auto& [row, col] : opts.basis_hint) {
        if (row < 0 || row >= problem.num_rows() || col < 0 || col >= problem.num_vars())
            continue;
        if (pre.row_map[row] >= 0 && pre.col_map[col] >= 0)
            red_opts.basis_hint.emplace_back(pre.row_map[row], pre.col_map[col]);
    }
    LpSolution red = detail::solve_direct(pre.reduced, red_opts);
    if (red.status == SolveStatus::Infeasible) {
        return detail::solve_direct(problem, direct);
    }

    const int n = problem.num_vars();
    const int m = problem.num_rows();
    LpSolution sol;
    sol.status = red.status;
    sol.iterations = red.iterations;
    sol.x.assign(n, 0.0);
    for (int j = 0; j < n; ++j) {
        sol.x[j] = pre.col_fixed[j] ? pre.fixed_value[j]
                   : pre.col_map[j] >= 0 ? red.x[pre.col_map[j]]
                                         : 0.0;
    }

    if (red.status == SolveStatus::Unbounded) {
        sol.primal_ray.assign(n, 0.0);
        for (int j = 0; j < n; ++j)
            if (pre.col_map[j] >= 0) sol.primal_ray[j] = red.primal_ray[pre.col_map[j]];
        sol.objective = red.objective;
        sol.y.assign(m, 0.0);
        sol.reduced_costs.assign(n, 0.0);
        return sol;
    }

    sol.y.assign(m, 0.0);
    for (int i = 0; i < m; ++i)
        if (pre.row_map[i] >= 0) sol.y[i] = red.y[pre.row_map[i]];

    if (red.status == SolveStatus::Optimal) {
        // Reconstruct duals of removed singleton rows, newest first.
        std::vector<double> d(problem.costs());
        for (int i = 0; i < m; ++i) {
            if (sol.y[i] == 0.0) continue;
            const auto cols = problem.row_cols(i);
            const auto vals = problem.row_values(i);
            for (std::size_t k = 0; k < cols.size(); ++k) d[cols[k]] -= sol.y[i] * vals[k];
        }
        for (auto it = pre.stack.rbegin(); it != pre.stack.rend(); ++it) {
            const double xj = sol.x[it->col];
            const double tol = 1e-7 * (1.0 + std::abs(it->implied_value));
            if (std::abs(xj - it->implied_value) > tol) continue;
            const double ycand = d[it->col] / it->coef;
            const bool sign_ok = it->sense == RowSense::Equal ||
                                 (it->sense == RowSense::LessEqual ? ycand <= 1e-9
                                                                   : ycand >= -1e-9);
            if (!sign_ok || ycand == 0.0) continue;
            sol.y[it->row] = ycand;
            const auto cols = problem.row_cols(it->row);
            const auto vals = problem.row_values(it->row);
            for (std::size_t k = 0; k < cols.size(); ++k)
                d[cols[k]] -= ycand * vals[k];
        }
        // Final reduced costs from the assigned duals.
        sol.reduced_costs = problem.costs();
        for (int i = 0; i < m; ++i) {
            if (sol.y[i] == 0.0) continue;
            const auto cols = problem.row_cols(i);
            const auto vals = problem.row_values(i);
            for (std::size_t k = 0; k < cols.size(); ++k)
                sol.reduced_costs[cols[k]] -= sol.y[i] * vals[k];
        }
    } else {
        sol.reduced_costs.assign(n, 0.0);
    }

    double obj = problem.objective_constant();
    for (int j = 0; j < n; ++j) obj += problem.cost(j) * sol.x[j];
    sol.objective = obj;
    return sol;
}

}  // namespace flexdes::lp
