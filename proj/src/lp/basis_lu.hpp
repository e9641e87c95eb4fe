#pragma once

#include <cstdint>
#include <utility>
#include <vector>

// Left-looking sparse LU with partial pivoting for simplex basis matrices,
// plus a product-form eta file for pivot updates between refactorizations.

namespace flexdes::lp::detail {

struct SparseEntry {
    int index;
    double value;
};

using SparseColumn = std::vector<SparseEntry>;

class BasisLu {
public:
    // columns[k] holds basis column k in row-index space. Returns true on
    // success. On numerical singularity the whole pass completes anyway and
    // failed_positions() / unpivoted_rows() name every dependent column and
    // uncovered row, so the caller can repair the basis in one sweep.
    bool factorize(int m, const std::vector<SparseColumn>& columns);

    // Solve B x = b; b is dense of size m, overwritten with the solution
    // indexed by basis position.
    void ftran(std::vector<double>& b) const;

    // Solve B' y = c; c indexed by basis position, result by row.
    void btran(std::vector<double>& c) const;

    const std::vector<int>& failed_positions() const { return failed_positions_; }
    /// Rows without a pivot when factorize() failed.
    std::vector<int> unpivoted_rows() const;
    std::size_t fill() const;

private:
    int m_ = 0;
    std::vector<int> failed_positions_;
    // L/U columns in elimination order; L unit-diagonal with entries mapped
    // to elimination indices after the factorization pass.
    std::vector<SparseColumn> lcols_, ucols_;
    std::vector<double> udiag_;
    std::vector<int> pivot_row_;  // elimination index -> original row
    std::vector<int> pinv_;      // original row -> elimination index
    std::vector<int> colperm_;   // elimination index -> basis position
    std::vector<int> cinv_;      // basis position -> elimination index
};

// One product-form update: basis column at position r replaced by a column
// whose FTRAN image is d (with diagonal element d[r] = dr).
struct Eta {
    int position;
    double diag;
    std::vector<SparseEntry> entries;  // off-diagonal (position, value)
};

class EtaFile {
public:
    void clear() { etas_.clear(); }
    std::size_t size() const { return etas_.size(); }

    // Record replacement at basis position r by FTRAN image `alpha`
    // (dense, indexed by basis position). Returns false if the pivot
    // element is numerically unusable.
    bool push(int r, const std::vector<double>& alpha, double drop_tol);

    void apply_ftran(std::vector<double>& x) const;
    void apply_btran(std::vector<double>& x) const;

private:
    std::vector<Eta> etas_;
};

}  // namespace flexdes::lp::detail
