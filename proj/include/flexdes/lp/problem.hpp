#pragma once

#include <limits>
#include <span>
#include <string>
#include <vector>

// Sparse linear programs in standard bounded form:
//   min c'x  s.t.  row senses {<=, =, >=},  l <= x <= u  (+-inf allowed).

namespace flexdes::lp {

inline constexpr double kInf = std::numeric_limits<double>::infinity();

enum class RowSense { LessEqual, Equal, GreaterEqual };

class LpProblem {
public:
    int add_variable(std::string name, double lb, double ub, double cost = 0.0);
    int add_row(RowSense sense, double rhs, std::string name);
    /// Triplet entry; duplicates on the same (row, col) are summed at assembly.
    void add_entry(int row, int col, double value);

    void set_cost(int col, double cost) { cost_.at(col) = cost; }
    void set_costs(std::vector<double> c);
    void set_objective_constant(double c) { obj_constant_ = c; }
    void set_bounds(int col, double lb, double ub);

    /// Sorts and merges triplets into row-major storage. Throws
    /// std::invalid_argument on out-of-range indices or crossed bounds.
    void assemble();
    bool assembled() const { return assembled_; }

    int num_vars() const { return static_cast<int>(cost_.size()); }
    int num_rows() const { return static_cast<int>(rhs_.size()); }
    std::size_t num_entries() const;

    double cost(int j) const { return cost_[j]; }
    double lower(int j) const { return lb_[j]; }
    double upper(int j) const { return ub_[j]; }
    double rhs(int i) const { return rhs_[i]; }
    RowSense sense(int i) const { return sense_[i]; }
    double objective_constant() const { return obj_constant_; }
    const std::string& var_name(int j) const { return var_names_[j]; }
    const std::string& row_name(int i) const { return row_names_[i]; }
    const std::vector<double>& costs() const { return cost_; }

    // Row-major access, valid after assemble().
    std::span<const int> row_cols(int i) const;
    std::span<const double> row_values(int i) const;

    /// Row activity a_i . x for a full primal vector.
    double row_activity(int i, std::span<const double> x) const;

private:
    std::vector<double> cost_, lb_, ub_;
    std::vector<std::string> var_names_;
    std::vector<RowSense> sense_;
    std::vector<double> rhs_;
    std::vector<std::string> row_names_;
    double obj_constant_ = 0.0;

    struct Triplet {
        int row, col;
        double value;
    };
    std::vector<Triplet> triplets_;

    bool assembled_ = false;
    std::vector<std::size_t> row_start_;
    std::vector<int> col_index_;
    std::vector<double> value_;
};

}  // namespace flexdes::lp
