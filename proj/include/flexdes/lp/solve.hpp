#pragma once

#include <vector>

#include "flexdes/lp/problem.hpp"

namespace flexdes::lp {

enum class SolveStatus { Optimal, Infeasible, Unbounded, IterationLimit };

const char* status_name(SolveStatus s);

struct LpSolution {
    SolveStatus status = SolveStatus::IterationLimit;
    double objective = 0.0;
    std::vector<double> x;              // primal values
    std::vector<double> y;              // row duals (min convention: <= rows y<=0)
    std::vector<double> reduced_costs;  // c - A'y
    std::vector<double> primal_ray;     // set when Unbounded
    std::vector<double> dual_ray;       // Farkas-style certificate when Infeasible
    long iterations = 0;
};

struct SolveOptions {
    double feas_tol = 1e-7;        // absolute, on scaled data
    double opt_tol = 1e-7;
    long max_iterations = 0;       // 0: derived from problem size
    int bland_stall_limit = 200;   // stalled iterations before Bland's rule
    int refactor_interval = 64;
    bool scale = true;
    bool presolve = true;
    bool devex = true;
    unsigned long seed = 0;        // recorded; in no way affects the pivot path
    /// Optional warm basis: (row, column) pairs marking columns to start
    /// basic in place of the row's slack. Invalid pairs are ignored.
    std::vector<std::pair<int, int>> basis_hint;
};

/// Bounded-variable revised primal simplex with sparse LU basis
/// factorization. Deterministic: identical inputs give identical iterates.
LpSolution solve(const LpProblem& problem, const SolveOptions& opts = {});

struct ResidualReport {
    double max_primal_residual = 0.0;  // rows and variable bounds
    double max_dual_residual = 0.0;    // dual sign/feasibility violations
    double complementarity = 0.0;      // worst |d_j| * distance-to-bound
    double duality_gap = 0.0;          // |c'x - (b'y + bound terms)|
};

/// Residuals of an Optimal solution against the problem data.
ResidualReport check_solution(const LpProblem& problem, const LpSolution& sol);

/// Value of a Farkas certificate: positive proves infeasibility.
/// y'b - sup_x y'Ax over the bound box, with sign checks on y.
double infeasibility_certificate_value(const LpProblem& problem,
                                       const std::vector<double>& dual_ray);

/// Checks an unboundedness certificate: returns c'ray if the ray is a
/// feasible direction (A ray respects senses, bounds allow movement),
/// +inf otherwise.
double unbounded_certificate_value(const LpProblem& problem,
                                   const std::vector<double>& primal_ray);

}  // namespace flexdes::lp
