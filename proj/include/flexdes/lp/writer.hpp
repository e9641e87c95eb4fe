#pragma once

#include <iosfwd>
#include <string>

#include "flexdes/lp/problem.hpp"

namespace flexdes::lp {

/// CPLEX LP text format dump for cross-checking with external solvers.
/// Field ordering is fixed: objective terms by variable index, rows in
/// index order with entries by variable index, one Bounds line per
/// variable in index order. Numbers use %.17g.
void write_lp_format(const LpProblem& p, std::ostream& out,
                     const std::string& name = "flexdes");

void write_lp_file(const LpProblem& p, const std::string& path,
                   const std::string& name = "flexdes");

/// FNV-1a hash of the canonical LP text; used as a model fingerprint.
unsigned long long lp_fingerprint(const LpProblem& p);

}  // namespace flexdes::lp
