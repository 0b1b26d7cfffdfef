#pragma once

#include <cstddef>
#include <vector>

#include "qplan/domain.hpp"
#include "qplan/qbf.hpp"

namespace qplan {

/// forall x_1..x_n exists y_1..y_m . clauses; variable i in 1..n is x_i and
/// n+j is y_j. Literals are signed.
struct ForallExistsQbf {
    int n = 0;
    int m = 0;
    std::vector<Clause> clauses;
};

/// Reads a closed QBF whose prefix is at most one universal block followed by
/// at most one existential block. Throws std::invalid_argument otherwise.
ForallExistsQbf forall_exists_from(const QbfProblem& q);
QbfProblem to_qbf_problem(const ForallExistsQbf& f);

/// Deterministic planning instance with unknown x values in the initial state
/// that has a plan exactly when the formula is true.
ProblemInstance qbf_to_planning(const ForallExistsQbf& f);

/// Every initial state reaches a goal state by applying deterministic
/// operators one at a time (breadth-first per initial state). Throws
/// CapExceeded when one search visits more than `state_cap` states or there
/// are more than `state_cap` initial states. OpenMP-parallel over initial states.
bool solvable_by_search(const ProblemInstance& inst, std::size_t state_cap = std::size_t{1} << 20);
bool solvable_by_search_serial(const ProblemInstance& inst, std::size_t state_cap = std::size_t{1} << 20);

}  // namespace qplan
