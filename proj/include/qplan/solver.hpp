#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "qplan/qbf.hpp"

namespace qplan {

struct SolverConfig {
    bool enable_failed_literal = true;
    bool enable_universal_probing = true;
    bool enable_partitioning = true;
    /// Universal variables probed per node (each with both values). A universal
    /// block small enough to enumerate completely is probed as a whole instead.
    int probe_budget = 2;
    std::uint64_t seed = 0;
    /// 0 means unlimited.
    std::uint64_t node_cap = 0;
    std::int64_t time_cap_ms = 0;
};

enum class Truth : std::uint8_t { False, True, Unknown };

std::string to_string(Truth t);

struct SolverStats {
    std::uint64_t nodes = 0;  // decisions
    std::uint64_t props = 0;  // assignments made by propagation and lookahead
    std::int64_t ms = 0;
};

struct SolverResult {
    Truth value = Truth::Unknown;
    /// Signed literals for every variable of block 1, ascending by variable;
    /// present when value is True and block 1 is existential.
    std::optional<std::vector<int>> witness;
    SolverStats stats;
};

SolverResult solve(const QbfProblem& q, const SolverConfig& cfg = {});

/// `result=<..> nodes=<n> props=<n> ms=<n>`
std::string stats_line(const SolverResult& r);
/// `v <lits> 0`
std::string witness_line(const std::vector<int>& witness);

/// Strips universal literals quantified inside every existential literal of `c`.
/// Variables are looked up in `prefix`; a variable absent from it counts as
/// outermost existential.
Clause universal_reduce(const Clause& c, const std::vector<Block>& prefix);

/// Connected components of the clause/variable incidence graph, in order of
/// first clause. Empty clauses form singleton components.
std::vector<std::vector<Clause>> partition(const std::vector<Clause>& m);

/// Truth by full expansion of the prefix; throws std::length_error beyond 24 variables.
bool expand_eval(const QbfProblem& q);

/// Fixes the block-1 variables to `witness` and re-solves.
Truth check_witness(const QbfProblem& q, const std::vector<int>& witness, const SolverConfig& cfg = {});

}  // namespace qplan
