#pragma once

#include <compare>
#include <cstddef>
#include <string>
#include <vector>

#include "qplan/domain.hpp"

namespace qplan {

/// A clause of one or two literals over base facts, literals sorted.
struct InvariantClause {
    std::vector<Literal> lits;

    auto operator<=>(const InvariantClause&) const = default;
};

struct InvariantOptions {
    /// At most one operator fires per step (all-pairs mutex). When false, any
    /// two operators that are not dependent may fire together.
    bool exclusive_operators = true;
    /// Cap on explicit initial-state enumeration when the init formula has no
    /// compact DNF.
    std::size_t state_cap = std::size_t{1} << 20;
    std::size_t dnf_cap = kDefaultDnfCap;
};

/// 1- and 2-literal clauses true in every initial state and preserved by every
/// step: candidates that some source alternative can falsify are deleted until
/// a fixpoint is reached. Result sorted, units first.
std::vector<InvariantClause> synthesize_invariants(const ProblemInstance& inst,
                                                   const InvariantOptions& opts = {});

bool holds(const InvariantClause& c, const FactValuation& v);
std::string to_string(const ProblemInstance& inst, const InvariantClause& c);

}  // namespace qplan
