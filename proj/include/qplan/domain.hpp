#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "qplan/formula.hpp"

namespace qplan {

using LiteralSet = std::vector<Literal>;

struct Fact {
    std::string name;
    int index = 0;
    bool observable = false;
    /// Present for defined facts; mentions only non-defined facts.
    std::optional<Formula> defined_by;

    bool is_defined() const { return defined_by.has_value(); }
};

struct Operator {
    std::string name;
    int index = 0;
    LiteralSet precondition;
    /// Non-empty; exactly one entry for deterministic operators.
    std::vector<LiteralSet> effects;

    bool deterministic() const { return effects.size() == 1; }
};

/// Environment change that fires whenever its precondition holds, with one of
/// at least two alternatives chosen nondeterministically.
struct NondetRule {
    std::string name;
    LiteralSet precondition;
    std::vector<LiteralSet> alternatives;
};

class DomainError : public std::runtime_error {
public:
    DomainError(const std::string& what, int line = 0, int column = 0);
    int line() const { return line_; }
    int column() const { return column_; }

private:
    int line_;
    int column_;
};

class CapExceeded : public std::runtime_error {
public:
    CapExceeded(const std::string& what, std::size_t reached)
        : std::runtime_error(what + " (reached " + std::to_string(reached) + ")"), reached_(reached) {}
    std::size_t reached() const { return reached_; }

private:
    std::size_t reached_;
};

class ProblemInstance {
public:
    ProblemInstance() = default;
    /// Validates and indexes. Throws DomainError on inconsistent content.
    ProblemInstance(std::vector<Fact> facts, std::vector<Operator> operators,
                    std::vector<NondetRule> rules, Formula init, Formula goal);

    const std::vector<Fact>& facts() const { return facts_; }
    const std::vector<Operator>& operators() const { return operators_; }
    const std::vector<NondetRule>& rules() const { return rules_; }
    const Formula& init() const { return init_; }
    const Formula& goal() const { return goal_; }

    std::size_t num_facts() const { return facts_.size(); }
    std::size_t num_operators() const { return operators_.size(); }

    std::optional<int> fact_index(std::string_view name) const;
    std::optional<int> operator_index(std::string_view name) const;
    const Fact& fact(int i) const { return facts_.at(static_cast<std::size_t>(i)); }
    const Operator& op(int i) const { return operators_.at(static_cast<std::size_t>(i)); }

    /// Non-defined facts in index order.
    const std::vector<int>& base_facts() const { return base_facts_; }
    const std::vector<int>& defined_facts() const { return defined_facts_; }
    const std::vector<int>& observables() const { return observables_; }

    /// Sum of precondition sizes and all effect-alternative sizes.
    std::size_t operator_size() const;

    /// Initial-state formula with defined facts replaced by their definitions.
    Formula expanded_init() const;

    std::string fact_name(int i) const { return fact(i).name; }
    std::string literal_name(Literal l) const { return (l.positive ? "" : "-") + fact_name(l.atom); }

private:
    void validate_literals(std::span<const Literal> lits, const std::string& where) const;

    std::vector<Fact> facts_;
    std::vector<Operator> operators_;
    std::vector<NondetRule> rules_;
    Formula init_;
    Formula goal_;
    std::vector<int> base_facts_;
    std::vector<int> defined_facts_;
    std::vector<int> observables_;
    std::unordered_map<std::string, int> fact_by_name_;
    std::unordered_map<std::string, int> op_by_name_;
};

/// Truth value per fact; defined facts are always derived from base facts.
class FactValuation {
public:
    FactValuation() = default;
    /// `base` holds one entry per fact; entries of defined facts are ignored and recomputed.
    FactValuation(const ProblemInstance& inst, std::vector<std::uint8_t> base);

    bool operator[](int fact) const { return values_[static_cast<std::size_t>(fact)] != 0; }
    std::span<const std::uint8_t> values() const { return values_; }
    std::size_t size() const { return values_.size(); }

    bool holds(Literal l) const { return (*this)[l.atom] == l.positive; }
    bool holds_all(std::span<const Literal> lits) const;

    /// Sets base fact values and recomputes defined facts.
    void assign(const ProblemInstance& inst, std::span<const Literal> lits);
    void recompute(const ProblemInstance& inst);

    auto operator<=>(const FactValuation&) const = default;

private:
    std::vector<std::uint8_t> values_;
};

/// Parses the textual domain format. Throws DomainError with line/column.
ProblemInstance parse_domain(std::string_view text);
/// Prints an instance in the domain format; parse_domain(print_domain(x)) == x structurally.
std::string print_domain(const ProblemInstance& inst);

bool structurally_equal(const ProblemInstance& a, const ProblemInstance& b);

/// True iff the operators interfere: an effect variable of one occurs in the
/// other's precondition, or the two assert opposite literals.
bool dependent(const Operator& a, const Operator& b);

/// All valuations of base facts satisfying the initial-state formula, in
/// lexicographic order of the base-fact vector. Throws CapExceeded when the
/// count exceeds `cap`.
std::vector<FactValuation> enumerate_initial_states(const ProblemInstance& inst, std::size_t cap);

/// Brute-force enumeration over all 2^F base valuations; OpenMP-parallel.
/// Kept alongside a serial reference for testing and benchmarking.
std::vector<FactValuation> enumerate_initial_states_bruteforce(const ProblemInstance& inst,
                                                               std::size_t cap);
std::vector<FactValuation> enumerate_initial_states_bruteforce_serial(const ProblemInstance& inst,
                                                                      std::size_t cap);

/// Compact description of the initial-state set: padded DNF terms over the
/// atoms of the (expanded) init formula, times all values of the other base facts.
class InitialStateSpace {
public:
    InitialStateSpace(const ProblemInstance& inst, std::size_t dnf_cap = kDefaultDnfCap);

    /// Number of initial states (saturates at UINT64_MAX).
    std::uint64_t count() const { return count_; }
    const std::vector<Term>& terms() const { return terms_; }
    const std::vector<int>& free_facts() const { return free_facts_; }
    /// Atoms (base facts) constrained by the init formula.
    const std::vector<int>& constrained_facts() const { return constrained_; }

    /// The index-th state; index in [0, count()). Not in lexicographic order.
    FactValuation state(std::uint64_t index) const;

private:
    const ProblemInstance* inst_;
    std::vector<Term> terms_;
    std::vector<int> constrained_;
    std::vector<int> free_facts_;
    std::uint64_t count_ = 0;
};

}  // namespace qplan
