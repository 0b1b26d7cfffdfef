#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <variant>
#include <vector>

#include "qplan/domain.hpp"
#include "qplan/encoder.hpp"

namespace qplan {

/// States are numbered 1..n_states; per-state vectors are indexed by state-1.
struct AutomatonPlan {
    int n_states = 1;
    std::vector<int> condition;  // observable fact tested in each state
    std::vector<int> succ_true;
    std::vector<int> succ_false;
    std::vector<std::vector<int>> enabled;  // operator indices, ascending

    bool operator==(const AutomatonPlan&) const = default;
};

struct PhasedPlan {
    int n_states = 1;
    std::vector<std::vector<int>> enabled;

    bool operator==(const PhasedPlan&) const = default;
};

struct SequencePlan {
    int t_max = 1;
    std::vector<std::vector<int>> enabled;  // per time step

    bool operator==(const SequencePlan&) const = default;
};

using Plan = std::variant<AutomatonPlan, PhasedPlan, SequencePlan>;

PlanKind kind_of(const Plan& p);

class MalformedWitness : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class PlanFormatError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Reads the plan from the values of the plan variables; unlisted variables are false.
Plan extract_plan(const EncodedProblem& ep, const std::vector<int>& witness);

/// Alternative picked when a nondeterministic source fires. Sources are
/// operators by index, then rules offset by the operator count.
using ChoiceFn = std::function<std::size_t(int source, int t, std::size_t k)>;
ChoiceFn first_alternative();
/// table[t][source]; missing entries pick alternative 0.
ChoiceFn table_choices(std::vector<std::vector<std::size_t>> table);

struct TraceStep {
    int t = 0;
    int state = 0;  // 0 for sequence plans
    FactValuation facts;
    std::vector<int> fired;  // operators fired at t
    std::vector<std::pair<int, std::size_t>> rules;  // (rule, alternative) fired at t
};

struct ExecutionTrace {
    std::vector<TraceStep> steps;
    bool effect_conflict = false;
    int conflict_t = -1;

    const FactValuation& final_facts() const { return steps.back().facts; }
};

/// Operator is applicable: precondition holds and some asserted literal is false.
bool applicable(const Operator& op, const FactValuation& v);

ExecutionTrace execute_automaton(const AutomatonPlan& p, const ProblemInstance& inst, const FactValuation& s0,
                                 int t_max, const ChoiceFn& choices);
ExecutionTrace execute_phased(const PhasedPlan& p, const ProblemInstance& inst, const FactValuation& s0, int t_max,
                              const ChoiceFn& choices);
ExecutionTrace execute_sequence(const SequencePlan& p, const ProblemInstance& inst, const FactValuation& s0,
                                const ChoiceFn& choices);
/// Sequence plans are cut to `t_max` steps, or padded with steps that enable nothing.
ExecutionTrace execute(const Plan& p, const ProblemInstance& inst, const FactValuation& s0, int t_max,
                       const ChoiceFn& choices);

/// One line per step: `t=<k> state=<s> fired=[...] facts={name:0/1,...}`.
std::string format_trace(const ProblemInstance& inst, const ExecutionTrace& tr);

struct VerifyOptions {
    /// Above this many scenarios, switch to sampling this many.
    std::uint64_t scenario_cap = 100000;
    std::uint64_t seed = 0;
    std::size_t max_failures = 8;
    std::size_t dnf_cap = kDefaultDnfCap;
};

struct VerificationFailure {
    FactValuation initial;
    std::vector<std::size_t> choices;  // alternatives in the order they were consumed
    std::string reason;
};

struct VerificationReport {
    bool valid = false;
    bool exhaustive = false;
    std::uint64_t scenarios = 0;
    std::uint64_t failure_count = 0;
    std::vector<VerificationFailure> failures;  // first few, deterministic order
};

/// Runs the plan from every initial state under every resolution of the
/// nondeterminism (or a seeded sample when that exceeds the cap) and checks the
/// goal after `t_max` steps with no effect conflicts. OpenMP-parallel.
VerificationReport verify_plan(const Plan& p, const ProblemInstance& inst, int t_max, const VerifyOptions& opts = {});
/// Serial reference of verify_plan; same report.
VerificationReport verify_plan_serial(const Plan& p, const ProblemInstance& inst, int t_max,
                                      const VerifyOptions& opts = {});

std::string plan_to_json(const Plan& p, const ProblemInstance& inst);
Plan plan_from_json(std::string_view text, const ProblemInstance& inst);

}  // namespace qplan
