#pragma once

#include <cstddef>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include "qplan/domain.hpp"
#include "qplan/formula.hpp"
#include "qplan/invariants.hpp"
#include "qplan/qbf.hpp"

namespace qplan {

enum class PlanKind : std::uint8_t { Automaton, Phased, Sequence };
enum class QuantMode : std::uint8_t { Aux, Direct };
enum class MutexMode : std::uint8_t { DependentPairs, AllPairs };

std::string to_string(PlanKind k);
std::string to_string(QuantMode m);
PlanKind parse_plan_kind(const std::string& s);
QuantMode parse_quant_mode(const std::string& s);
MutexMode parse_mutex_mode(const std::string& s);

struct EncodingConfig {
    PlanKind kind = PlanKind::Sequence;
    int t_max = 1;
    int n_states = 1;  // ignored for sequence plans
    QuantMode quant = QuantMode::Aux;
    MutexMode mutex = MutexMode::AllPairs;
    bool use_invariants = false;  // requires QuantMode::Aux
    std::size_t dnf_cap = kDefaultDnfCap;
};

class EncodeError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// A formula instance together with the schema it was generated from.
struct TaggedFormula {
    std::string tag;
    Formula formula;
};

using SchemaCensus = std::map<std::string, std::size_t>;

struct EncodedProblem {
    QbfProblem qbf;
    EncodingConfig config;
    const ProblemInstance* instance = nullptr;
    std::vector<TaggedFormula> formulas;
    SchemaCensus census;
    std::vector<int> plan_vars;
    std::vector<int> contingency_vars;
    /// Initial-state disjuncts used for the auxiliary variables (aux mode only).
    std::size_t init_terms = 0;
};

/// Variable helpers over the atlas.
int fact_var(VariableAtlas& atlas, int fact, int t);
int op_var(VariableAtlas& atlas, int op, int t);
/// Choice bits needed for `k` alternatives.
int choice_bits(std::size_t k);
/// Conjunction over the choice bits of (source, t) selecting alternative `alt` of `k`.
/// Bit pattern p = sum of (not c_j) * 2^j; patterns at or beyond k-1 select the last alternative.
Formula choice_condition(VariableAtlas& atlas, int source, int t, std::size_t alt, std::size_t k);

/// Conjunction of all literals asserted by any alternative of the operator at time t.
Formula achieved_at(VariableAtlas& atlas, const Operator& op, int t);

std::vector<TaggedFormula> encode_execution(const ProblemInstance& inst, int t_max, VariableAtlas& atlas,
                                            MutexMode mutex);
std::vector<TaggedFormula> encode_automaton_plan(const ProblemInstance& inst, int t_max, int n_states,
                                                 VariableAtlas& atlas);
std::vector<TaggedFormula> encode_phased_plan(const ProblemInstance& inst, int t_max, int n_states,
                                              VariableAtlas& atlas);
std::vector<TaggedFormula> encode_sequence_plan(const ProblemInstance& inst, int t_max, VariableAtlas& atlas);

/// Builds the complete prenex QBF exists P forall C exists R for the configuration.
EncodedProblem assemble(const ProblemInstance& inst, const EncodingConfig& config);

/// Census predicted from the schema index ranges, for checking `assemble`.
SchemaCensus expected_census(const ProblemInstance& inst, const EncodingConfig& config,
                             std::size_t init_terms, std::size_t invariant_count);

}  // namespace qplan
