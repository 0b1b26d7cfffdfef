#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "qplan/encoder.hpp"
#include "qplan/plan.hpp"
#include "qplan/solver.hpp"

namespace qplan {

struct SearchLimits {
    int max_t_max = 10;
    int max_states = 4;  // automaton and phased only
    /// Per solver call; 0 means none.
    std::int64_t time_cap_ms = 0;
    QuantMode quant = QuantMode::Aux;
    MutexMode mutex = MutexMode::AllPairs;
    bool use_invariants = false;
    SolverConfig solver;
    VerifyOptions verify;
    /// Evaluate independent parameter points concurrently; records stay in parameter order.
    bool concurrent = false;
};

struct BenchRecord {
    std::string encoding;
    std::string params;
    int t_max = 0;
    int n_states = 0;  // 0 for sequence plans
    std::size_t clauses = 0;
    std::size_t vars = 0;
    std::int64_t ms = 0;
    std::uint64_t nodes = 0;
    Truth value = Truth::Unknown;
};

std::string csv_header();
std::string csv_row(const BenchRecord& r);

/// A plan returned by the search did not verify: encoder/solver/runtime disagree.
class InconsistentPlan : public std::logic_error {
public:
    using std::logic_error::logic_error;
};

struct PointOutcome {
    BenchRecord record;
    SolverResult result;
    std::optional<Plan> plan;  // extracted and verified when the value is true
    VerificationReport verification;
};

/// Encodes, solves and records one parameter point; true results are extracted
/// and verified (InconsistentPlan if verification fails).
PointOutcome run_point(const ProblemInstance& inst, const EncodingConfig& cfg, const SolverConfig& solver,
                       const std::string& params, const VerifyOptions& verify = {});

/// Parameter points in search order: t_max = 1,2,... for sequence plans;
/// ascending t_max + n_states, smaller t_max first, otherwise.
std::vector<std::pair<int, int>> search_points(PlanKind kind, int max_t_max, int max_states);

struct PlanSearchResult {
    std::optional<Plan> plan;
    int t_max = 0;
    int n_states = 0;
    bool hit_cap = false;  // some call ended unknown
    std::vector<BenchRecord> records;
    VerificationReport verification;
};

PlanSearchResult plan_search(const ProblemInstance& inst, PlanKind kind, const SearchLimits& limits,
                             const std::string& params = "");

const std::vector<std::string>& benchmark_suites();
/// One record per solver call. Throws std::invalid_argument for unknown suites.
std::vector<BenchRecord> run_benchmark(const std::string& suite, const SolverConfig& solver = {},
                                       std::int64_t time_cap_ms = 0);

}  // namespace qplan
