#pragma once
// Helpers shared by the unit tests and the acceptance binary. Everything here
// is a brute-force oracle or a fixture loader, deliberately independent of the
// code under test.

#include <algorithm>
#include <cstdint>
#include <fstream>
#include <map>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "qplan/domain.hpp"
#include "qplan/encoder.hpp"
#include "qplan/qbf.hpp"

namespace qplan::qtest {

inline std::string data_file(const std::string& name) {
    std::ifstream in(std::string(QPLAN_TEST_DATA) + "/" + name);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

// Random closed QBF: `blocks` alternating blocks, first quantifier random.
inline QbfProblem random_qbf(std::mt19937_64& rng, int max_vars, int max_clauses, int min_blocks, int max_blocks) {
    std::uniform_int_distribution<int> nv(2, max_vars), nc(1, max_clauses), nb(min_blocks, max_blocks);
    const int n = nv(rng);
    const int b = std::min(nb(rng), n);
    QbfProblem q;
    // cut 1..n into b non-empty runs
    std::vector<int> cuts;
    for (int i = 2; i <= n; ++i) cuts.push_back(i);
    std::shuffle(cuts.begin(), cuts.end(), rng);
    cuts.resize(static_cast<std::size_t>(b - 1));
    std::sort(cuts.begin(), cuts.end());
    cuts.push_back(n + 1);
    Quant quant = (rng() & 1) ? Quant::Exists : Quant::Forall;
    int start = 1;
    for (int c : cuts) {
        Block blk{quant, {}};
        for (int v = start; v < c; ++v) blk.vars.push_back(v);
        q.prefix.push_back(blk);
        quant = quant == Quant::Exists ? Quant::Forall : Quant::Exists;
        start = c;
    }
    std::uniform_int_distribution<int> width(1, 3), var(1, n);
    const int m = nc(rng);
    for (int i = 0; i < m; ++i) {
        Clause c;
        int w = width(rng);
        for (int j = 0; j < w; ++j) c.push_back((rng() & 1) ? var(rng) : -var(rng));
        if (normalize_clause(c)) q.matrix.push_back(c);
    }
    q.num_vars = n;
    return q;
}

// Successor states under single-operator steps (every operator whose
// precondition holds, every alternative), with all active rules firing
// alongside under every combination of alternatives.
inline std::vector<FactValuation> successors(const ProblemInstance& inst, const FactValuation& v) {
    std::vector<std::vector<Literal>> op_effects{{}};  // "no operator" step
    for (const auto& op : inst.operators())
        if (v.holds_all(op.precondition))
            for (const auto& e : op.effects) op_effects.push_back(e);
    std::vector<std::vector<Literal>> rule_effects{{}};
    for (const auto& r : inst.rules()) {
        if (!v.holds_all(r.precondition)) continue;
        std::vector<std::vector<Literal>> next;
        for (const auto& acc : rule_effects)
            for (const auto& alt : r.alternatives) {
                auto x = acc;
                x.insert(x.end(), alt.begin(), alt.end());
                next.push_back(x);
            }
        rule_effects = next;
    }
    std::vector<FactValuation> out;
    for (const auto& oe : op_effects)
        for (const auto& re : rule_effects) {
            std::vector<Literal> all = oe;
            all.insert(all.end(), re.begin(), re.end());
            bool clash = false;
            for (Literal a : all)
                for (Literal b : all) clash |= a.atom == b.atom && a.positive != b.positive;
            if (clash) continue;
            FactValuation w = v;
            w.assign(inst, all);
            out.push_back(w);
        }
    return out;
}

// Every state reachable from some initial state; initial states found by
// brute force over the base facts.
inline std::set<FactValuation> reachable_states(const ProblemInstance& inst, std::size_t cap = 100000) {
    std::set<FactValuation> seen;
    std::vector<FactValuation> frontier;
    for (const auto& s : enumerate_initial_states_bruteforce_serial(inst, cap)) {
        if (seen.insert(s).second) frontier.push_back(s);
    }
    while (!frontier.empty()) {
        FactValuation v = frontier.back();
        frontier.pop_back();
        for (auto& w : successors(inst, v))
            if (seen.insert(w).second) frontier.push_back(w);
        if (seen.size() > cap) break;
    }
    return seen;
}

// Formula counts per schema, obtained by walking each schema's index ranges.
inline SchemaCensus census_by_ranges(const ProblemInstance& inst, const EncodingConfig& cfg, std::size_t init_terms,
                                     std::size_t invariants) {
    SchemaCensus c;
    auto bump = [&](const std::string& tag) { ++c[tag]; };
    const int T = cfg.t_max;
    const int No = static_cast<int>(inst.num_operators());
    const int Ns = cfg.n_states;
    const int B = static_cast<int>(inst.observables().size());
    for (int t = 0; t < T; ++t) {
        for (const auto& op : inst.operators()) {
            if (op.deterministic()) {
                bump("1.1");
            } else {
                bump("14.1");
                for (std::size_t a = 0; a < op.effects.size(); ++a) bump("14.2");
            }
        }
        for (const auto& r : inst.rules())
            for (std::size_t a = 0; a < r.alternatives.size(); ++a) bump("rule");
        for (std::size_t f = 0; f < inst.base_facts().size(); ++f) {
            bump("1.2");
            bump("1.2");
        }
        for (int i = 0; i < No; ++i)
            for (int j = i + 1; j < No; ++j)
                if (cfg.mutex == MutexMode::AllPairs || dependent(inst.op(i), inst.op(j))) bump("mutex");
    }
    for (int t = 0; t <= T; ++t)
        for (std::size_t d = 0; d < inst.defined_facts().size(); ++d) bump("def");
    if (cfg.kind == PlanKind::Automaton) {
        for (int i = 1; i <= Ns; ++i) {
            for (int j = 0; j < B; ++j)
                for (int k = 0; k < B; ++k)
                    if (j != k) bump("2.1");
            bump("2.2");
            for (int j = 1; j <= Ns; ++j)
                for (int k = 1; k <= Ns; ++k)
                    if (j != k) {
                        bump("3.1");
                        bump("3.2");
                    }
            bump("3.3");
            bump("3.4");
        }
        bump("4.1");
        for (int t = 0; t <= T; ++t)
            for (int i = 1; i <= Ns; ++i)
                for (int j = 1; j <= Ns; ++j)
                    if (i != j) bump("5.1");
        for (int t = 0; t < T; ++t)
            for (int i = 1; i <= Ns; ++i)
                for (int j = 1; j <= Ns; ++j)
                    for (int k = 0; k < B; ++k) {
                        bump("6.1");
                        bump("6.2");
                    }
        for (int t = 0; t < T; ++t)
            for (int i = 0; i < No; ++i) {
                for (int j = 1; j <= Ns; ++j) bump("7.1");
                bump("7.2");
            }
    } else if (cfg.kind == PlanKind::Phased) {
        for (int t = 0; t < T; ++t) {
            for (int i = 0; i < No; ++i) bump("8.1");
            for (int i = 1; i <= Ns; ++i) {
                if (i < Ns) bump("9.1");
                else bump("9.1a");
                bump("9.2");
            }
            for (int i = 0; i < No; ++i) {
                for (int s = 1; s <= Ns; ++s) bump("12.1");
                bump("12.2");
                bump("12.3");
            }
        }
        bump("10.1");
        for (int t = 0; t <= T; ++t)
            for (int i = 1; i <= Ns; ++i)
                for (int j = 1; j <= Ns; ++j)
                    if (i != j) bump("11.1");
    } else {
        for (int t = 0; t < T; ++t)
            for (int i = 0; i < No; ++i) bump("13.1");
    }
    if (cfg.quant == QuantMode::Aux) {
        std::size_t patterns = 1;
        while (patterns < init_terms) patterns *= 2;
        for (std::size_t p = 0; p < patterns; ++p) bump("Q");
        bump("goal");
        for (int t = 0; t <= T; ++t)
            for (std::size_t k = 0; k < invariants; ++k) bump("inv");
    } else {
        bump("init->goal");
    }
    return c;
}

}  // namespace qplan::qtest
