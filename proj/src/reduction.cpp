#include "qplan/reduction.hpp"

#include <atomic>
#include <cstdlib>
#include <deque>
#include <stdexcept>
#include <string>
#include <unordered_set>

namespace qplan {

ForallExistsQbf forall_exists_from(const QbfProblem& q) {
    std::vector<Block> blocks;
    for (const auto& b : q.prefix)
        if (!b.vars.empty()) blocks.push_back(b);
    std::vector<int> xs, ys;
    if (blocks.size() > 2 || (blocks.size() == 2 && (blocks[0].quant != Quant::Forall || blocks[1].quant != Quant::Exists)))
        throw std::invalid_argument("prefix is not of the form forall-exists");
    for (const auto& b : blocks) (b.quant == Quant::Forall ? xs : ys) = b.vars;
    std::vector<int> map(static_cast<std::size_t>(std::max(q.num_vars, 0)) + 1, 0);
    int next = 1;
    for (int v : xs) map[static_cast<std::size_t>(v)] = next++;
    for (int v : ys) map[static_cast<std::size_t>(v)] = next++;
    ForallExistsQbf f;
    f.n = static_cast<int>(xs.size());
    f.m = static_cast<int>(ys.size());
    for (const auto& c : q.matrix) {
        Clause out;
        for (int l : c) {
            int v = map.at(static_cast<std::size_t>(std::abs(l)));
            if (v == 0) throw std::invalid_argument("free variable " + std::to_string(std::abs(l)));
            out.push_back(l > 0 ? v : -v);
        }
        f.clauses.push_back(std::move(out));
    }
    return f;
}

QbfProblem to_qbf_problem(const ForallExistsQbf& f) {
    QbfProblem q;
    Block a{Quant::Forall, {}}, e{Quant::Exists, {}};
    for (int i = 1; i <= f.n; ++i) a.vars.push_back(i);
    for (int j = 1; j <= f.m; ++j) e.vars.push_back(f.n + j);
    q.prefix = {a, e};
    q.matrix = f.clauses;
    q.normalize_prefix();
    q.num_vars = f.n + f.m;
    return q;
}

ProblemInstance qbf_to_planning(const ForallExistsQbf& f) {
    const int t = static_cast<int>(f.clauses.size());
    std::vector<Fact> facts;
    auto add_fact = [&](std::string name) {
        int i = static_cast<int>(facts.size());
        facts.push_back({std::move(name), i, false, std::nullopt});
        return i;
    };
    const int sat = add_fact("sat");
    const int s = add_fact("s");
    std::vector<int> y, c, x;
    for (int j = 1; j <= f.m; ++j) y.push_back(add_fact("y" + std::to_string(j)));
    for (int j = 1; j <= t; ++j) c.push_back(add_fact("c" + std::to_string(j)));
    for (int i = 1; i <= f.n; ++i) x.push_back(add_fact("x" + std::to_string(i)));
    auto fact_of = [&](int v) {
        if (v >= 1 && v <= f.n) return x[static_cast<std::size_t>(v - 1)];
        if (v > f.n && v <= f.n + f.m) return y[static_cast<std::size_t>(v - f.n - 1)];
        throw std::invalid_argument("literal out of range: " + std::to_string(v));
    };

    std::vector<Operator> ops;
    auto add_op = [&](std::string name, LiteralSet pre, LiteralSet eff) {
        Operator o;
        o.name = std::move(name);
        o.index = static_cast<int>(ops.size());
        o.precondition = std::move(pre);
        o.effects = {std::move(eff)};
        ops.push_back(std::move(o));
    };
    for (int j = 0; j < f.m; ++j)
        add_op("set-y" + std::to_string(j + 1), {{s, true}}, {{y[static_cast<std::size_t>(j)], true}});
    LiteralSet all_c;
    for (int cj : c) all_c.push_back({cj, true});
    add_op("finish", all_c, {{sat, true}});
    for (int j = 0; j < t; ++j) {
        for (int l : f.clauses[static_cast<std::size_t>(j)]) {
            int v = std::abs(l);
            std::string lit = (l > 0 ? "" : "n") + (v <= f.n ? "x" + std::to_string(v) : "y" + std::to_string(v - f.n));
            add_op("c" + std::to_string(j + 1) + "-by-" + lit, {{fact_of(v), l > 0}},
                   {{c[static_cast<std::size_t>(j)], true}, {s, false}});
        }
    }

    std::vector<Formula> init{Formula::negate(Formula::atom(sat)), Formula::atom(s)};
    for (int v : y) init.push_back(Formula::negate(Formula::atom(v)));
    for (int v : c) init.push_back(Formula::negate(Formula::atom(v)));
    return ProblemInstance(std::move(facts), std::move(ops), {}, Formula::conj(std::move(init)), Formula::atom(sat));
}

namespace {

void require_deterministic(const ProblemInstance& inst) {
    if (!inst.rules().empty()) throw std::invalid_argument("search oracle needs a deterministic instance");
    for (const auto& op : inst.operators())
        if (!op.deterministic()) throw std::invalid_argument("search oracle needs deterministic operators");
}

bool reaches_goal(const ProblemInstance& inst, const FactValuation& s0, std::size_t cap) {
    auto key = [](const FactValuation& v) {
        return std::string(reinterpret_cast<const char*>(v.values().data()), v.values().size());
    };
    std::unordered_set<std::string> seen{key(s0)};
    std::deque<FactValuation> q{s0};
    while (!q.empty()) {
        FactValuation v = std::move(q.front());
        q.pop_front();
        if (eval(inst.goal(), v.values())) return true;
        for (const auto& op : inst.operators()) {
            if (!v.holds_all(op.precondition)) continue;
            FactValuation w = v;
            w.assign(inst, op.effects[0]);
            if (seen.insert(key(w)).second) {
                if (seen.size() > cap) throw CapExceeded("search state cap exceeded", seen.size());
                q.push_back(std::move(w));
            }
        }
    }
    return false;
}

}  // namespace

bool solvable_by_search(const ProblemInstance& inst, std::size_t state_cap) {
    require_deterministic(inst);
    auto states = enumerate_initial_states(inst, state_cap);
    const auto n = static_cast<std::int64_t>(states.size());
    std::atomic<bool> all{true};
    std::atomic<bool> capped{false};
    std::size_t reached = 0;
#pragma omp parallel for schedule(dynamic, 1)
    for (std::int64_t i = 0; i < n; ++i) {
        if (!all.load(std::memory_order_relaxed) || capped.load(std::memory_order_relaxed)) continue;
        try {
            if (!reaches_goal(inst, states[static_cast<std::size_t>(i)], state_cap)) all = false;
        } catch (const CapExceeded& e) {
#pragma omp critical
            reached = e.reached();
            capped = true;
        }
    }
    // a definite failure wins over a cap hit elsewhere
    if (!all) return false;
    if (capped) throw CapExceeded("search state cap exceeded", reached);
    return true;
}

bool solvable_by_search_serial(const ProblemInstance& inst, std::size_t state_cap) {
    require_deterministic(inst);
    for (const auto& s0 : enumerate_initial_states(inst, state_cap))
        if (!reaches_goal(inst, s0, state_cap)) return false;
    return true;
}

}  // namespace qplan
