#include "qplan/plan.hpp"

#include <algorithm>
#include <atomic>
#include <optional>
#include <random>
#include <tuple>

#include <json.hpp>

namespace qplan {

PlanKind kind_of(const Plan& p) {
    switch (p.index()) {
        case 0: return PlanKind::Automaton;
        case 1: return PlanKind::Phased;
        default: return PlanKind::Sequence;
    }
}

// ---------------------------------------------------------------------------
// extraction

Plan extract_plan(const EncodedProblem& ep, const std::vector<int>& witness) {
    const auto& atlas = ep.qbf.atlas;
    std::vector<std::uint8_t> val(static_cast<std::size_t>(atlas.max_var()) + 1, 0);
    for (int l : witness) {
        int v = std::abs(l);
        if (v < static_cast<int>(val.size())) val[static_cast<std::size_t>(v)] = l > 0;
    }
    const auto& cfg = ep.config;
    const int n = cfg.kind == PlanKind::Sequence ? cfg.t_max : cfg.n_states;
    std::vector<std::vector<int>> enabled(static_cast<std::size_t>(n));
    std::vector<std::vector<int>> cond(static_cast<std::size_t>(n)), st(static_cast<std::size_t>(n)),
        sf(static_cast<std::size_t>(n));
    for (int v : ep.plan_vars) {
        if (!val[static_cast<std::size_t>(v)]) continue;
        const auto& id = atlas.identity(v);
        switch (id.role) {
            case Role::Enabled: {
                int slot = cfg.kind == PlanKind::Sequence ? id.b : id.b - 1;
                enabled.at(static_cast<std::size_t>(slot)).push_back(id.a);
                break;
            }
            case Role::Cond: cond.at(static_cast<std::size_t>(id.a - 1)).push_back(id.b); break;
            case Role::SuccT: st.at(static_cast<std::size_t>(id.a - 1)).push_back(id.b); break;
            case Role::SuccF: sf.at(static_cast<std::size_t>(id.a - 1)).push_back(id.b); break;
            default: throw MalformedWitness("unexpected plan variable " + atlas.name(v));
        }
    }
    for (auto& e : enabled) std::sort(e.begin(), e.end());
    switch (cfg.kind) {
        case PlanKind::Sequence: return SequencePlan{cfg.t_max, std::move(enabled)};
        case PlanKind::Phased: return PhasedPlan{cfg.n_states, std::move(enabled)};
        case PlanKind::Automaton: break;
    }
    AutomatonPlan a;
    a.n_states = cfg.n_states;
    a.enabled = std::move(enabled);
    auto one = [](const std::vector<int>& xs, const char* what, int state) {
        if (xs.size() != 1)
            throw MalformedWitness(std::string(what) + " of state " + std::to_string(state) + " is not unique");
        return xs.front();
    };
    for (int i = 0; i < n; ++i) {
        a.condition.push_back(one(cond[static_cast<std::size_t>(i)], "condition", i + 1));
        a.succ_true.push_back(one(st[static_cast<std::size_t>(i)], "true successor", i + 1));
        a.succ_false.push_back(one(sf[static_cast<std::size_t>(i)], "false successor", i + 1));
    }
    return a;
}

// ---------------------------------------------------------------------------
// runtime

ChoiceFn first_alternative() {
    return [](int, int, std::size_t) { return std::size_t{0}; };
}

ChoiceFn table_choices(std::vector<std::vector<std::size_t>> table) {
    return [table = std::move(table)](int source, int t, std::size_t) -> std::size_t {
        if (t < 0 || static_cast<std::size_t>(t) >= table.size()) return 0;
        const auto& row = table[static_cast<std::size_t>(t)];
        if (source < 0 || static_cast<std::size_t>(source) >= row.size()) return 0;
        return row[static_cast<std::size_t>(source)];
    };
}

bool applicable(const Operator& op, const FactValuation& v) {
    if (!v.holds_all(op.precondition)) return false;
    for (const auto& e : op.effects)
        for (Literal l : e)
            if (!v.holds(l)) return true;
    return false;
}

namespace {

// Applies the fired operators and every rule whose precondition holds.
// Returns false on contradictory effects.
bool step(const ProblemInstance& inst, TraceStep& cur_step, int t, const ChoiceFn& choices, FactValuation& next) {
    const FactValuation& cur = cur_step.facts;
    const std::vector<int>& fired = cur_step.fired;
    std::vector<Literal> lits;
    auto pick = [&](int src, std::size_t k) { return k == 1 ? 0 : std::min(choices(src, t, k), k - 1); };
    for (int o : fired) {
        const auto& op = inst.op(o);
        const auto& e = op.effects[pick(o, op.effects.size())];
        lits.insert(lits.end(), e.begin(), e.end());
    }
    const int n_ops = static_cast<int>(inst.num_operators());
    for (std::size_t r = 0; r < inst.rules().size(); ++r) {
        const auto& rule = inst.rules()[r];
        if (!cur.holds_all(rule.precondition)) continue;
        std::size_t a = pick(n_ops + static_cast<int>(r), rule.alternatives.size());
        cur_step.rules.emplace_back(static_cast<int>(r), a);
        const auto& e = rule.alternatives[a];
        lits.insert(lits.end(), e.begin(), e.end());
    }
    std::sort(lits.begin(), lits.end());
    for (std::size_t i = 0; i + 1 < lits.size(); ++i)
        if (lits[i].atom == lits[i + 1].atom && lits[i].positive != lits[i + 1].positive) return false;
    next = cur;
    next.assign(inst, lits);
    return true;
}

void check_states(int n, std::size_t got, const char* what) {
    if (n < 1 || got != static_cast<std::size_t>(n))
        throw std::invalid_argument(std::string("plan ") + what + " does not match its state count");
}

void check_ops(const ProblemInstance& inst, const std::vector<std::vector<int>>& enabled) {
    for (const auto& e : enabled)
        for (int o : e)
            if (o < 0 || static_cast<std::size_t>(o) >= inst.num_operators())
                throw std::invalid_argument("plan enables unknown operator " + std::to_string(o));
}

}  // namespace

ExecutionTrace execute_automaton(const AutomatonPlan& p, const ProblemInstance& inst, const FactValuation& s0,
                                 int t_max, const ChoiceFn& choices) {
    check_states(p.n_states, p.enabled.size(), "enabled sets");
    check_states(p.n_states, p.condition.size(), "conditions");
    check_states(p.n_states, p.succ_true.size(), "successors");
    check_states(p.n_states, p.succ_false.size(), "successors");
    check_ops(inst, p.enabled);
    ExecutionTrace tr;
    int s = 1;
    tr.steps.push_back({0, s, s0, {}, {}});
    for (int t = 0; t < t_max; ++t) {
        const FactValuation& v = tr.steps.back().facts;
        std::vector<int> fired;
        for (int o : p.enabled[static_cast<std::size_t>(s - 1)])
            if (v.holds_all(inst.op(o).precondition)) fired.push_back(o);
        tr.steps.back().fired = fired;
        FactValuation next;
        if (!step(inst, tr.steps.back(), t, choices, next)) {
            tr.effect_conflict = true;
            tr.conflict_t = t;
            return tr;
        }
        const auto i = static_cast<std::size_t>(s - 1);
        s = v[p.condition[i]] ? p.succ_true[i] : p.succ_false[i];
        if (s < 1 || s > p.n_states) throw std::invalid_argument("successor state out of range");
        tr.steps.push_back({t + 1, s, std::move(next), {}, {}});
    }
    return tr;
}

ExecutionTrace execute_phased(const PhasedPlan& p, const ProblemInstance& inst, const FactValuation& s0, int t_max,
                              const ChoiceFn& choices) {
    check_states(p.n_states, p.enabled.size(), "enabled sets");
    check_ops(inst, p.enabled);
    ExecutionTrace tr;
    int s = 1;
    tr.steps.push_back({0, s, s0, {}, {}});
    for (int t = 0; t < t_max; ++t) {
        const FactValuation& v = tr.steps.back().facts;
        const auto& en = p.enabled[static_cast<std::size_t>(s - 1)];
        std::vector<int> fired;
        for (int o : en)
            if (applicable(inst.op(o), v)) fired.push_back(o);
        tr.steps.back().fired = fired;
        FactValuation next;
        if (!step(inst, tr.steps.back(), t, choices, next)) {
            tr.effect_conflict = true;
            tr.conflict_t = t;
            return tr;
        }
        bool still = std::any_of(en.begin(), en.end(), [&](int o) { return applicable(inst.op(o), next); });
        if (!still) s = std::min(s + 1, p.n_states);
        tr.steps.push_back({t + 1, s, std::move(next), {}, {}});
    }
    return tr;
}

ExecutionTrace execute_sequence(const SequencePlan& p, const ProblemInstance& inst, const FactValuation& s0,
                                const ChoiceFn& choices) {
    if (p.t_max < 0 || p.enabled.size() != static_cast<std::size_t>(p.t_max))
        throw std::invalid_argument("sequence plan length does not match tmax");
    check_ops(inst, p.enabled);
    ExecutionTrace tr;
    tr.steps.push_back({0, 0, s0, {}, {}});
    for (int t = 0; t < p.t_max; ++t) {
        const FactValuation& v = tr.steps.back().facts;
        std::vector<int> fired;
        for (int o : p.enabled[static_cast<std::size_t>(t)])
            if (applicable(inst.op(o), v)) fired.push_back(o);
        tr.steps.back().fired = fired;
        FactValuation next;
        if (!step(inst, tr.steps.back(), t, choices, next)) {
            tr.effect_conflict = true;
            tr.conflict_t = t;
            return tr;
        }
        tr.steps.push_back({t + 1, 0, std::move(next), {}, {}});
    }
    return tr;
}

ExecutionTrace execute(const Plan& p, const ProblemInstance& inst, const FactValuation& s0, int t_max,
                       const ChoiceFn& choices) {
    if (const auto* a = std::get_if<AutomatonPlan>(&p)) return execute_automaton(*a, inst, s0, t_max, choices);
    if (const auto* ph = std::get_if<PhasedPlan>(&p)) return execute_phased(*ph, inst, s0, t_max, choices);
    const auto& seq = std::get<SequencePlan>(p);
    if (t_max == seq.t_max || t_max < 0) return execute_sequence(seq, inst, s0, choices);
    // cut the plan short, or pad it with steps that enable nothing
    SequencePlan q = seq;
    q.t_max = t_max;
    q.enabled.resize(static_cast<std::size_t>(t_max));
    return execute_sequence(q, inst, s0, choices);
}

std::string format_trace(const ProblemInstance& inst, const ExecutionTrace& tr) {
    std::string out;
    for (const auto& st : tr.steps) {
        out += "t=" + std::to_string(st.t) + " state=" + (st.state ? std::to_string(st.state) : "-") + " fired=[";
        for (std::size_t i = 0; i < st.fired.size(); ++i) {
            if (i) out += ',';
            out += inst.op(st.fired[i]).name;
        }
        out += "] facts={";
        for (std::size_t f = 0; f < inst.num_facts(); ++f) {
            if (f) out += ',';
            out += inst.fact_name(static_cast<int>(f)) + ":" + (st.facts[static_cast<int>(f)] ? "1" : "0");
        }
        out += "}\n";
    }
    if (tr.effect_conflict) out += "conflict at t=" + std::to_string(tr.conflict_t) + "\n";
    return out;
}

// ---------------------------------------------------------------------------
// verification

namespace {

std::uint64_t splitmix(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

struct Initials {
    std::optional<InitialStateSpace> space;
    std::vector<FactValuation> listed;

    Initials(const ProblemInstance& inst, const VerifyOptions& o) {
        try {
            space.emplace(inst, o.dnf_cap);
        } catch (const DnfCapExceeded&) {
            listed = enumerate_initial_states(inst, o.scenario_cap);
        }
    }
    std::uint64_t count() const { return space ? space->count() : listed.size(); }
    FactValuation at(std::uint64_t i) const { return space ? space->state(i) : listed[i]; }
};

struct Found {
    std::uint64_t key = 0;
    VerificationFailure f;
};

const char* judge(const ProblemInstance& inst, const ExecutionTrace& tr) {
    if (tr.effect_conflict) return "effect conflict";
    if (!eval(inst.goal(), tr.final_facts().values())) return "goal not reached";
    return nullptr;
}

// Every resolution of the nondeterminism from one initial state, in odometer
// order. Stops once `limit` scenarios have been produced; returns the count.
std::uint64_t explore(const Plan& p, const ProblemInstance& inst, int t_max, const FactValuation& s0,
                      std::uint64_t limit, std::uint64_t key_base, std::vector<Found>& found, std::size_t keep) {
    std::vector<std::size_t> d, radix;
    std::uint64_t n = 0;
    while (true) {
        std::size_t pos = 0;
        ChoiceFn fn = [&](int, int, std::size_t k) {
            if (pos == d.size()) {
                d.push_back(0);
                radix.push_back(k);
            }
            return d[pos++];
        };
        ExecutionTrace tr = execute(p, inst, s0, t_max, fn);
        d.resize(pos);
        radix.resize(pos);
        if (const char* why = judge(inst, tr)) {
            if (found.size() < keep) found.push_back({key_base + n, {s0, d, why}});
            else found.push_back({key_base + n, {}});
        }
        if (++n >= limit) return n;
        while (!d.empty() && d.back() + 1 >= radix.back()) {
            d.pop_back();
            radix.pop_back();
        }
        if (d.empty()) return n;
        ++d.back();
    }
}

Found sample(const Plan& p, const ProblemInstance& inst, int t_max, const Initials& init, std::uint64_t seed,
             std::uint64_t i, bool& failed) {
    std::uint64_t h = splitmix(seed ^ splitmix(i));
    FactValuation s0 = init.at(h % init.count());
    std::mt19937_64 rng(h);
    std::vector<std::size_t> used;
    ChoiceFn fn = [&](int, int, std::size_t k) {
        std::size_t a = static_cast<std::size_t>(rng() % k);
        used.push_back(a);
        return a;
    };
    ExecutionTrace tr = execute(p, inst, s0, t_max, fn);
    const char* why = judge(inst, tr);
    failed = why != nullptr;
    if (!failed) return {};
    return {i, {std::move(s0), std::move(used), why}};
}

void finish(VerificationReport& r, std::vector<Found>& found, std::size_t keep) {
    std::sort(found.begin(), found.end(), [](const Found& a, const Found& b) { return a.key < b.key; });
    r.failure_count = found.size();
    for (std::size_t i = 0; i < found.size() && r.failures.size() < keep; ++i)
        if (!found[i].f.reason.empty()) r.failures.push_back(std::move(found[i].f));
    r.valid = r.failure_count == 0;
}

VerificationReport verify_impl(const Plan& p, const ProblemInstance& inst, int t_max, const VerifyOptions& o,
                               bool parallel) {
    const Initials init(inst, o);
    VerificationReport r;
    const std::uint64_t n0 = init.count();
    const std::uint64_t cap = std::max<std::uint64_t>(o.scenario_cap, 1);
    // Failure bookkeeping is per initial state; only the first `keep` per state
    // carry details, the global first `keep` are selected after sorting.
    const std::size_t keep = o.max_failures;
    const std::uint64_t stride = cap + 1;

    if (n0 <= cap) {
        std::atomic<std::uint64_t> total{0};
        std::atomic<bool> over{false};
        std::vector<Found> found;
        const auto n = static_cast<std::int64_t>(n0);
        if (parallel) {
#pragma omp parallel
            {
                std::vector<Found> local;
#pragma omp for schedule(dynamic, 16)
                for (std::int64_t i = 0; i < n; ++i) {
                    if (over.load(std::memory_order_relaxed)) continue;
                    auto u = static_cast<std::uint64_t>(i);
                    std::uint64_t got = explore(p, inst, t_max, init.at(u), cap + 1, u * stride, local, keep);
                    if (total.fetch_add(got) + got > cap) over = true;
                }
#pragma omp critical
                found.insert(found.end(), std::make_move_iterator(local.begin()), std::make_move_iterator(local.end()));
            }
        } else {
            for (std::int64_t i = 0; i < n && !over; ++i) {
                auto u = static_cast<std::uint64_t>(i);
                std::uint64_t got = explore(p, inst, t_max, init.at(u), cap + 1, u * stride, found, keep);
                total += got;
                if (total > cap) over = true;
            }
        }
        if (!over) {
            r.exhaustive = true;
            r.scenarios = total;
            finish(r, found, keep);
            return r;
        }
    }

    std::vector<Found> found;
    const auto n = static_cast<std::int64_t>(cap);
    if (parallel) {
#pragma omp parallel
        {
            std::vector<Found> local;
#pragma omp for schedule(dynamic, 64)
            for (std::int64_t i = 0; i < n; ++i) {
                bool failed = false;
                Found f = sample(p, inst, t_max, init, o.seed, static_cast<std::uint64_t>(i), failed);
                if (failed) local.push_back(std::move(f));
            }
#pragma omp critical
            found.insert(found.end(), std::make_move_iterator(local.begin()), std::make_move_iterator(local.end()));
        }
    } else {
        for (std::int64_t i = 0; i < n; ++i) {
            bool failed = false;
            Found f = sample(p, inst, t_max, init, o.seed, static_cast<std::uint64_t>(i), failed);
            if (failed) found.push_back(std::move(f));
        }
    }
    r.exhaustive = false;
    r.scenarios = cap;
    finish(r, found, keep);
    return r;
}

}  // namespace

VerificationReport verify_plan(const Plan& p, const ProblemInstance& inst, int t_max, const VerifyOptions& opts) {
    return verify_impl(p, inst, t_max, opts, true);
}

VerificationReport verify_plan_serial(const Plan& p, const ProblemInstance& inst, int t_max,
                                      const VerifyOptions& opts) {
    return verify_impl(p, inst, t_max, opts, false);
}

// ---------------------------------------------------------------------------
// JSON

using nlohmann::json;

namespace {

json names(const ProblemInstance& inst, const std::vector<std::vector<int>>& enabled) {
    json arr = json::array();
    for (const auto& e : enabled) {
        json row = json::array();
        for (int o : e) row.push_back(inst.op(o).name);
        arr.push_back(row);
    }
    return arr;
}

std::vector<std::vector<int>> read_enabled(const json& j, const ProblemInstance& inst, std::size_t rows) {
    if (!j.contains("enabled") || !j["enabled"].is_array()) throw PlanFormatError("missing 'enabled'");
    const json& arr = j["enabled"];
    if (arr.size() != rows)
        throw PlanFormatError("'enabled' has " + std::to_string(arr.size()) + " rows, expected " + std::to_string(rows));
    std::vector<std::vector<int>> out;
    for (const auto& row : arr) {
        if (!row.is_array()) throw PlanFormatError("'enabled' rows must be arrays");
        std::vector<int> ops;
        for (const auto& n : row) {
            if (!n.is_string()) throw PlanFormatError("operator names must be strings");
            auto idx = inst.operator_index(n.get<std::string>());
            if (!idx) throw PlanFormatError("unknown operator '" + n.get<std::string>() + "'");
            ops.push_back(*idx);
        }
        std::sort(ops.begin(), ops.end());
        ops.erase(std::unique(ops.begin(), ops.end()), ops.end());
        out.push_back(std::move(ops));
    }
    return out;
}

int read_positive(const json& j, const char* key) {
    if (!j.contains(key) || !j[key].is_number_integer()) throw PlanFormatError(std::string("missing '") + key + "'");
    int v = j[key].get<int>();
    if (v < 1) throw PlanFormatError(std::string("'") + key + "' must be positive");
    return v;
}

}  // namespace

std::string plan_to_json(const Plan& p, const ProblemInstance& inst) {
    json j;
    j["kind"] = to_string(kind_of(p));
    if (const auto* s = std::get_if<SequencePlan>(&p)) {
        j["tmax"] = s->t_max;
        j["enabled"] = names(inst, s->enabled);
    } else if (const auto* ph = std::get_if<PhasedPlan>(&p)) {
        j["states"] = ph->n_states;
        j["enabled"] = names(inst, ph->enabled);
    } else {
        const auto& a = std::get<AutomatonPlan>(p);
        j["states"] = a.n_states;
        json c = json::array();
        for (int f : a.condition) c.push_back(inst.fact_name(f));
        j["condition"] = c;
        j["succ_true"] = a.succ_true;
        j["succ_false"] = a.succ_false;
        j["enabled"] = names(inst, a.enabled);
    }
    return j.dump(2) + "\n";
}

Plan plan_from_json(std::string_view text, const ProblemInstance& inst) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::parse_error& e) {
        throw PlanFormatError(e.what());
    }
    if (!j.is_object() || !j.contains("kind") || !j["kind"].is_string()) throw PlanFormatError("missing 'kind'");
    PlanKind k;
    try {
        k = parse_plan_kind(j["kind"].get<std::string>());
    } catch (const std::invalid_argument& e) {
        throw PlanFormatError(e.what());
    }
    if (k == PlanKind::Sequence) {
        int t = read_positive(j, "tmax");
        return SequencePlan{t, read_enabled(j, inst, static_cast<std::size_t>(t))};
    }
    int n = read_positive(j, "states");
    auto enabled = read_enabled(j, inst, static_cast<std::size_t>(n));
    if (k == PlanKind::Phased) return PhasedPlan{n, std::move(enabled)};
    AutomatonPlan a;
    a.n_states = n;
    a.enabled = std::move(enabled);
    auto states = [&](const char* key) {
        if (!j.contains(key) || !j[key].is_array() || j[key].size() != static_cast<std::size_t>(n))
            throw PlanFormatError(std::string("'") + key + "' must list one state per state");
        std::vector<int> out;
        for (const auto& x : j[key]) {
            if (!x.is_number_integer() || x.get<int>() < 1 || x.get<int>() > n)
                throw PlanFormatError(std::string("'") + key + "' entry out of range");
            out.push_back(x.get<int>());
        }
        return out;
    };
    a.succ_true = states("succ_true");
    a.succ_false = states("succ_false");
    if (!j.contains("condition") || !j["condition"].is_array() || j["condition"].size() != static_cast<std::size_t>(n))
        throw PlanFormatError("'condition' must list one fact per state");
    for (const auto& c : j["condition"]) {
        if (!c.is_string()) throw PlanFormatError("condition entries must be fact names");
        auto f = inst.fact_index(c.get<std::string>());
        if (!f) throw PlanFormatError("unknown fact '" + c.get<std::string>() + "'");
        a.condition.push_back(*f);
    }
    return a;
}

}  // namespace qplan
