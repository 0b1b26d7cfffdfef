#include "qplan/invariants.hpp"

#include <algorithm>
#include <cstdint>
#include <deque>

namespace qplan {

namespace {

int code(Literal l) { return 2 * l.atom + (l.positive ? 0 : 1); }
Literal decode(int c) { return {c / 2, c % 2 == 0}; }

// Rows of the initial-state description: either padded DNF terms (free facts
// never satisfy a literal) or explicit states.
struct Rows {
    std::size_t n = 0;
    std::vector<std::vector<std::uint64_t>> sat;  // per literal code, bitset over rows

    bool covers(int a, int b) const {
        const auto& x = sat[static_cast<std::size_t>(a)];
        const auto& y = sat[static_cast<std::size_t>(b)];
        for (std::size_t w = 0; w < x.size(); ++w) {
            std::uint64_t want = (w + 1) * 64 <= n ? ~std::uint64_t{0} : ((std::uint64_t{1} << (n % 64)) - 1);
            if (((x[w] | y[w]) & want) != want) return false;
        }
        return true;
    }
};

Rows build_rows(const ProblemInstance& inst, const InvariantOptions& opts) {
    Rows r;
    const std::size_t lits = 2 * inst.num_facts();
    auto init_bits = [&](std::size_t n) {
        r.n = n;
        r.sat.assign(lits, std::vector<std::uint64_t>((n + 63) / 64, 0));
    };
    auto set = [&](int c, std::size_t row) { r.sat[static_cast<std::size_t>(c)][row / 64] |= std::uint64_t{1} << (row % 64); };
    try {
        InitialStateSpace space(inst, opts.dnf_cap);
        init_bits(space.terms().size());
        for (std::size_t i = 0; i < space.terms().size(); ++i)
            for (Literal l : space.terms()[i]) set(code(l), i);
    } catch (const DnfCapExceeded&) {
        auto states = enumerate_initial_states(inst, opts.state_cap);
        init_bits(states.size());
        for (std::size_t i = 0; i < states.size(); ++i)
            for (int f : inst.base_facts()) set(code({f, states[i][f]}), i);
    }
    return r;
}

struct Alt {
    int source = 0;  // operator index, or -1 - rule index
    const LiteralSet* pre = nullptr;
    const LiteralSet* eff = nullptr;
};

}  // namespace

std::vector<InvariantClause> synthesize_invariants(const ProblemInstance& inst, const InvariantOptions& opts) {
    const Rows rows = build_rows(inst, opts);
    const auto& base = inst.base_facts();

    std::vector<InvariantClause> cand;
    std::vector<int> codes;
    for (int f : base) {
        codes.push_back(code({f, true}));
        codes.push_back(code({f, false}));
    }
    for (int a : codes)
        if (rows.covers(a, a)) cand.push_back({{decode(a)}});
    for (std::size_t i = 0; i < codes.size(); ++i)
        for (std::size_t j = i + 1; j < codes.size(); ++j) {
            if (codes[i] / 2 == codes[j] / 2) continue;
            if (rows.covers(codes[i], codes[j])) cand.push_back({{decode(codes[i]), decode(codes[j])}});
        }

    std::vector<Alt> alts;
    for (const auto& op : inst.operators())
        for (const auto& e : op.effects) alts.push_back({op.index, &op.precondition, &e});
    for (std::size_t r = 0; r < inst.rules().size(); ++r)
        for (const auto& e : inst.rules()[r].alternatives)
            alts.push_back({-1 - static_cast<int>(r), &inst.rules()[r].precondition, &e});

    auto concurrent = [&](int s, int o) {
        if (s == o) return false;
        if (s < 0 || o < 0) return true;  // rules fire alongside anything
        if (opts.exclusive_operators) return false;
        return !dependent(inst.op(s), inst.op(o));
    };
    auto threatened = [&](int s, int c) {
        for (const auto& a : alts) {
            if (!concurrent(s, a.source)) continue;
            for (Literal l : *a.eff)
                if (code(l) == c) return true;
        }
        return false;
    };
    auto asserts = [](const LiteralSet& e, int c) {
        return std::any_of(e.begin(), e.end(), [&](Literal l) { return code(l) == c; });
    };

    const std::size_t ncodes = 2 * inst.num_facts();
    std::vector<bool> alive(cand.size(), true);
    bool changed = true;
    while (changed) {
        changed = false;
        std::vector<std::vector<int>> imp(ncodes);
        std::vector<int> units;
        for (std::size_t k = 0; k < cand.size(); ++k) {
            if (!alive[k]) continue;
            const auto& ls = cand[k].lits;
            if (ls.size() == 1) {
                units.push_back(code(ls[0]));
            } else {
                imp[static_cast<std::size_t>(code(ls[0].complement()))].push_back(code(ls[1]));
                imp[static_cast<std::size_t>(code(ls[1].complement()))].push_back(code(ls[0]));
            }
        }
        for (const auto& a : alts) {
            std::vector<std::uint8_t> known(ncodes, 0);
            std::deque<int> q;
            bool conflict = false;
            auto push = [&](int c) {
                if (known[static_cast<std::size_t>(c)]) return;
                if (known[static_cast<std::size_t>(c ^ 1)]) conflict = true;
                known[static_cast<std::size_t>(c)] = 1;
                q.push_back(c);
            };
            for (Literal l : *a.pre) push(code(l));
            for (int u : units) push(u);
            while (!q.empty() && !conflict) {
                int c = q.front();
                q.pop_front();
                for (int d : imp[static_cast<std::size_t>(c)]) push(d);
            }
            if (conflict) continue;  // never fires in a state satisfying the candidates
            for (std::size_t k = 0; k < cand.size(); ++k) {
                if (!alive[k]) continue;
                const auto& ls = cand[k].lits;
                for (std::size_t i = 0; i < ls.size() && alive[k]; ++i) {
                    if (!asserts(*a.eff, code(ls[i].complement()))) continue;
                    bool safe = false;
                    if (ls.size() == 2) {
                        int other = code(ls[1 - i]);
                        if (asserts(*a.eff, other)) {
                            safe = true;
                        } else if (known[static_cast<std::size_t>(other)] && !asserts(*a.eff, other ^ 1) &&
                                   !threatened(a.source, other ^ 1)) {
                            safe = true;
                        }
                    }
                    if (!safe) {
                        alive[k] = false;
                        changed = true;
                    }
                }
            }
        }
    }

    std::vector<InvariantClause> out;
    for (std::size_t k = 0; k < cand.size(); ++k)
        if (alive[k]) out.push_back(cand[k]);
    std::stable_sort(out.begin(), out.end(), [](const InvariantClause& x, const InvariantClause& y) {
        if (x.lits.size() != y.lits.size()) return x.lits.size() < y.lits.size();
        return x < y;
    });
    return out;
}

bool holds(const InvariantClause& c, const FactValuation& v) {
    return std::any_of(c.lits.begin(), c.lits.end(), [&](Literal l) { return v.holds(l); });
}

std::string to_string(const ProblemInstance& inst, const InvariantClause& c) {
    std::string s = "(";
    for (std::size_t i = 0; i < c.lits.size(); ++i) {
        if (i) s += " | ";
        s += inst.literal_name(c.lits[i]);
    }
    return s + ")";
}

}  // namespace qplan
