#include "qplan/encoder.hpp"

#include <algorithm>
#include <set>

namespace qplan {

std::string to_string(PlanKind k) {
    switch (k) {
        case PlanKind::Automaton: return "automaton";
        case PlanKind::Phased: return "phased";
        case PlanKind::Sequence: return "sequence";
    }
    return "?";
}

std::string to_string(QuantMode m) { return m == QuantMode::Aux ? "aux" : "direct"; }

PlanKind parse_plan_kind(const std::string& s) {
    if (s == "automaton") return PlanKind::Automaton;
    if (s == "phased") return PlanKind::Phased;
    if (s == "sequence") return PlanKind::Sequence;
    throw std::invalid_argument("unknown plan kind '" + s + "'");
}

QuantMode parse_quant_mode(const std::string& s) {
    if (s == "aux") return QuantMode::Aux;
    if (s == "direct") return QuantMode::Direct;
    throw std::invalid_argument("unknown quantification mode '" + s + "'");
}

MutexMode parse_mutex_mode(const std::string& s) {
    if (s == "dep" || s == "dependent") return MutexMode::DependentPairs;
    if (s == "all") return MutexMode::AllPairs;
    throw std::invalid_argument("unknown mutex mode '" + s + "'");
}

int fact_var(VariableAtlas& atlas, int fact, int t) { return atlas.intern({Role::FactAt, fact, t, 0}); }
int op_var(VariableAtlas& atlas, int op, int t) { return atlas.intern({Role::OpAt, op, t, 0}); }

int choice_bits(std::size_t k) {
    int b = 0;
    while ((std::size_t{1} << b) < k) ++b;
    return b;
}

namespace {

Formula var(int v) { return Formula::atom(v); }
Formula nvar(int v) { return Formula::negate(Formula::atom(v)); }

Formula lit_at(VariableAtlas& atlas, Literal l, int t) {
    return Formula::literal({fact_var(atlas, l.atom, t), l.positive});
}

Formula conj_at(VariableAtlas& atlas, const LiteralSet& lits, int t) {
    std::vector<Formula> fs;
    for (Literal l : lits) fs.push_back(lit_at(atlas, l, t));
    return Formula::conj(std::move(fs));
}

Formula formula_at(VariableAtlas& atlas, const Formula& f, int t) {
    return f.map_atoms([&](int a) { return var(fact_var(atlas, a, t)); });
}

Formula pattern(VariableAtlas& atlas, int source, int t, std::size_t p, int bits) {
    std::vector<Formula> fs;
    for (int j = 0; j < bits; ++j) {
        int c = atlas.intern({Role::Choice, source, j, t});
        fs.push_back(((p >> j) & 1U) ? nvar(c) : var(c));
    }
    return Formula::conj(std::move(fs));
}

int enabled_var(VariableAtlas& atlas, int op, int at) { return atlas.intern({Role::Enabled, op, at, 0}); }
int state_var(VariableAtlas& atlas, int s, int t) { return atlas.intern({Role::StateAt, s, t, 0}); }

void add(std::vector<TaggedFormula>& out, const char* tag, Formula f) { out.push_back({tag, std::move(f)}); }

std::uint64_t mutex_pairs(const ProblemInstance& inst, MutexMode mode) {
    std::uint64_t n = 0;
    const auto& ops = inst.operators();
    for (std::size_t i = 0; i < ops.size(); ++i)
        for (std::size_t j = i + 1; j < ops.size(); ++j)
            if (mode == MutexMode::AllPairs || dependent(ops[i], ops[j])) ++n;
    return n;
}

void require_states(int n_states) {
    if (n_states < 1) throw EncodeError("number of plan states must be at least 1");
}

}  // namespace

Formula choice_condition(VariableAtlas& atlas, int source, int t, std::size_t alt, std::size_t k) {
    const int bits = choice_bits(k);
    if (alt + 1 < k) return pattern(atlas, source, t, alt, bits);
    std::vector<Formula> ps;
    for (std::size_t p = k - 1; p < (std::size_t{1} << bits); ++p) ps.push_back(pattern(atlas, source, t, p, bits));
    return ps.size() == 1 ? ps.front() : Formula::disj(std::move(ps));
}

Formula achieved_at(VariableAtlas& atlas, const Operator& op, int t) {
    std::set<Literal> all;
    for (const auto& e : op.effects) all.insert(e.begin(), e.end());
    return conj_at(atlas, LiteralSet(all.begin(), all.end()), t);
}

std::vector<TaggedFormula> encode_execution(const ProblemInstance& inst, int t_max, VariableAtlas& atlas,
                                            MutexMode mutex) {
    std::vector<TaggedFormula> out;
    const auto& ops = inst.operators();
    const int n_ops = static_cast<int>(ops.size());
    for (int t = 0; t < t_max; ++t) {
        for (const auto& op : ops) {
            int o = op_var(atlas, op.index, t);
            if (op.deterministic()) {
                add(out, "1.1",
                    Formula::implies(var(o), Formula::conj({conj_at(atlas, op.precondition, t),
                                                            conj_at(atlas, op.effects[0], t + 1)})));
                continue;
            }
            add(out, "14.1", Formula::implies(var(o), conj_at(atlas, op.precondition, t)));
            for (std::size_t a = 0; a < op.effects.size(); ++a)
                add(out, "14.2",
                    Formula::implies(
                        Formula::conj({var(o), choice_condition(atlas, op.index, t, a, op.effects.size())}),
                        conj_at(atlas, op.effects[a], t + 1)));
        }
        for (std::size_t r = 0; r < inst.rules().size(); ++r) {
            const auto& rule = inst.rules()[r];
            int src = n_ops + static_cast<int>(r);
            for (std::size_t a = 0; a < rule.alternatives.size(); ++a)
                add(out, "rule",
                    Formula::implies(Formula::conj({conj_at(atlas, rule.precondition, t),
                                                    choice_condition(atlas, src, t, a, rule.alternatives.size())}),
                                     conj_at(atlas, rule.alternatives[a], t + 1)));
        }
        // frame: a literal becomes true only through a source asserting it
        for (int f : inst.base_facts()) {
            for (bool pos : {true, false}) {
                Literal l{f, pos};
                std::vector<Formula> d{lit_at(atlas, l, t), lit_at(atlas, l.complement(), t + 1)};
                auto causes = [&](const std::vector<LiteralSet>& alts, Formula guard, int src) {
                    std::vector<std::size_t> hit;
                    for (std::size_t a = 0; a < alts.size(); ++a)
                        if (std::find(alts[a].begin(), alts[a].end(), l) != alts[a].end()) hit.push_back(a);
                    if (hit.empty()) return;
                    if (hit.size() == alts.size()) {
                        d.push_back(std::move(guard));
                        return;
                    }
                    std::vector<Formula> cs;
                    for (std::size_t a : hit) cs.push_back(choice_condition(atlas, src, t, a, alts.size()));
                    d.push_back(Formula::conj(
                        {std::move(guard), cs.size() == 1 ? cs.front() : Formula::disj(std::move(cs))}));
                };
                for (const auto& op : ops) causes(op.effects, var(op_var(atlas, op.index, t)), op.index);
                for (std::size_t r = 0; r < inst.rules().size(); ++r)
                    causes(inst.rules()[r].alternatives, conj_at(atlas, inst.rules()[r].precondition, t),
                           n_ops + static_cast<int>(r));
                add(out, "1.2", Formula::disj(std::move(d)));
            }
        }
        for (int i = 0; i < n_ops; ++i)
            for (int j = i + 1; j < n_ops; ++j)
                if (mutex == MutexMode::AllPairs || dependent(ops[i], ops[j]))
                    add(out, "mutex", Formula::disj({nvar(op_var(atlas, i, t)), nvar(op_var(atlas, j, t))}));
    }
    for (int t = 0; t <= t_max; ++t)
        for (int d : inst.defined_facts())
            add(out, "def", Formula::iff(var(fact_var(atlas, d, t)), formula_at(atlas, *inst.fact(d).defined_by, t)));
    return out;
}

std::vector<TaggedFormula> encode_automaton_plan(const ProblemInstance& inst, int t_max, int n_states,
                                                 VariableAtlas& atlas) {
    require_states(n_states);
    const auto& obs = inst.observables();
    if (obs.empty()) throw EncodeError("automaton plans need at least one observable fact");
    std::vector<TaggedFormula> out;
    auto cond = [&](int i, int j) { return atlas.intern({Role::Cond, i, j, 0}); };
    auto succ = [&](Role r, int i, int j) { return atlas.intern({r, i, j, 0}); };
    auto succ_t = [&](int i, int j) { return succ(Role::SuccT, i, j); };
    auto succ_f = [&](int i, int j) { return succ(Role::SuccF, i, j); };
    const int ns = n_states;

    for (int i = 1; i <= ns; ++i)
        for (int j : obs)
            for (int k : obs)
                if (j != k) add(out, "2.1", Formula::implies(var(cond(i, j)), nvar(cond(i, k))));
    for (int i = 1; i <= ns; ++i) {
        std::vector<Formula> d;
        for (int j : obs) d.push_back(var(cond(i, j)));
        add(out, "2.2", Formula::disj(std::move(d)));
    }
    for (auto [tag, r] : {std::pair{"3.1", Role::SuccT}, std::pair{"3.2", Role::SuccF}})
        for (int i = 1; i <= ns; ++i)
            for (int j = 1; j <= ns; ++j)
                for (int k = 1; k <= ns; ++k)
                    if (j != k) add(out, tag, Formula::implies(var(succ(r, i, j)), nvar(succ(r, i, k))));
    for (auto [tag, r] : {std::pair{"3.3", Role::SuccT}, std::pair{"3.4", Role::SuccF}})
        for (int i = 1; i <= ns; ++i) {
            std::vector<Formula> d;
            for (int j = 1; j <= ns; ++j) d.push_back(var(succ(r, i, j)));
            add(out, tag, Formula::disj(std::move(d)));
        }
    add(out, "4.1", var(state_var(atlas, 1, 0)));
    for (int t = 0; t <= t_max; ++t)
        for (int i = 1; i <= ns; ++i)
            for (int j = 1; j <= ns; ++j)
                if (i != j) add(out, "5.1", Formula::implies(var(state_var(atlas, i, t)), nvar(state_var(atlas, j, t))));
    for (int t = 0; t < t_max; ++t)
        for (int i = 1; i <= ns; ++i)
            for (int j = 1; j <= ns; ++j)
                for (int k : obs) {
                    int p = fact_var(atlas, k, t);
                    add(out, "6.1",
                        Formula::implies(Formula::conj({var(state_var(atlas, i, t)), var(cond(i, k)), var(p),
                                                        var(succ_t(i, j))}),
                                         var(state_var(atlas, j, t + 1))));
                    add(out, "6.2",
                        Formula::implies(Formula::conj({var(state_var(atlas, i, t)), var(cond(i, k)), nvar(p),
                                                        var(succ_f(i, j))}),
                                         var(state_var(atlas, j, t + 1))));
                }
    for (int t = 0; t < t_max; ++t)
        for (const auto& op : inst.operators()) {
            int o = op_var(atlas, op.index, t);
            std::vector<Formula> d;
            for (int s = 1; s <= ns; ++s) {
                Formula es = Formula::conj({var(enabled_var(atlas, op.index, s)), var(state_var(atlas, s, t))});
                add(out, "7.1", Formula::implies(Formula::conj({es, conj_at(atlas, op.precondition, t)}), var(o)));
                d.push_back(es);
            }
            add(out, "7.2", Formula::implies(var(o), Formula::disj(std::move(d))));
        }
    return out;
}

std::vector<TaggedFormula> encode_phased_plan(const ProblemInstance& inst, int t_max, int n_states,
                                              VariableAtlas& atlas) {
    require_states(n_states);
    std::vector<TaggedFormula> out;
    const int ns = n_states;
    auto appl = [&](int o, int t) { return atlas.intern({Role::ApplAt, o, t, 0}); };
    auto enabled_now = [&](const Operator& op, int t) {
        std::vector<Formula> d;
        for (int s = 1; s <= ns; ++s)
            d.push_back(Formula::conj({var(enabled_var(atlas, op.index, s)), var(state_var(atlas, s, t))}));
        return Formula::disj(std::move(d));
    };

    for (int t = 1; t <= t_max; ++t)
        for (const auto& op : inst.operators())
            add(out, "8.1",
                Formula::iff(var(appl(op.index, t)),
                             Formula::conj({conj_at(atlas, op.precondition, t),
                                            Formula::negate(achieved_at(atlas, op, t)), enabled_now(op, t - 1)})));
    for (int t = 0; t < t_max; ++t) {
        std::vector<Formula> none, any;
        for (const auto& op : inst.operators()) {
            none.push_back(nvar(appl(op.index, t + 1)));
            any.push_back(var(appl(op.index, t + 1)));
        }
        for (int i = 1; i < ns; ++i)
            add(out, "9.1",
                Formula::implies(Formula::conj({var(state_var(atlas, i, t)), Formula::conj(none)}),
                                 var(state_var(atlas, i + 1, t + 1))));
        add(out, "9.1a",
            Formula::implies(Formula::conj({var(state_var(atlas, ns, t)), Formula::conj(none)}),
                             var(state_var(atlas, ns, t + 1))));
        for (int i = 1; i <= ns; ++i)
            add(out, "9.2",
                Formula::implies(Formula::conj({var(state_var(atlas, i, t)), Formula::disj(any)}),
                                 var(state_var(atlas, i, t + 1))));
    }
    add(out, "10.1", var(state_var(atlas, 1, 0)));
    for (int t = 0; t <= t_max; ++t)
        for (int i = 1; i <= ns; ++i)
            for (int j = 1; j <= ns; ++j)
                if (i != j)
                    add(out, "11.1", Formula::implies(var(state_var(atlas, i, t)), nvar(state_var(atlas, j, t))));
    for (int t = 0; t < t_max; ++t)
        for (const auto& op : inst.operators()) {
            int o = op_var(atlas, op.index, t);
            Formula ach = achieved_at(atlas, op, t);
            std::vector<Formula> off;
            for (int s = 1; s <= ns; ++s) {
                int e = enabled_var(atlas, op.index, s), st = state_var(atlas, s, t);
                add(out, "12.1",
                    Formula::implies(Formula::conj({var(e), var(st), conj_at(atlas, op.precondition, t),
                                                    Formula::negate(ach)}),
                                     var(o)));
                off.push_back(Formula::disj({nvar(e), nvar(st)}));
            }
            add(out, "12.2", Formula::implies(ach, nvar(o)));
            add(out, "12.3", Formula::implies(Formula::conj(std::move(off)), nvar(o)));
        }
    return out;
}

std::vector<TaggedFormula> encode_sequence_plan(const ProblemInstance& inst, int t_max, VariableAtlas& atlas) {
    std::vector<TaggedFormula> out;
    for (int t = 0; t < t_max; ++t)
        for (const auto& op : inst.operators())
            add(out, "13.1",
                Formula::iff(var(op_var(atlas, op.index, t)),
                             Formula::conj({var(enabled_var(atlas, op.index, t)), conj_at(atlas, op.precondition, t),
                                            Formula::negate(achieved_at(atlas, op, t))})));
    return out;
}

namespace {

std::vector<int> intern_plan_vars(const ProblemInstance& inst, const EncodingConfig& cfg, VariableAtlas& atlas) {
    std::vector<int> p;
    const int n_ops = static_cast<int>(inst.num_operators());
    switch (cfg.kind) {
        case PlanKind::Automaton:
            for (int i = 1; i <= cfg.n_states; ++i)
                for (int j : inst.observables()) p.push_back(atlas.intern({Role::Cond, i, j, 0}));
            for (Role r : {Role::SuccT, Role::SuccF})
                for (int i = 1; i <= cfg.n_states; ++i)
                    for (int j = 1; j <= cfg.n_states; ++j) p.push_back(atlas.intern({r, i, j, 0}));
            [[fallthrough]];
        case PlanKind::Phased:
            for (int s = 1; s <= cfg.n_states; ++s)
                for (int o = 0; o < n_ops; ++o) p.push_back(enabled_var(atlas, o, s));
            break;
        case PlanKind::Sequence:
            for (int t = 0; t < cfg.t_max; ++t)
                for (int o = 0; o < n_ops; ++o) p.push_back(enabled_var(atlas, o, t));
            break;
    }
    return p;
}

void intern_choice_vars(const ProblemInstance& inst, int t_max, VariableAtlas& atlas, std::vector<int>& out) {
    const int n_ops = static_cast<int>(inst.num_operators());
    for (int t = 0; t < t_max; ++t) {
        for (const auto& op : inst.operators())
            if (!op.deterministic())
                for (int j = 0; j < choice_bits(op.effects.size()); ++j)
                    out.push_back(atlas.intern({Role::Choice, op.index, j, t}));
        for (std::size_t r = 0; r < inst.rules().size(); ++r)
            for (int j = 0; j < choice_bits(inst.rules()[r].alternatives.size()); ++j)
                out.push_back(atlas.intern({Role::Choice, n_ops + static_cast<int>(r), j, t}));
    }
}

}  // namespace

EncodedProblem assemble(const ProblemInstance& inst, const EncodingConfig& config) {
    if (config.t_max < 1) throw EncodeError("tmax must be at least 1");
    if (config.kind != PlanKind::Sequence) require_states(config.n_states);
    if (config.use_invariants && config.quant != QuantMode::Aux)
        throw EncodeError("invariants are only available with auxiliary quantification");

    EncodedProblem ep;
    ep.config = config;
    ep.instance = &inst;
    VariableAtlas& atlas = ep.qbf.atlas;
    const int T = config.t_max;

    ep.plan_vars = intern_plan_vars(inst, config, atlas);

    std::vector<TaggedFormula> fs;
    if (config.quant == QuantMode::Aux) {
        Formula init = inst.expanded_init();
        auto terms = to_padded_dnf(init, config.dnf_cap);
        if (terms.empty()) throw EncodeError("initial-state formula is unsatisfiable");
        ep.init_terms = terms.size();
        const int n = choice_bits(terms.size());
        std::vector<int> d;
        for (int j = 1; j <= n; ++j) d.push_back(atlas.intern({Role::AuxInit, j, 0, 0}));
        ep.contingency_vars = d;
        std::set<int> constrained = init.atoms();
        for (int f : inst.base_facts())
            if (!constrained.count(f)) ep.contingency_vars.push_back(fact_var(atlas, f, 0));
        intern_choice_vars(inst, T, atlas, ep.contingency_vars);
        for (std::size_t p = 0; p < (std::size_t{1} << n); ++p) {
            std::vector<Formula> pat;
            // D_1 is the most significant bit: pattern 1 is D_1 and not D_2 ...
            for (int j = 0; j < n; ++j) {
                int v = d[static_cast<std::size_t>(j)];
                pat.push_back(((p >> (n - 1 - j)) & 1U) ? nvar(v) : var(v));
            }
            Formula body = p < terms.size() ? conj_at(atlas, terms[p], 0) : Formula::top();
            add(fs, "Q", Formula::implies(Formula::conj(std::move(pat)), std::move(body)));
        }
        add(fs, "goal", formula_at(atlas, inst.goal(), T));
    } else {
        for (int f : inst.base_facts()) ep.contingency_vars.push_back(fact_var(atlas, f, 0));
        intern_choice_vars(inst, T, atlas, ep.contingency_vars);
        add(fs, "init->goal", Formula::implies(formula_at(atlas, inst.init(), 0), formula_at(atlas, inst.goal(), T)));
    }

    auto append = [&](std::vector<TaggedFormula> more) {
        for (auto& f : more) fs.push_back(std::move(f));
    };
    append(encode_execution(inst, T, atlas, config.mutex));
    switch (config.kind) {
        case PlanKind::Automaton: append(encode_automaton_plan(inst, T, config.n_states, atlas)); break;
        case PlanKind::Phased: append(encode_phased_plan(inst, T, config.n_states, atlas)); break;
        case PlanKind::Sequence: append(encode_sequence_plan(inst, T, atlas)); break;
    }
    if (config.use_invariants) {
        InvariantOptions io;
        io.exclusive_operators = config.mutex == MutexMode::AllPairs;
        io.dnf_cap = config.dnf_cap;
        for (const auto& c : synthesize_invariants(inst, io))
            for (int t = 0; t <= T; ++t) {
                std::vector<Formula> d;
                for (Literal l : c.lits) d.push_back(lit_at(atlas, l, t));
                add(fs, "inv", Formula::disj(std::move(d)));
            }
    }

    std::vector<int> aux;
    for (const auto& tf : fs) {
        ++ep.census[tf.tag];
        for (auto& c : clausify(tf.formula, atlas, aux)) ep.qbf.matrix.push_back(std::move(c));
    }
    ep.formulas = std::move(fs);

    std::set<int> outer(ep.plan_vars.begin(), ep.plan_vars.end());
    std::set<int> mid(ep.contingency_vars.begin(), ep.contingency_vars.end());
    std::vector<int> rest;
    for (int v = 1; v <= atlas.max_var(); ++v)
        if (!outer.count(v) && !mid.count(v)) rest.push_back(v);
    std::vector<int> c_sorted(mid.begin(), mid.end());
    ep.qbf.prefix = {Block{Quant::Exists, std::vector<int>(outer.begin(), outer.end())},
                     Block{Quant::Forall, c_sorted}, Block{Quant::Exists, rest}};
    ep.qbf.normalize_prefix();
    ep.qbf.update_num_vars();
    return ep;
}

SchemaCensus expected_census(const ProblemInstance& inst, const EncodingConfig& cfg, std::size_t init_terms,
                             std::size_t invariant_count) {
    SchemaCensus c;
    const std::size_t T = static_cast<std::size_t>(cfg.t_max);
    const std::size_t No = inst.num_operators();
    const std::size_t Ns = static_cast<std::size_t>(cfg.n_states);
    const std::size_t B = inst.observables().size();
    std::size_t det = 0, nondet = 0, alts = 0, rule_alts = 0;
    for (const auto& op : inst.operators()) {
        if (op.deterministic()) {
            ++det;
        } else {
            ++nondet;
            alts += op.effects.size();
        }
    }
    for (const auto& r : inst.rules()) rule_alts += r.alternatives.size();
    c["1.1"] = det * T;
    c["14.1"] = nondet * T;
    c["14.2"] = alts * T;
    c["rule"] = rule_alts * T;
    c["1.2"] = 2 * inst.base_facts().size() * T;
    c["mutex"] = mutex_pairs(inst, cfg.mutex) * T;
    c["def"] = inst.defined_facts().size() * (T + 1);
    switch (cfg.kind) {
        case PlanKind::Automaton:
            c["2.1"] = Ns * (B * B - B);
            c["2.2"] = Ns;
            c["3.1"] = c["3.2"] = Ns * (Ns * Ns - Ns);
            c["3.3"] = c["3.4"] = Ns;
            c["4.1"] = 1;
            c["5.1"] = (Ns * Ns - Ns) * (T + 1);
            c["6.1"] = c["6.2"] = Ns * Ns * B * T;
            c["7.1"] = Ns * No * T;
            c["7.2"] = No * T;
            break;
        case PlanKind::Phased:
            c["8.1"] = No * T;
            c["9.1"] = (Ns - 1) * T;
            c["9.1a"] = T;
            c["9.2"] = Ns * T;
            c["10.1"] = 1;
            c["11.1"] = (Ns * Ns - Ns) * (T + 1);
            c["12.1"] = No * Ns * T;
            c["12.2"] = c["12.3"] = No * T;
            break;
        case PlanKind::Sequence:
            c["13.1"] = No * T;
            break;
    }
    if (cfg.quant == QuantMode::Aux) {
        c["Q"] = std::size_t{1} << choice_bits(init_terms);
        c["goal"] = 1;
        c["inv"] = invariant_count * (T + 1);
    } else {
        c["init->goal"] = 1;
    }
    for (auto it = c.begin(); it != c.end();) it = it->second == 0 ? c.erase(it) : std::next(it);
    return c;
}

}  // namespace qplan
