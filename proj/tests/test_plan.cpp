#include <gtest/gtest.h>

#include "qplan/encoder.hpp"
#include "qplan/generators.hpp"
#include "qplan/plan.hpp"
#include "qplan/solver.hpp"
#include "support.hpp"

using namespace qplan;

namespace {

const ProblemInstance& two_blocks() {
    static const ProblemInstance inst = parse_domain(two_blocks_domain());
    return inst;
}

FactValuation state_of(const ProblemInstance& inst, std::initializer_list<const char*> true_facts) {
    std::vector<std::uint8_t> base(inst.num_facts(), 0);
    for (const char* f : true_facts) base[static_cast<std::size_t>(*inst.fact_index(f))] = 1;
    return FactValuation(inst, base);
}

FactValuation b_on_a(const ProblemInstance& inst) { return state_of(inst, {"ontableA", "onBA", "clearB"}); }
FactValuation a_on_b(const ProblemInstance& inst) { return state_of(inst, {"ontableB", "onAB", "clearA"}); }

bool goal_at_end(const ProblemInstance& inst, const ExecutionTrace& tr) {
    return !tr.effect_conflict && eval(inst.goal(), tr.final_facts().values());
}

// B on A, C on the table
FactValuation three_blocks_sample(const ProblemInstance& inst) {
    return state_of(inst, {"ontableA", "onBA", "clearB", "ontableC", "clearC"});
}

}  // namespace

TEST(Runtime, LiteralSequencePlan) {
    const auto& inst = two_blocks();
    SequencePlan p{2, {{1}, {2}}};
    auto tr = execute_sequence(p, inst, b_on_a(inst), first_alternative());
    ASSERT_EQ(tr.steps.size(), 3u);
    EXPECT_EQ(tr.steps[0].fired, (std::vector<int>{1}));
    EXPECT_EQ(tr.steps[1].fired, (std::vector<int>{2}));
    EXPECT_TRUE(tr.final_facts()[*inst.fact_index("onAB")]);
    auto tr2 = execute_sequence(p, inst, a_on_b(inst), first_alternative());
    EXPECT_TRUE(tr2.steps[0].fired.empty());
    EXPECT_TRUE(tr2.steps[1].fired.empty());
    EXPECT_TRUE(goal_at_end(inst, tr2));
}

TEST(Runtime, EmptyPlanIdentity) {
    const auto& inst = two_blocks();
    SequencePlan p{3, {{}, {}, {}}};
    auto s0 = b_on_a(inst);
    auto tr = execute_sequence(p, inst, s0, first_alternative());
    for (const auto& st : tr.steps) EXPECT_EQ(st.facts, s0);
}

TEST(Runtime, AutomatonBlocks3FromBOnA) {
    auto inst = gen_blocks(3);
    auto p = std::get<AutomatonPlan>(plan_from_json(qtest::data_file("blocks3_automaton.json"), inst));
    auto tr = execute_automaton(p, inst, three_blocks_sample(inst), 5, first_alternative());
    std::vector<int> states;
    for (const auto& s : tr.steps) states.push_back(s.state);
    EXPECT_EQ(std::vector<int>(states.begin(), states.begin() + 4), (std::vector<int>{1, 3, 2, 4}));
    EXPECT_TRUE(goal_at_end(inst, tr));
    EXPECT_TRUE(eval(inst.goal(), tr.steps[4].facts.values()));
}

TEST(Runtime, SingleStateAutomatonIsSequence) {
    const auto& inst = two_blocks();
    AutomatonPlan a{1, {*inst.fact_index("onAB")}, {1}, {1}, {{0, 1, 3}}};
    SequencePlan s{3, {{0, 1, 3}, {0, 1, 3}, {0, 1, 3}}};
    for (const auto& s0 : enumerate_initial_states(inst, 10)) {
        auto ta = execute_automaton(a, inst, s0, 3, first_alternative());
        auto ts = execute_sequence(s, inst, s0, first_alternative());
        ASSERT_EQ(ta.steps.size(), ts.steps.size());
        for (std::size_t i = 0; i < ta.steps.size(); ++i) EXPECT_EQ(ta.steps[i].facts, ts.steps[i].facts);
    }
}

TEST(Runtime, PhasedBlocks4AllStates) {
    auto inst = gen_blocks(4);
    auto p = plan_from_json(qtest::data_file("blocks4_phased.json"), inst);
    for (const auto& s0 : enumerate_initial_states(inst, 100)) {
        auto tr = execute(p, inst, s0, 7, first_alternative());
        EXPECT_TRUE(goal_at_end(inst, tr));
    }
}

TEST(Runtime, PhasedAdvancesPastDeadState) {
    const auto& inst = two_blocks();
    PhasedPlan p{2, {{0}, {1}}};  // a-to-table never applies from "B on A"
    auto tr = execute_phased(p, inst, b_on_a(inst), 2, first_alternative());
    EXPECT_EQ(tr.steps[0].state, 1);
    EXPECT_EQ(tr.steps[1].state, 2);
    EXPECT_EQ(tr.steps[1].fired, (std::vector<int>{1}));
}

TEST(Runtime, EffectConflictDetected) {
    auto inst = parse_domain("fact a b c\noperator x pre a post b c\noperator y pre a post -b c\ninit (and a (not b) (not c))\ngoal b\n");
    SequencePlan p{1, {{0, 1}}};
    auto tr = execute_sequence(p, inst, state_of(inst, {"a"}), first_alternative());
    EXPECT_TRUE(tr.effect_conflict);
    EXPECT_EQ(tr.conflict_t, 0);
    auto rep = verify_plan(p, inst, 1);
    EXPECT_FALSE(rep.valid);
    EXPECT_EQ(rep.failures.at(0).reason, "effect conflict");
}

TEST(Runtime, FramePropertyAndApplicability) {
    auto inst = gen_blocks(3);
    auto p = plan_from_json(qtest::data_file("blocks3_automaton.json"), inst);
    for (const auto& s0 : enumerate_initial_states(inst, 100)) {
        auto tr = execute(p, inst, s0, 5, first_alternative());
        for (std::size_t i = 0; i + 1 < tr.steps.size(); ++i) {
            std::set<int> touched;
            for (int o : tr.steps[i].fired)
                for (Literal l : inst.op(o).effects[0]) touched.insert(l.atom);
            for (int f : inst.base_facts())
                if (tr.steps[i].facts[f] != tr.steps[i + 1].facts[f]) EXPECT_TRUE(touched.count(f));
        }
    }
}

TEST(Runtime, NondeterministicChoicesReplayed) {
    auto inst = parse_domain("fact a b c\noperator o pre a eff b eff c\ninit (and a (not b) (not c))\ngoal (or b c)\n");
    SequencePlan p{1, {{0}}};
    auto s0 = state_of(inst, {"a"});
    auto t0 = execute_sequence(p, inst, s0, table_choices({{0}}));
    auto t1 = execute_sequence(p, inst, s0, table_choices({{1}}));
    EXPECT_TRUE(t0.final_facts()[1]);
    EXPECT_TRUE(t1.final_facts()[2]);
    auto rep = verify_plan(p, inst, 1);
    EXPECT_TRUE(rep.valid);
    EXPECT_EQ(rep.scenarios, 2u);
}

TEST(Verify, LiteralPlanAndBrokenVariant) {
    const auto& inst = two_blocks();
    auto rep = verify_plan(SequencePlan{2, {{1}, {2}}}, inst, 2);
    EXPECT_TRUE(rep.valid);
    EXPECT_TRUE(rep.exhaustive);
    EXPECT_EQ(rep.scenarios, 3u);
    auto bad = verify_plan(SequencePlan{2, {{1}, {}}}, inst, 2);
    EXPECT_FALSE(bad.valid);
    ASSERT_FALSE(bad.failures.empty());
    EXPECT_EQ(bad.failures[0].reason, "goal not reached");
    bool from_b_on_a = false;
    for (const auto& f : bad.failures) from_b_on_a |= f.initial == b_on_a(inst);
    EXPECT_TRUE(from_b_on_a);
}

TEST(Verify, SequenceHorizonCutOrPadded) {
    const auto& inst = two_blocks();
    SequencePlan p{2, {{1}, {2}}};
    EXPECT_FALSE(verify_plan(p, inst, 1).valid);
    EXPECT_TRUE(verify_plan(p, inst, 4).valid);
    auto tr = execute(p, inst, b_on_a(inst), 4, first_alternative());
    ASSERT_EQ(tr.steps.size(), 5u);
    EXPECT_TRUE(tr.steps[3].fired.empty());
    EXPECT_EQ(tr.steps[2].facts, tr.steps[4].facts);
}

TEST(Verify, EmptyPlanWhenGoalAlwaysHolds) {
    auto inst = parse_domain("fact a b\ninit (and a (or b (not b)))\ngoal a\n");
    EXPECT_TRUE(verify_plan(SequencePlan{2, {{}, {}}}, inst, 2).valid);
}

TEST(Verify, SerialAndParallelAgree) {
    auto inst = gen_blocks(3);
    auto p = plan_from_json(qtest::data_file("blocks3_automaton.json"), inst);
    for (int t = 3; t <= 5; ++t) {
        auto a = verify_plan(p, inst, t);
        auto b = verify_plan_serial(p, inst, t);
        EXPECT_EQ(a.valid, b.valid);
        EXPECT_EQ(a.scenarios, b.scenarios);
        EXPECT_EQ(a.failure_count, b.failure_count);
        ASSERT_EQ(a.failures.size(), b.failures.size());
        for (std::size_t i = 0; i < a.failures.size(); ++i) EXPECT_EQ(a.failures[i].initial, b.failures[i].initial);
    }
}

TEST(Verify, SamplingBeyondCap) {
    auto inst = gen_rooms(8);
    SequencePlan p{7, {}};
    for (int t = 0; t < 7; ++t) {
        auto a = inst.operator_index("move-a-" + std::to_string(t + 1));
        auto b = inst.operator_index("move-b-" + std::to_string(t + 1));
        p.enabled.push_back({*a, *b});
    }
    VerifyOptions o;
    o.scenario_cap = 50;
    auto rep = verify_plan(p, inst, 7, o);
    EXPECT_FALSE(rep.exhaustive);
    EXPECT_EQ(rep.scenarios, 50u);
    EXPECT_TRUE(rep.valid);
    auto full = verify_plan(p, inst, 7);
    EXPECT_TRUE(full.exhaustive);
    EXPECT_EQ(full.scenarios, 128u);
}

TEST(Extract, SequenceWitness) {
    const auto& inst = two_blocks();
    EncodingConfig cfg;
    cfg.t_max = 2;
    auto ep = assemble(inst, cfg);
    auto at = ep.qbf.atlas;
    std::vector<int> w;
    for (int v : ep.plan_vars) {
        const auto& id = at.identity(v);
        bool on = (id.a == 1 && id.b == 0) || (id.a == 2 && id.b == 1);
        w.push_back(on ? v : -v);
    }
    auto p = std::get<SequencePlan>(extract_plan(ep, w));
    EXPECT_EQ(p.enabled, (std::vector<std::vector<int>>{{1}, {2}}));
    std::vector<int> none;
    for (int v : ep.plan_vars) none.push_back(-v);
    auto e = std::get<SequencePlan>(extract_plan(ep, none));
    EXPECT_EQ(e.enabled, (std::vector<std::vector<int>>{{}, {}}));
}

TEST(Extract, AutomatonUniquenessEnforced) {
    const auto& inst = two_blocks();
    EncodingConfig cfg;
    cfg.kind = PlanKind::Automaton;
    cfg.t_max = 2;
    cfg.n_states = 2;
    auto ep = assemble(inst, cfg);
    std::vector<int> w;
    for (int v : ep.plan_vars) w.push_back(ep.qbf.atlas.identity(v).role == Role::Cond ? v : -v);
    EXPECT_THROW(extract_plan(ep, w), MalformedWitness);
}

TEST(Extract, SolvedPlansVerify) {
    std::vector<ProblemInstance> insts{two_blocks(), parse_domain(example43_domain()), gen_rooms(4)};
    for (const auto& inst : insts)
        for (auto kind : {PlanKind::Sequence, PlanKind::Phased, PlanKind::Automaton})
            for (int t = 1; t <= 3; ++t)
                for (int s = 1; s <= 3; ++s) {
                    if (kind == PlanKind::Automaton && inst.observables().empty()) continue;
                    EncodingConfig cfg;
                    cfg.kind = kind;
                    cfg.t_max = t;
                    cfg.n_states = s;
                    auto ep = assemble(inst, cfg);
                    auto r = solve(ep.qbf);
                    if (r.value != Truth::True) continue;
                    auto p = extract_plan(ep, *r.witness);
                    EXPECT_TRUE(verify_plan(p, inst, t).valid) << to_string(kind) << " t=" << t << " s=" << s;
                }
}

TEST(Json, RoundTripAllKinds) {
    auto inst = gen_blocks(3);
    auto a = plan_from_json(qtest::data_file("blocks3_automaton.json"), inst);
    EXPECT_EQ(plan_from_json(plan_to_json(a, inst), inst), a);
    Plan ph = PhasedPlan{2, {{0, 3}, {}}};
    EXPECT_EQ(plan_from_json(plan_to_json(ph, inst), inst), ph);
    Plan sq = SequencePlan{2, {{1}, {2, 4}}};
    EXPECT_EQ(plan_from_json(plan_to_json(sq, inst), inst), sq);
}

TEST(Json, Errors) {
    auto inst = two_blocks();
    EXPECT_THROW(plan_from_json("{", inst), PlanFormatError);
    EXPECT_THROW(plan_from_json(R"({"kind":"tree"})", inst), PlanFormatError);
    EXPECT_THROW(plan_from_json(R"({"kind":"sequence","tmax":1,"enabled":[["nope"]]})", inst), PlanFormatError);
    EXPECT_THROW(plan_from_json(R"({"kind":"sequence","tmax":2,"enabled":[[]]})", inst), PlanFormatError);
    EXPECT_THROW(plan_from_json(R"({"kind":"automaton","states":1,"enabled":[[]],"condition":["onAB"],)"
                                R"("succ_true":[2],"succ_false":[1]})",
                                inst),
                 PlanFormatError);
}

TEST(Trace, Format) {
    const auto& inst = two_blocks();
    auto tr = execute_sequence(SequencePlan{1, {{1}}}, inst, b_on_a(inst), first_alternative());
    auto text = format_trace(inst, tr);
    EXPECT_EQ(text.rfind("t=0 state=", 0), 0u);
    EXPECT_NE(text.find("fired=[b-to-table]"), std::string::npos) << text;
    EXPECT_NE(text.find("onBA:1"), std::string::npos);
}

// Plugging a simulated trace into the encoding satisfies the matrix.
TEST(Consistency, TraceSatisfiesEncoding) {
    const auto& inst = two_blocks();
    for (auto quant : {QuantMode::Direct}) {
        EncodingConfig cfg;
        cfg.t_max = 2;
        cfg.quant = quant;
        auto ep = assemble(inst, cfg);
        auto r = solve(ep.qbf);
        ASSERT_EQ(r.value, Truth::True);
        auto plan = extract_plan(ep, *r.witness);
        for (const auto& s0 : enumerate_initial_states(inst, 10)) {
            auto tr = execute(plan, inst, s0, 2, first_alternative());
            // fix plan, facts and operator variables; Tseitin variables stay open
            QbfProblem q = ep.qbf;
            std::vector<Clause> units;
            for (int l : *r.witness) units.push_back({l});
            for (int v = 1; v <= q.atlas.max_var(); ++v) {
                const auto& id = q.atlas.identity(v);
                if (id.role == Role::FactAt) {
                    bool val = tr.steps[static_cast<std::size_t>(id.b)].facts[id.a];
                    units.push_back({val ? v : -v});
                } else if (id.role == Role::OpAt) {
                    const auto& f = tr.steps[static_cast<std::size_t>(id.b)].fired;
                    bool val = std::find(f.begin(), f.end(), id.a) != f.end();
                    units.push_back({val ? v : -v});
                }
            }
            q.matrix.insert(q.matrix.end(), units.begin(), units.end());
            Block all{Quant::Exists, {}};
            for (int v = 1; v <= q.num_vars; ++v) all.vars.push_back(v);
            q.prefix = {all};
            EXPECT_EQ(solve(q).value, Truth::True);
        }
    }
}
