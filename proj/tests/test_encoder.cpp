#include <gtest/gtest.h>

#include "qplan/encoder.hpp"
#include "qplan/generators.hpp"
#include "qplan/invariants.hpp"
#include "qplan/qdimacs.hpp"
#include "qplan/solver.hpp"
#include "support.hpp"

using namespace qplan;

namespace {

EncodingConfig config(PlanKind k, int t, int s = 1, QuantMode q = QuantMode::Aux) {
    EncodingConfig c;
    c.kind = k;
    c.t_max = t;
    c.n_states = s;
    c.quant = q;
    return c;
}

std::size_t count(const std::vector<TaggedFormula>& fs, const std::string& tag) {
    return static_cast<std::size_t>(
        std::count_if(fs.begin(), fs.end(), [&](const TaggedFormula& f) { return f.tag == tag; }));
}

const ProblemInstance& two_blocks() {
    static const ProblemInstance inst = parse_domain(two_blocks_domain());
    return inst;
}

}  // namespace

TEST(Encoder, ExecutionTwoBlocks) {
    VariableAtlas at;
    auto fs = encode_execution(two_blocks(), 2, at, MutexMode::AllPairs);
    EXPECT_EQ(count(fs, "1.1"), 8u);
    EXPECT_EQ(count(fs, "1.2"), 24u);
    EXPECT_EQ(count(fs, "mutex"), 12u);
    EXPECT_EQ(count(fs, "14.1") + count(fs, "14.2") + count(fs, "rule") + count(fs, "def"), 0u);
}

TEST(Encoder, ExecutionWithoutOperatorsOnlyFrames) {
    auto inst = parse_domain("fact a b\ninit a\ngoal a\n");
    VariableAtlas at;
    auto fs = encode_execution(inst, 3, at, MutexMode::AllPairs);
    EXPECT_EQ(fs.size(), count(fs, "1.2"));
    EXPECT_EQ(fs.size(), 12u);
}

TEST(Encoder, NondeterministicSchemata) {
    auto inst = parse_domain(
        "fact a b c\noperator o pre a eff b eff c eff -a\nrule r pre b eff -b eff c\ninit a\ngoal c\n");
    VariableAtlas at;
    auto fs = encode_execution(inst, 2, at, MutexMode::AllPairs);
    EXPECT_EQ(count(fs, "14.1"), 2u);
    EXPECT_EQ(count(fs, "14.2"), 6u);
    EXPECT_EQ(count(fs, "rule"), 4u);
    EXPECT_EQ(choice_bits(1), 0);
    EXPECT_EQ(choice_bits(2), 1);
    EXPECT_EQ(choice_bits(3), 2);
    EXPECT_EQ(choice_bits(5), 3);
}

TEST(Encoder, ChoiceConditionsPartitionPatterns) {
    // every bit pattern selects exactly one alternative
    for (std::size_t k : {2u, 3u, 5u}) {
        VariableAtlas at;
        std::vector<Formula> conds;
        for (std::size_t a = 0; a < k; ++a) conds.push_back(choice_condition(at, 0, 0, a, k));
        const int bits = choice_bits(k);
        for (unsigned m = 0; m < (1u << bits); ++m) {
            int hits = 0;
            for (const auto& c : conds)
                hits += eval(c, [&](int v) -> std::optional<bool> {
                    return (m >> at.identity(v).b) & 1;
                });
            EXPECT_EQ(hits, 1) << "k=" << k << " pattern " << m;
        }
    }
}

TEST(Encoder, AutomatonTwoStates) {
    VariableAtlas at;
    auto fs = encode_automaton_plan(two_blocks(), 2, 2, at);
    // observables ontableA, clearA, onAB
    EXPECT_EQ(count(fs, "2.1"), 2u * 6u);
    EXPECT_EQ(count(fs, "2.2"), 2u);
    EXPECT_EQ(count(fs, "3.1"), 2u * 2u);
    EXPECT_EQ(count(fs, "3.3"), 2u);
    EXPECT_EQ(count(fs, "4.1"), 1u);
    EXPECT_EQ(count(fs, "5.1"), 2u * 3u);
    EXPECT_EQ(count(fs, "6.1"), 2u * 2u * 3u * 2u);
    EXPECT_EQ(count(fs, "7.1"), 2u * 4u * 2u);
    EXPECT_EQ(count(fs, "7.2"), 4u * 2u);
}

TEST(Encoder, AutomatonSingleStateDegenerate) {
    VariableAtlas at;
    auto fs = encode_automaton_plan(two_blocks(), 2, 1, at);
    EXPECT_EQ(count(fs, "3.1") + count(fs, "3.2") + count(fs, "5.1"), 0u);
    for (const auto& f : fs)
        if (f.tag == "3.3" || f.tag == "3.4") EXPECT_EQ(f.formula.atoms().size(), 1u);
}

TEST(Encoder, AutomatonNeedsObservables) {
    auto inst = parse_domain("fact a\noperator o pre post a\ninit (not a)\ngoal a\n");
    EXPECT_THROW(assemble(inst, config(PlanKind::Automaton, 1, 1)), EncodeError);
}

TEST(Encoder, PhasedSingleStateAbsorbing) {
    VariableAtlas at;
    auto fs = encode_phased_plan(two_blocks(), 2, 1, at);
    EXPECT_EQ(count(fs, "9.1"), 0u);
    EXPECT_EQ(count(fs, "9.1a"), 2u);
    EXPECT_EQ(count(fs, "9.2"), 2u);
}

TEST(Encoder, PhasedExample43EncodesForAnyHorizon) {
    auto inst = parse_domain(example43_domain());
    for (int t = 1; t <= 6; ++t) EXPECT_NO_THROW(assemble(inst, config(PlanKind::Phased, t, 3)));
}

TEST(Encoder, SequenceTwoBlocks) {
    VariableAtlas at;
    auto fs = encode_sequence_plan(two_blocks(), 2, at);
    EXPECT_EQ(fs.size(), 8u);
    EXPECT_EQ(count(fs, "13.1"), 8u);
    auto empty = parse_domain("fact a\ninit a\ngoal a\n");
    EXPECT_TRUE(encode_sequence_plan(empty, 3, at).empty());
}

TEST(Encoder, AuxPrefixTwoBlocks) {
    auto ep = assemble(two_blocks(), config(PlanKind::Sequence, 2));
    const auto& p = ep.qbf.prefix;
    ASSERT_EQ(p.size(), 3u);
    EXPECT_EQ(p[0].quant, Quant::Exists);
    EXPECT_EQ(p[0].vars.size(), 8u);
    for (int v : p[0].vars) EXPECT_EQ(ep.qbf.atlas.identity(v).role, Role::Enabled);
    EXPECT_EQ(p[1].quant, Quant::Forall);
    ASSERT_EQ(p[1].vars.size(), 2u);
    for (int v : p[1].vars) EXPECT_EQ(ep.qbf.atlas.identity(v).role, Role::AuxInit);
    EXPECT_EQ(p[2].quant, Quant::Exists);
    EXPECT_EQ(ep.init_terms, 3u);
    EXPECT_EQ(ep.census.at("Q"), 4u);
    EXPECT_EQ(ep.census.at("goal"), 1u);
}

TEST(Encoder, DirectPrefixTwoBlocks) {
    auto ep = assemble(two_blocks(), config(PlanKind::Sequence, 2, 1, QuantMode::Direct));
    const auto& p = ep.qbf.prefix;
    ASSERT_EQ(p.size(), 3u);
    ASSERT_EQ(p[1].vars.size(), 6u);
    for (int v : p[1].vars) {
        const auto& id = ep.qbf.atlas.identity(v);
        EXPECT_EQ(id.role, Role::FactAt);
        EXPECT_EQ(id.b, 0);
    }
    EXPECT_EQ(ep.census.at("init->goal"), 1u);
    EXPECT_FALSE(ep.census.count("Q"));
}

TEST(Encoder, SingleInitialStateDropsUniversalBlock) {
    auto inst = parse_domain("fact a b\noperator o pre a post b\ninit (and a (not b))\ngoal b\n");
    auto ep = assemble(inst, config(PlanKind::Sequence, 1));
    EXPECT_EQ(ep.init_terms, 1u);
    EXPECT_TRUE(ep.contingency_vars.empty());
    for (const auto& b : ep.qbf.prefix) EXPECT_EQ(b.quant, Quant::Exists);
}

TEST(Encoder, AuxKeepsUnconstrainedFactsUniversal) {
    auto inst = gen_rooms(4);
    auto ep = assemble(inst, config(PlanKind::Sequence, 3));
    ASSERT_EQ(ep.qbf.prefix.size(), 3u);
    EXPECT_EQ(ep.qbf.prefix[1].vars.size(), 3u);  // the three doors
}

TEST(Encoder, UnsatisfiableInitInAuxMode) {
    auto inst = parse_domain("fact a\noperator o pre post a\ninit (false)\ngoal a\n");
    EXPECT_THROW(assemble(inst, config(PlanKind::Sequence, 1)), EncodeError);
}

TEST(Encoder, InvariantsRequireAux) {
    auto cfg = config(PlanKind::Sequence, 2, 1, QuantMode::Direct);
    cfg.use_invariants = true;
    EXPECT_THROW(assemble(two_blocks(), cfg), EncodeError);
}

TEST(Encoder, Deterministic) {
    auto a = assemble(gen_blocks(3), config(PlanKind::Phased, 3, 2));
    auto b = assemble(gen_blocks(3), config(PlanKind::Phased, 3, 2));
    EXPECT_EQ(qdimacs_write(a.qbf), qdimacs_write(b.qbf));
}

TEST(Encoder, TseitinInnermost) {
    auto ep = assemble(gen_blocks(3), config(PlanKind::Automaton, 2, 2));
    const auto& last = ep.qbf.prefix.back();
    EXPECT_EQ(last.quant, Quant::Exists);
    std::set<int> inner(last.vars.begin(), last.vars.end());
    for (int v = 1; v <= ep.qbf.atlas.max_var(); ++v)
        if (ep.qbf.atlas.identity(v).role == Role::Tseitin) EXPECT_TRUE(inner.count(v));
}

TEST(Encoder, CensusMatchesIndexRanges) {
    std::vector<std::pair<ProblemInstance, EncodingConfig>> cases;
    auto b3 = gen_blocks(3);
    auto e43 = parse_domain(example43_domain());
    auto nd = parse_domain(
        "fact a b c\nobservable c\noperator o pre a eff b eff c eff -a\noperator p pre b post -b\n"
        "rule r pre b eff -b eff c\ninit (and a (or b c))\ngoal c\n");
    for (auto mutex : {MutexMode::AllPairs, MutexMode::DependentPairs}) {
        for (auto kind : {PlanKind::Automaton, PlanKind::Phased, PlanKind::Sequence}) {
            for (const ProblemInstance* inst : {&b3, &e43, &nd}) {
                for (auto quant : {QuantMode::Aux, QuantMode::Direct}) {
                    auto cfg = config(kind, 3, 3, quant);
                    cfg.mutex = mutex;
                    auto ep = assemble(*inst, cfg);
                    auto want = qtest::census_by_ranges(*inst, cfg, ep.init_terms, 0);
                    for (auto it = want.begin(); it != want.end();) it = it->second ? std::next(it) : want.erase(it);
                    EXPECT_EQ(ep.census, want) << to_string(kind) << " " << to_string(quant);
                    SchemaCensus tally;
                    for (const auto& f : ep.formulas) ++tally[f.tag];
                    EXPECT_EQ(tally, ep.census);
                }
            }
        }
    }
}

TEST(Encoder, CensusWithInvariants) {
    auto inst = gen_blocks(3);
    auto cfg = config(PlanKind::Sequence, 2);
    cfg.use_invariants = true;
    auto ep = assemble(inst, cfg);
    auto inv = synthesize_invariants(inst);
    EXPECT_EQ(ep.census.at("inv"), inv.size() * 3);
}

TEST(Encoder, QuantModesAgree) {
    std::vector<ProblemInstance> insts{two_blocks(), parse_domain(example43_domain()), gen_rooms(3)};
    for (const auto& inst : insts) {
        for (auto kind : {PlanKind::Sequence, PlanKind::Phased, PlanKind::Automaton}) {
            for (int t = 1; t <= 3; ++t) {
                if (kind == PlanKind::Automaton && inst.observables().empty()) continue;
                auto aux = assemble(inst, config(kind, t, 2));
                auto dir = assemble(inst, config(kind, t, 2, QuantMode::Direct));
                EXPECT_EQ(solve(aux.qbf).value, solve(dir.qbf).value) << to_string(kind) << " t=" << t;
            }
        }
    }
}

TEST(Encoder, MonotoneInHorizon) {
    for (const auto& inst : {two_blocks(), gen_rooms(4)}) {
        for (auto kind : {PlanKind::Sequence, PlanKind::Phased}) {
            bool was_true = false;
            for (int t = 1; t <= 4; ++t) {
                bool now = solve(assemble(inst, config(kind, t, 2)).qbf).value == Truth::True;
                if (was_true) EXPECT_TRUE(now) << to_string(kind) << " t=" << t;
                was_true = now;
            }
            EXPECT_TRUE(was_true);
        }
    }
}

TEST(Encoder, ParseHelpers) {
    EXPECT_EQ(parse_plan_kind("phased"), PlanKind::Phased);
    EXPECT_EQ(parse_quant_mode("direct"), QuantMode::Direct);
    EXPECT_EQ(parse_mutex_mode("dep"), MutexMode::DependentPairs);
    EXPECT_THROW(parse_plan_kind("tree"), std::invalid_argument);
}
