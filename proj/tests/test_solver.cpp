#include <gtest/gtest.h>

#include <random>

#include "qplan/encoder.hpp"
#include "qplan/generators.hpp"
#include "qplan/plan.hpp"
#include "qplan/solver.hpp"
#include "support.hpp"

using namespace qplan;

namespace {

QbfProblem make(std::vector<Block> prefix, std::vector<Clause> matrix) {
    QbfProblem q;
    q.prefix = std::move(prefix);
    q.matrix = std::move(matrix);
    q.update_num_vars();
    return q;
}

constexpr Quant E = Quant::Exists;
constexpr Quant F = Quant::Forall;

SolverConfig flags(unsigned mask) {
    SolverConfig c;
    c.enable_failed_literal = mask & 1;
    c.enable_universal_probing = mask & 2;
    c.enable_partitioning = mask & 4;
    c.probe_budget = (mask & 8) ? 0 : 2;
    return c;
}

}  // namespace

TEST(Solver, TextbookFormulae) {
    auto q1 = make({{E, {1, 2}}}, {{1}, {2}});                       // Ex Ey (x & y)
    auto q2 = make({{F, {1}}, {E, {2}}}, {{-1, 2}, {1, -2}});          // Ax Ey (x <-> y)
    auto q3 = make({{E, {1}}, {F, {2}}}, {{-1, 2}, {1, -2}});          // Ex Ay (x <-> y)
    auto q4 = make({{F, {1, 2}}}, {{1, 2}});                           // Ax Ay (x | y)
    EXPECT_EQ(solve(q1).value, Truth::True);
    EXPECT_EQ(solve(q2).value, Truth::True);
    EXPECT_EQ(solve(q3).value, Truth::False);
    EXPECT_EQ(solve(q4).value, Truth::False);
    EXPECT_TRUE(expand_eval(q1));
    EXPECT_TRUE(expand_eval(q2));
    EXPECT_FALSE(expand_eval(q3));
    EXPECT_FALSE(expand_eval(q4));
}

TEST(Solver, EmptyMatrixAndEmptyClause) {
    EXPECT_EQ(solve(make({{E, {1}}}, {})).value, Truth::True);
    EXPECT_EQ(solve(make({{E, {1}}}, {{}})).value, Truth::False);
}

TEST(Solver, UniversalReductionWitness) {
    auto q = make({{E, {1}}, {F, {2}}}, {{1, 2}});
    auto r = solve(q);
    ASSERT_EQ(r.value, Truth::True);
    ASSERT_TRUE(r.witness);
    EXPECT_EQ(*r.witness, (std::vector<int>{1}));
}

TEST(Solver, UniversalReduce) {
    std::vector<Block> p1{{E, {1}}, {F, {2}}};
    EXPECT_EQ(universal_reduce({1, 2}, p1), (Clause{1}));
    std::vector<Block> p2{{F, {2}}, {E, {1}}};
    EXPECT_EQ(universal_reduce({1, 2}, p2), (Clause{1, 2}));
    std::vector<Block> p3{{F, {2}}};
    EXPECT_TRUE(universal_reduce({2}, p3).empty());
}

TEST(Solver, Partition) {
    EXPECT_EQ(partition({{1, 2}, {3, 4}}).size(), 2u);
    EXPECT_EQ(partition({{1, 2}, {2, 3}}).size(), 1u);
    auto parts = partition({{1, -2}, {5}, {-2, 3}, {}});
    ASSERT_EQ(parts.size(), 3u);
    EXPECT_EQ(parts[0].size(), 2u);
}

TEST(Solver, ExpandGuard) {
    QbfProblem q;
    Block b{E, {}};
    for (int v = 1; v <= 25; ++v) b.vars.push_back(v);
    q.prefix = {b};
    q.num_vars = 25;
    EXPECT_THROW(expand_eval(q), std::length_error);
}

TEST(Solver, RandomAgreesWithExpansionAllFlags) {
    std::mt19937_64 rng(2024);
    for (int i = 0; i < 120; ++i) {
        auto q = qtest::random_qbf(rng, 12, 30, 2, 4);
        const bool want = expand_eval(q);
        for (unsigned mask = 0; mask < 16; ++mask) {
            auto r = solve(q, flags(mask));
            ASSERT_EQ(r.value, want ? Truth::True : Truth::False) << "instance " << i << " flags " << mask;
            if (r.witness) {
                EXPECT_EQ(check_witness(q, *r.witness), Truth::True) << "instance " << i << " flags " << mask;
            }
        }
    }
}

TEST(Solver, WitnessCoversBlockOne) {
    std::mt19937_64 rng(99);
    for (int i = 0; i < 100; ++i) {
        auto q = qtest::random_qbf(rng, 10, 20, 2, 3);
        q.normalize_prefix();
        auto r = solve(q);
        if (r.value != Truth::True || q.prefix.empty() || q.prefix[0].quant != E) {
            EXPECT_FALSE(r.witness && q.prefix[0].quant != E);
            continue;
        }
        ASSERT_TRUE(r.witness);
        std::vector<int> vars;
        for (int l : *r.witness) vars.push_back(std::abs(l));
        auto sorted = q.prefix[0].vars;
        std::sort(sorted.begin(), sorted.end());
        EXPECT_EQ(vars, sorted);
    }
}

TEST(Solver, Deterministic) {
    auto inst = parse_domain(two_blocks_domain());
    EncodingConfig cfg;
    cfg.t_max = 2;
    auto ep = assemble(inst, cfg);
    auto a = solve(ep.qbf), b = solve(ep.qbf);
    EXPECT_EQ(a.value, b.value);
    EXPECT_EQ(a.witness, b.witness);
    EXPECT_EQ(a.stats.nodes, b.stats.nodes);
    EXPECT_EQ(a.stats.props, b.stats.props);
}

TEST(Solver, NodeCapGivesUnknown) {
    std::mt19937_64 rng(1);
    auto inst = gen_blocks(3);
    EncodingConfig cfg;
    cfg.t_max = 5;
    cfg.mutex = MutexMode::DependentPairs;
    auto ep = assemble(inst, cfg);
    SolverConfig sc;
    sc.node_cap = 1;
    sc.enable_failed_literal = false;
    sc.enable_universal_probing = false;
    EXPECT_EQ(solve(ep.qbf, sc).value, Truth::Unknown);
}

TEST(Solver, StatsAndWitnessLines) {
    SolverResult r;
    r.value = Truth::True;
    r.stats = {3, 7, 1};
    EXPECT_EQ(stats_line(r), "result=true nodes=3 props=7 ms=1");
    EXPECT_EQ(witness_line({1, -2}), "v 1 -2 0");
}

TEST(Solver, PartitioningAgreesOnRooms) {
    auto inst = gen_rooms(5);
    for (int t = 3; t <= 5; ++t) {
        EncodingConfig cfg;
        cfg.t_max = t;
        auto ep = assemble(inst, cfg);
        SolverConfig off;
        off.enable_partitioning = false;
        auto a = solve(ep.qbf);
        auto b = solve(ep.qbf, off);
        EXPECT_EQ(a.value, b.value) << "t=" << t;
        if (a.value == Truth::True) EXPECT_EQ(check_witness(ep.qbf, *a.witness), Truth::True);
    }
}
