#include <gtest/gtest.h>

#include "qplan/generators.hpp"
#include "qplan/workbench.hpp"

using namespace qplan;

TEST(Generators, RoomsShape) {
    auto inst = gen_rooms(3);
    EXPECT_EQ(inst.num_facts(), 5u);
    EXPECT_EQ(inst.num_operators(), 4u);
    EXPECT_TRUE(inst.observables().empty());
    EXPECT_THROW(rooms_domain(1), std::invalid_argument);
}

TEST(Generators, BlocksRange) {
    EXPECT_THROW(blocks_domain(1), std::invalid_argument);
    EXPECT_THROW(blocks_domain(6), std::invalid_argument);
    auto inst = gen_blocks(3);
    EXPECT_EQ(inst.observables().size(), 6u);
    // 6 totable + 6 move + 6 stack
    EXPECT_EQ(inst.num_operators(), 18u);
}

TEST(Generators, TwoBlockBlocksMatchesRunningExampleStates) {
    auto a = enumerate_initial_states(gen_blocks(2), 10);
    EXPECT_EQ(a.size(), 3u);
}

TEST(Search, PointOrder) {
    auto seq = search_points(PlanKind::Sequence, 3, 9);
    EXPECT_EQ(seq, (std::vector<std::pair<int, int>>{{1, 0}, {2, 0}, {3, 0}}));
    auto grid = search_points(PlanKind::Phased, 3, 2);
    std::vector<std::pair<int, int>> want{{1, 1}, {1, 2}, {2, 1}, {2, 2}, {3, 1}, {3, 2}};
    EXPECT_EQ(grid, want);
}

TEST(Search, RoomsMinimalLength) {
    SearchLimits lim;
    lim.max_t_max = 8;
    auto r = plan_search(gen_rooms(6), PlanKind::Sequence, lim, "rooms-6");
    ASSERT_TRUE(r.plan);
    EXPECT_EQ(r.t_max, 5);
    ASSERT_EQ(r.records.size(), 5u);
    for (int i = 0; i < 4; ++i) EXPECT_EQ(r.records[static_cast<std::size_t>(i)].value, Truth::False);
    EXPECT_EQ(r.records.back().value, Truth::True);
    EXPECT_TRUE(r.verification.valid);
    EXPECT_TRUE(r.verification.exhaustive);
}

TEST(Search, ConcurrentMatchesSequential) {
    SearchLimits lim;
    lim.max_t_max = 3;
    lim.max_states = 3;
    auto inst = parse_domain(example43_domain());
    auto a = plan_search(inst, PlanKind::Automaton, lim);
    lim.concurrent = true;
    auto b = plan_search(inst, PlanKind::Automaton, lim);
    ASSERT_TRUE(a.plan && b.plan);
    EXPECT_EQ(a.t_max, b.t_max);
    EXPECT_EQ(a.n_states, b.n_states);
    ASSERT_EQ(a.records.size(), b.records.size());
    for (std::size_t i = 0; i < a.records.size(); ++i) {
        EXPECT_EQ(a.records[i].t_max, b.records[i].t_max);
        EXPECT_EQ(a.records[i].value, b.records[i].value);
    }
}

TEST(Search, NoPlanWithinLimits) {
    SearchLimits lim;
    lim.max_t_max = 3;
    auto r = plan_search(gen_rooms(6), PlanKind::Sequence, lim);
    EXPECT_FALSE(r.plan);
    EXPECT_FALSE(r.hit_cap);
    EXPECT_EQ(r.records.size(), 3u);
}

TEST(Search, InvalidLimits) {
    SearchLimits lim;
    lim.max_t_max = 0;
    EXPECT_THROW(plan_search(gen_rooms(3), PlanKind::Sequence, lim), std::invalid_argument);
}

TEST(Bench, Csv) {
    EXPECT_EQ(csv_header(), "encoding,params,tmax,states,clauses,vars,ms,nodes,value");
    BenchRecord r{"sequence", "rooms-5", 4, 0, 10, 5, 1, 2, Truth::True};
    EXPECT_EQ(csv_row(r), "sequence,rooms-5,4,-,10,5,1,2,true");
}

TEST(Bench, FixturesSuite) {
    auto recs = run_benchmark("paper-fixtures");
    ASSERT_EQ(recs.size(), 5u);
    EXPECT_EQ(recs[1].value, Truth::True);
    EXPECT_EQ(recs[2].value, Truth::True);
    EXPECT_THROW(run_benchmark("nope"), std::invalid_argument);
}

TEST(Bench, Example43Suite) {
    auto recs = run_benchmark("example43");
    bool automaton_true = false;
    for (const auto& r : recs) {
        if (r.encoding == "phased") EXPECT_EQ(r.value, Truth::False) << r.t_max << "," << r.n_states;
        if (r.encoding == "automaton" && r.value == Truth::True) automaton_true = true;
    }
    EXPECT_TRUE(automaton_true);
}
