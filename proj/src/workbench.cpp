#include "qplan/workbench.hpp"

#include <algorithm>
#include <chrono>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "qplan/generators.hpp"

namespace qplan {

std::string csv_header() { return "encoding,params,tmax,states,clauses,vars,ms,nodes,value"; }

std::string csv_row(const BenchRecord& r) {
    return r.encoding + "," + r.params + "," + std::to_string(r.t_max) + "," +
           (r.n_states ? std::to_string(r.n_states) : "-") + "," + std::to_string(r.clauses) + "," +
           std::to_string(r.vars) + "," + std::to_string(r.ms) + "," + std::to_string(r.nodes) + "," +
           to_string(r.value);
}

PointOutcome run_point(const ProblemInstance& inst, const EncodingConfig& cfg, const SolverConfig& solver,
                       const std::string& params, const VerifyOptions& verify) {
    PointOutcome out;
    EncodedProblem ep = assemble(inst, cfg);
    out.result = solve(ep.qbf, solver);
    auto& r = out.record;
    r.encoding = to_string(cfg.kind);
    r.params = params;
    r.t_max = cfg.t_max;
    r.n_states = cfg.kind == PlanKind::Sequence ? 0 : cfg.n_states;
    r.clauses = ep.qbf.matrix.size();
    r.vars = static_cast<std::size_t>(ep.qbf.num_vars);
    r.ms = out.result.stats.ms;
    r.nodes = out.result.stats.nodes;
    r.value = out.result.value;
    if (out.result.value == Truth::True) {
        Plan p = extract_plan(ep, out.result.witness.value_or(std::vector<int>{}));
        out.verification = verify_plan(p, inst, cfg.t_max, verify);
        if (!out.verification.valid)
            throw InconsistentPlan("plan for " + params + " " + r.encoding + " tmax=" + std::to_string(cfg.t_max) +
                                   " failed verification: " + out.verification.failures.front().reason);
        out.plan = std::move(p);
    }
    return out;
}

std::vector<std::pair<int, int>> search_points(PlanKind kind, int max_t_max, int max_states) {
    std::vector<std::pair<int, int>> pts;
    if (kind == PlanKind::Sequence) {
        for (int t = 1; t <= max_t_max; ++t) pts.emplace_back(t, 0);
        return pts;
    }
    for (int sum = 2; sum <= max_t_max + max_states; ++sum)
        for (int t = 1; t <= max_t_max; ++t) {
            int s = sum - t;
            if (s >= 1 && s <= max_states) pts.emplace_back(t, s);
        }
    return pts;
}

PlanSearchResult plan_search(const ProblemInstance& inst, PlanKind kind, const SearchLimits& limits,
                             const std::string& params) {
    if (limits.max_t_max < 1 || (kind != PlanKind::Sequence && limits.max_states < 1))
        throw std::invalid_argument("search limits must be positive");
    const auto pts = search_points(kind, limits.max_t_max, limits.max_states);
    auto config = [&](std::pair<int, int> pt) {
        EncodingConfig c;
        c.kind = kind;
        c.t_max = pt.first;
        c.n_states = kind == PlanKind::Sequence ? 1 : pt.second;
        c.quant = limits.quant;
        c.mutex = limits.mutex;
        c.use_invariants = limits.use_invariants;
        return c;
    };
    SolverConfig sc = limits.solver;
    if (limits.time_cap_ms > 0) sc.time_cap_ms = limits.time_cap_ms;

    PlanSearchResult res;
    auto take = [&](PointOutcome& o, std::pair<int, int> pt) {
        res.records.push_back(o.record);
        if (o.record.value == Truth::Unknown) res.hit_cap = true;
        if (o.plan) {
            res.plan = std::move(o.plan);
            res.t_max = pt.first;
            res.n_states = pt.second;
            res.verification = std::move(o.verification);
            return true;
        }
        return false;
    };

    if (!limits.concurrent) {
        for (auto pt : pts) {
            PointOutcome o = run_point(inst, config(pt), sc, params, limits.verify);
            if (take(o, pt)) break;
        }
        return res;
    }
    int width = 1;
#ifdef _OPENMP
    width = std::max(1, omp_get_max_threads());
#endif
    for (std::size_t start = 0; start < pts.size(); start += static_cast<std::size_t>(width)) {
        std::size_t end = std::min(pts.size(), start + static_cast<std::size_t>(width));
        std::vector<PointOutcome> wave(end - start);
        std::vector<std::string> errors(end - start);
        const auto n = static_cast<std::int64_t>(end - start);
#pragma omp parallel for schedule(dynamic, 1)
        for (std::int64_t i = 0; i < n; ++i) {
            auto k = static_cast<std::size_t>(i);
            try {
                wave[k] = run_point(inst, config(pts[start + k]), sc, params, limits.verify);
            } catch (const std::exception& e) {
                errors[k] = e.what();
            }
        }
        for (std::size_t k = 0; k < wave.size(); ++k) {
            if (!errors[k].empty()) throw InconsistentPlan(errors[k]);
            if (take(wave[k], pts[start + k])) return res;
        }
    }
    return res;
}

const std::vector<std::string>& benchmark_suites() {
    static const std::vector<std::string> s{"rooms", "blocks3", "blocks4", "example43", "paper-fixtures"};
    return s;
}

namespace {

struct Point {
    PlanKind kind;
    int t_max;
    int n_states;
    QuantMode quant = QuantMode::Aux;
};

void run_points(const ProblemInstance& inst, const std::string& params, const std::vector<Point>& pts,
                MutexMode mutex, const SolverConfig& sc, std::vector<BenchRecord>& out, bool invariants = false) {
    for (const auto& p : pts) {
        EncodingConfig c;
        c.use_invariants = invariants;
        c.kind = p.kind;
        c.t_max = p.t_max;
        c.n_states = p.n_states;
        c.quant = p.quant;
        c.mutex = mutex;
        out.push_back(run_point(inst, c, sc, params).record);
    }
}

}  // namespace

std::vector<BenchRecord> run_benchmark(const std::string& suite, const SolverConfig& solver, std::int64_t time_cap_ms) {
    SolverConfig sc = solver;
    if (time_cap_ms > 0) sc.time_cap_ms = time_cap_ms;
    std::vector<BenchRecord> out;
    using K = PlanKind;
    if (suite == "rooms") {
        for (int n : {5, 13, 16, 20}) {
            SearchLimits lim;
            lim.max_t_max = n - 1;
            lim.solver = sc;
            lim.verify.scenario_cap = 10000;
            auto r = plan_search(gen_rooms(n), K::Sequence, lim, "rooms-" + std::to_string(n));
            out.insert(out.end(), r.records.begin(), r.records.end());
        }
    } else if (suite == "blocks3") {
        run_points(gen_blocks(3), "blocks-3",
                   {{K::Automaton, 4, 4}, {K::Automaton, 5, 3}, {K::Automaton, 5, 4}, {K::Phased, 4, 3},
                    {K::Phased, 5, 2}, {K::Phased, 5, 3}, {K::Sequence, 4, 1}, {K::Sequence, 5, 1}},
                   MutexMode::DependentPairs, sc, out, true);
    } else if (suite == "blocks4") {
        run_points(gen_blocks(4), "blocks-4",
                   {{K::Phased, 6, 3}, {K::Phased, 7, 2}, {K::Phased, 7, 3}, {K::Sequence, 6, 1}, {K::Sequence, 7, 1}},
                   MutexMode::DependentPairs, sc, out, true);
    } else if (suite == "example43") {
        auto inst = parse_domain(example43_domain());
        std::vector<Point> grid;
        for (int s = 1; s <= 3; ++s)
            for (int t = 1; t <= 6; ++t) grid.push_back({K::Phased, t, s});
        run_points(inst, "example43", grid, MutexMode::AllPairs, sc, out);
        SearchLimits lim;
        lim.max_t_max = 4;
        lim.max_states = 3;
        lim.solver = sc;
        auto r = plan_search(inst, K::Automaton, lim, "example43");
        out.insert(out.end(), r.records.begin(), r.records.end());
    } else if (suite == "paper-fixtures") {
        auto inst = parse_domain(two_blocks_domain());
        run_points(inst, "two-blocks",
                   {{K::Sequence, 1, 1}, {K::Sequence, 2, 1}, {K::Sequence, 2, 1, QuantMode::Direct},
                    {K::Automaton, 2, 2}, {K::Phased, 2, 2}},
                   MutexMode::AllPairs, sc, out);
    } else {
        throw std::invalid_argument("unknown suite '" + suite + "'");
    }
    return out;
}

}  // namespace qplan
