// qplan: encode planning problems as QBF, solve, search for plans, verify them.
#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <sstream>

#include "qplan/domain.hpp"
#include "qplan/encoder.hpp"
#include "qplan/generators.hpp"
#include "qplan/invariants.hpp"
#include "qplan/plan.hpp"
#include "qplan/qdimacs.hpp"
#include "qplan/reduction.hpp"
#include "qplan/solver.hpp"
#include "qplan/workbench.hpp"

namespace {

using namespace qplan;

constexpr int kExitTrue = 0;
constexpr int kExitFalse = 1;
constexpr int kExitUnknown = 2;
constexpr int kExitUsage = 10;
constexpr int kExitFormat = 11;
constexpr int kExitError = 12;

struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

std::string slurp(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw UsageError("cannot read " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void emit(const std::string& path, const std::string& text) {
    if (path.empty() || path == "-") {
        std::cout << text;
        return;
    }
    std::ofstream out(path, std::ios::binary);
    if (!out) throw UsageError("cannot write " + path);
    out << text;
}

int exit_for(Truth t) {
    switch (t) {
        case Truth::True: return kExitTrue;
        case Truth::False: return kExitFalse;
        default: return kExitUnknown;
    }
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"qplan - conditional planning via quantified Boolean formulae"};
    app.require_subcommand(1);

    // encode
    std::string domain_path, out_path, kind_s = "sequence", quant_s = "aux", mutex_s = "all";
    int t_max = 1, n_states = 1;
    bool invariants = false, dump_invariants = false;
    auto* enc = app.add_subcommand("encode", "Write the QBF for a domain as QDIMACS");
    enc->add_option("--domain", domain_path, "Domain file")->required();
    enc->add_option("--kind", kind_s, "automaton|phased|sequence")->required();
    enc->add_option("--tmax", t_max, "Horizon")->required()->check(CLI::PositiveNumber);
    enc->add_option("--states", n_states, "Plan states")->check(CLI::PositiveNumber);
    enc->add_option("--quant", quant_s, "aux|direct");
    enc->add_flag("--invariants", invariants, "Add synthesized 2-literal invariants");
    enc->add_flag("--dump-invariants", dump_invariants, "Print the invariants to stderr");
    enc->add_option("--mutex", mutex_s, "dep|all");
    enc->add_option("-o,--out", out_path, "Output file (default stdout)");

    // solve
    std::string qdimacs_path;
    bool no_partition = false, no_failed = false, no_probing = false, oracle = false;
    std::uint64_t seed = 0;
    std::int64_t time_cap = 0;
    auto* sol = app.add_subcommand("solve", "Decide a QDIMACS file");
    sol->add_option("file", qdimacs_path, "QDIMACS file")->required();
    sol->add_flag("--no-partition", no_partition);
    sol->add_flag("--no-failed-literal", no_failed);
    sol->add_flag("--no-probing", no_probing);
    sol->add_flag("--oracle", oracle, "Decide by full expansion instead");
    sol->add_option("--seed", seed);
    sol->add_option("--time-cap", time_cap, "Milliseconds");

    // plan
    int max_t_max = 10, max_states = 4;
    std::string plan_out;
    bool concurrent = false;
    auto* pl = app.add_subcommand("plan", "Search for the smallest plan");
    pl->add_option("--domain", domain_path)->required();
    pl->add_option("--kind", kind_s)->required();
    pl->add_option("--quant", quant_s);
    pl->add_option("--mutex", mutex_s);
    pl->add_flag("--invariants", invariants);
    pl->add_option("--max-tmax", max_t_max)->required()->check(CLI::PositiveNumber);
    pl->add_option("--max-states", max_states)->check(CLI::PositiveNumber);
    pl->add_option("--time-cap", time_cap, "Milliseconds per solver call");
    pl->add_flag("--concurrent", concurrent, "Solve parameter points in parallel");
    pl->add_option("--out", plan_out, "Plan JSON file (default stdout)");

    // verify
    std::string plan_path;
    std::uint64_t cap = 100000;
    bool show_trace = false;
    auto* ver = app.add_subcommand("verify", "Check a plan against every initial state and outcome");
    ver->add_option("--domain", domain_path)->required();
    ver->add_option("--plan", plan_path)->required();
    ver->add_option("--tmax", t_max)->required()->check(CLI::PositiveNumber);
    ver->add_option("--cap", cap, "Scenario cap before sampling");
    ver->add_option("--seed", seed);
    ver->add_flag("--trace", show_trace, "Print the trace of the first failure");

    // gen
    std::string family;
    int size = 0;
    auto* gen = app.add_subcommand("gen", "Generate a benchmark domain");
    gen->add_option("family", family, "rooms|blocks")->required()->check(CLI::IsMember({"rooms", "blocks"}));
    gen->add_option("n", size)->required();
    gen->add_option("-o,--out", out_path);

    // qbf2cp
    auto* red = app.add_subcommand("qbf2cp", "Turn a forall-exists QBF into a planning domain");
    red->add_option("file", qdimacs_path)->required();
    red->add_option("-o,--out", out_path);

    // bench
    std::string suite, csv_path;
    auto* bench = app.add_subcommand("bench", "Run a benchmark suite and print CSV");
    bench->add_option("--suite", suite)->required()->check(CLI::IsMember(benchmark_suites()));
    bench->add_option("--csv", csv_path);
    bench->add_option("--time-cap", time_cap, "Milliseconds per solver call");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitUsage;
    }

    try {
        if (*enc) {
            auto inst = parse_domain(slurp(domain_path));
            EncodingConfig cfg;
            cfg.kind = parse_plan_kind(kind_s);
            cfg.t_max = t_max;
            cfg.n_states = n_states;
            cfg.quant = parse_quant_mode(quant_s);
            cfg.mutex = parse_mutex_mode(mutex_s);
            cfg.use_invariants = invariants;
            if (dump_invariants) {
                InvariantOptions io;
                io.exclusive_operators = cfg.mutex == MutexMode::AllPairs;
                for (const auto& c : synthesize_invariants(inst, io)) std::cerr << to_string(inst, c) << '\n';
            }
            auto ep = assemble(inst, cfg);
            emit(out_path, qdimacs_write(ep.qbf));
            return kExitTrue;
        }
        if (*sol) {
            auto q = qdimacs_read(slurp(qdimacs_path));
            if (oracle) {
                bool v = expand_eval(q);
                std::cout << "s cnf " << (v ? 1 : 0) << "\nresult=" << (v ? "true" : "false") << '\n';
                return v ? kExitTrue : kExitFalse;
            }
            SolverConfig sc;
            sc.enable_partitioning = !no_partition;
            sc.enable_failed_literal = !no_failed;
            sc.enable_universal_probing = !no_probing;
            sc.seed = seed;
            sc.time_cap_ms = time_cap;
            auto r = solve(q, sc);
            std::cout << "s cnf " << (r.value == Truth::True ? "1" : r.value == Truth::False ? "0" : "-1") << '\n';
            if (r.witness) std::cout << witness_line(*r.witness) << '\n';
            std::cout << stats_line(r) << '\n';
            return exit_for(r.value);
        }
        if (*pl) {
            auto inst = parse_domain(slurp(domain_path));
            SearchLimits lim;
            lim.max_t_max = max_t_max;
            lim.max_states = max_states;
            lim.time_cap_ms = time_cap;
            lim.quant = parse_quant_mode(quant_s);
            lim.mutex = parse_mutex_mode(mutex_s);
            lim.use_invariants = invariants;
            lim.concurrent = concurrent;
            auto kind = parse_plan_kind(kind_s);
            auto res = plan_search(inst, kind, lim, domain_path);
            std::cerr << csv_header() << '\n';
            for (const auto& r : res.records) std::cerr << csv_row(r) << '\n';
            if (!res.plan) {
                std::cerr << (res.hit_cap ? "no plan decided within the time cap\n" : "no plan within limits\n");
                return res.hit_cap ? kExitUnknown : kExitFalse;
            }
            std::cerr << "plan found at tmax=" << res.t_max;
            if (kind != PlanKind::Sequence) std::cerr << " states=" << res.n_states;
            std::cerr << ", verified over " << res.verification.scenarios << " scenarios"
                      << (res.verification.exhaustive ? "" : " (sampled)") << '\n';
            emit(plan_out, plan_to_json(*res.plan, inst) + "\n");
            return kExitTrue;
        }
        if (*ver) {
            auto inst = parse_domain(slurp(domain_path));
            auto plan = plan_from_json(slurp(plan_path), inst);
            VerifyOptions vo;
            vo.scenario_cap = cap;
            vo.seed = seed;
            auto rep = verify_plan(plan, inst, t_max, vo);
            std::cout << (rep.valid ? "valid" : "invalid") << " scenarios=" << rep.scenarios
                      << " failures=" << rep.failure_count << (rep.exhaustive ? " exhaustive" : " sampled") << '\n';
            for (const auto& f : rep.failures) {
                std::cout << "  " << f.reason << " from {";
                bool first = true;
                for (int b : inst.base_facts())
                    if (f.initial[b]) {
                        std::cout << (first ? "" : " ") << inst.fact_name(b);
                        first = false;
                    }
                std::cout << "}\n";
            }
            if (show_trace && !rep.failures.empty()) {
                const auto& f = rep.failures.front();
                std::size_t pos = 0;
                auto replay = [&](int, int, std::size_t) { return pos < f.choices.size() ? f.choices[pos++] : 0; };
                std::cout << format_trace(inst, execute(plan, inst, f.initial, t_max, replay));
            }
            return rep.valid ? kExitTrue : kExitFalse;
        }
        if (*gen) {
            emit(out_path, family == "rooms" ? rooms_domain(size) : blocks_domain(size));
            return kExitTrue;
        }
        if (*red) {
            auto f = forall_exists_from(qdimacs_read(slurp(qdimacs_path)));
            emit(out_path, print_domain(qbf_to_planning(f)));
            return kExitTrue;
        }
        if (*bench) {
            auto recs = run_benchmark(suite, {}, time_cap);
            std::ostringstream os;
            os << csv_header() << '\n';
            for (const auto& r : recs) os << csv_row(r) << '\n';
            emit(csv_path, os.str());
            return kExitTrue;
        }
    } catch (const UsageError& e) {
        std::cerr << "qplan: " << e.what() << '\n';
        return kExitUsage;
    } catch (const DomainError& e) {
        std::cerr << "qplan: domain: " << e.what() << '\n';
        return kExitFormat;
    } catch (const FormatError& e) {
        std::cerr << "qplan: qdimacs: " << e.what() << '\n';
        return kExitFormat;
    } catch (const PlanFormatError& e) {
        std::cerr << "qplan: plan: " << e.what() << '\n';
        return kExitFormat;
    } catch (const std::invalid_argument& e) {
        std::cerr << "qplan: " << e.what() << '\n';
        return kExitUsage;
    } catch (const std::exception& e) {
        std::cerr << "qplan: " << e.what() << '\n';
        return kExitError;
    }
    return kExitUsage;
}
