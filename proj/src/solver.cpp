#include "qplan/solver.hpp"

#include <algorithm>
#include <chrono>
#include <climits>
#include <functional>
#include <span>
#include <cstdlib>
#include <map>
#include <numeric>
#include <stdexcept>
#include <unordered_map>

namespace qplan {

std::string to_string(Truth t) {
    switch (t) {
        case Truth::False: return "false";
        case Truth::True: return "true";
        case Truth::Unknown: return "unknown";
    }
    return "unknown";
}

std::string stats_line(const SolverResult& r) {
    return "result=" + to_string(r.value) + " nodes=" + std::to_string(r.stats.nodes) +
           " props=" + std::to_string(r.stats.props) + " ms=" + std::to_string(r.stats.ms);
}

std::string witness_line(const std::vector<int>& witness) {
    std::string s = "v";
    for (int l : witness) s += " " + std::to_string(l);
    return s + " 0";
}

namespace {

// Prefix with free matrix variables prepended as an outermost existential block.
std::vector<Block> effective_prefix(const QbfProblem& q) {
    std::vector<char> quantified(static_cast<std::size_t>(q.num_vars) + 1, 0);
    for (const auto& b : q.prefix)
        for (int v : b.vars) quantified[static_cast<std::size_t>(v)] = 1;
    Block free_block{Quant::Exists, {}};
    for (const auto& c : q.matrix) {
        for (int l : c) {
            auto v = static_cast<std::size_t>(std::abs(l));
            if (!quantified[v]) {
                quantified[v] = 1;
                free_block.vars.push_back(std::abs(l));
            }
        }
    }
    QbfProblem tmp;
    tmp.prefix.push_back(std::move(free_block));
    tmp.prefix.insert(tmp.prefix.end(), q.prefix.begin(), q.prefix.end());
    tmp.normalize_prefix();
    return tmp.prefix;
}

int lit_code(int lit) { return 2 * std::abs(lit) + (lit < 0 ? 1 : 0); }

using Clock = std::chrono::steady_clock;

class Engine {
public:
    Engine(const QbfProblem& q, const SolverConfig& cfg) : cfg_(cfg), start_(Clock::now()) {
        nv_ = q.num_vars;
        for (const auto& c : q.matrix)
            for (int l : c) nv_ = std::max(nv_, std::abs(l));
        for (const auto& b : q.prefix)
            for (int v : b.vars) nv_ = std::max(nv_, v);
        auto prefix = effective_prefix(q);
        blk_.assign(static_cast<std::size_t>(nv_) + 1, -1);
        univ_.assign(static_cast<std::size_t>(nv_) + 1, 0);
        in_b1_.assign(static_cast<std::size_t>(nv_) + 1, 0);
        for (std::size_t i = 0; i < prefix.size(); ++i) {
            block_quant_.push_back(prefix[i].quant);
            for (int v : prefix[i].vars) {
                blk_[static_cast<std::size_t>(v)] = static_cast<int>(i);
                univ_[static_cast<std::size_t>(v)] = prefix[i].quant == Quant::Forall;
            }
        }
        if (!q.prefix.empty() && q.prefix.front().quant == Quant::Exists) {
            b1_vars_ = q.prefix.front().vars;
            for (int v : b1_vars_) in_b1_[static_cast<std::size_t>(v)] = 1;
            has_b1_ = true;
        }
        occ_.resize(2 * static_cast<std::size_t>(nv_) + 2);
        for (const auto& c0 : q.matrix) {
            Clause c = c0;
            if (!normalize_clause(c)) continue;
            int id = static_cast<int>(cstart_.size());
            cstart_.push_back(static_cast<int>(pool_.size()));
            csize_.push_back(static_cast<int>(c.size()));
            bool hu = false;
            for (int l : c) {
                pool_.push_back(l);
                occ_[static_cast<std::size_t>(lit_code(l))].push_back(id);
                hu = hu || univ_[static_cast<std::size_t>(std::abs(l))];
            }
            has_univ_.push_back(hu);
        }
        nsat_.assign(cstart_.size(), 0);
        nfalse_.assign(cstart_.size(), 0);
        val_.assign(static_cast<std::size_t>(nv_) + 1, 0);
        mark_.assign(static_cast<std::size_t>(nv_) + 1, 0);
        la_pos_.assign(static_cast<std::size_t>(nv_) + 1, 0);
        la_neg_.assign(static_cast<std::size_t>(nv_) + 1, 0);
        la_epoch_.assign(static_cast<std::size_t>(nv_) + 1, 0);
    }

    SolverResult run() {
        SolverResult res;
        Truth t = root();
        res.value = t;
        if (t == Truth::True && has_b1_) {
            std::vector<int> w;
            w.reserve(b1_vars_.size());
            std::vector<int> sorted = b1_vars_;
            std::sort(sorted.begin(), sorted.end());
            for (int v : sorted) {
                auto it = wit_.find(v);
                w.push_back(it != wit_.end() && it->second ? v : -v);
            }
            res.witness = std::move(w);
        }
        res.stats.nodes = nodes_;
        res.stats.props = props_;
        res.stats.ms = std::chrono::duration_cast<std::chrono::milliseconds>(Clock::now() - start_).count();
        return res;
    }

private:
    enum class Look : std::uint8_t { Refuted, Changed, Stable, Aborted };
    enum class Exam : std::uint8_t { None, Unit, Conflict };

    // ---- assignment and propagation -------------------------------------

    void assign(int lit) {
        auto v = static_cast<std::size_t>(std::abs(lit));
        val_[v] = lit > 0 ? 1 : -1;
        trail_.push_back(lit);
        ++props_;
        for (int c : occ_[static_cast<std::size_t>(lit_code(lit))]) ++nsat_[static_cast<std::size_t>(c)];
        for (int c : occ_[static_cast<std::size_t>(lit_code(-lit))]) ++nfalse_[static_cast<std::size_t>(c)];
    }

    void undo(std::size_t mark) {
        while (trail_.size() > mark) {
            int lit = trail_.back();
            trail_.pop_back();
            val_[static_cast<std::size_t>(std::abs(lit))] = 0;
            for (int c : occ_[static_cast<std::size_t>(lit_code(lit))]) --nsat_[static_cast<std::size_t>(c)];
            for (int c : occ_[static_cast<std::size_t>(lit_code(-lit))]) --nfalse_[static_cast<std::size_t>(c)];
        }
        qhead_ = std::min(qhead_, mark);
    }

    int value(int lit) const {
        int v = val_[static_cast<std::size_t>(std::abs(lit))];
        return lit > 0 ? v : -v;
    }

    Exam examine(int c, int& unit) const {
        const auto uc = static_cast<std::size_t>(c);
        const int* lits = pool_.data() + cstart_[uc];
        const int n = csize_[uc];
        if (prop_mode_ || !has_univ_[uc]) {
            int open = n - nfalse_[uc];
            if (open == 0) return Exam::Conflict;
            if (open > 1) return Exam::None;
            for (int i = 0; i < n; ++i) {
                if (val_[static_cast<std::size_t>(std::abs(lits[i]))] == 0) {
                    unit = lits[i];
                    return Exam::Unit;
                }
            }
            return Exam::Conflict;
        }
        int e_cnt = 0;
        int e_lit = 0;
        int e_blk = -1;
        int min_u_blk = INT_MAX;
        for (int i = 0; i < n; ++i) {
            auto v = static_cast<std::size_t>(std::abs(lits[i]));
            if (val_[v] != 0) continue;
            if (univ_[v]) {
                min_u_blk = std::min(min_u_blk, blk_[v]);
            } else {
                ++e_cnt;
                e_lit = lits[i];
                e_blk = std::max(e_blk, blk_[v]);
                if (e_cnt > 1) return Exam::None;
            }
        }
        if (e_cnt == 0) return Exam::Conflict;
        if (min_u_blk > e_blk) {
            unit = e_lit;
            return Exam::Unit;
        }
        return Exam::None;
    }

    bool propagate() {
        while (qhead_ < trail_.size()) {
            int lit = trail_[qhead_++];
            for (int c : occ_[static_cast<std::size_t>(lit_code(-lit))]) {
                if (nsat_[static_cast<std::size_t>(c)] != 0) continue;
                int unit = 0;
                Exam e = examine(c, unit);
                if (e == Exam::Conflict) return false;
                if (e == Exam::Unit) assign(unit);
            }
        }
        return true;
    }

    bool assign_and_propagate(int lit) {
        int cur = value(lit);
        if (cur < 0) return false;
        if (cur == 0) assign(lit);
        return propagate();
    }

    // ---- budget ----------------------------------------------------------

    bool out_of_budget() {
        if (aborted_) return true;
        if (cfg_.node_cap != 0 && nodes_ > cfg_.node_cap) aborted_ = true;
        if (cfg_.time_cap_ms > 0 && (++budget_tick_ & 63U) == 0) {
            auto ms = std::chrono::duration_cast<std::chrono::milliseconds>(Clock::now() - start_).count();
            if (ms > cfg_.time_cap_ms) aborted_ = true;
        }
        return aborted_;
    }

    // ---- search ------------------------------------------------------------

    Truth root() {
        for (std::size_t c = 0; c < cstart_.size(); ++c) {
            if (csize_[c] == 0) return Truth::False;
        }
        for (std::size_t c = 0; c < cstart_.size(); ++c) {
            if (nsat_[c] != 0) continue;
            int unit = 0;
            Exam e = examine(static_cast<int>(c), unit);
            if (e == Exam::Conflict) return Truth::False;
            if (e == Exam::Unit && !assign_and_propagate(unit)) return Truth::False;
        }
        std::vector<int> live(cstart_.size());
        std::iota(live.begin(), live.end(), 0);
        std::vector<int> w;
        capture(0, w);
        Truth t = node(live, w);
        if (t == Truth::True)
            for (int l : w) wit_[std::abs(l)] = l > 0;
        return t;
    }

    void capture(std::size_t from, std::vector<int>& out) const {
        for (std::size_t i = from; i < trail_.size(); ++i)
            if (in_b1_[static_cast<std::size_t>(std::abs(trail_[i]))]) out.push_back(trail_[i]);
    }

    void filter_live(const std::vector<int>& in, std::vector<int>& out) const {
        out.clear();
        for (int c : in)
            if (nsat_[static_cast<std::size_t>(c)] == 0) out.push_back(c);
    }

    // Unassigned variables of the live clauses, each once.
    std::vector<int> live_vars(const std::vector<int>& live) {
        std::vector<int> out;
        ++stamp_;
        for (int c : live) {
            const auto uc = static_cast<std::size_t>(c);
            for (int i = 0; i < csize_[uc]; ++i) {
                int v = std::abs(pool_[static_cast<std::size_t>(cstart_[uc] + i)]);
                auto uv = static_cast<std::size_t>(v);
                if (val_[uv] == 0 && mark_[uv] != stamp_) {
                    mark_[uv] = stamp_;
                    out.push_back(v);
                }
            }
        }
        return out;
    }

    Truth node(const std::vector<int>& live_in, std::vector<int>& wit) {
        const std::size_t entry = trail_.size();
        std::vector<int> live;
        filter_live(live_in, live);
        while (true) {
            if (live.empty()) {
                capture(entry, wit);
                return Truth::True;
            }
            if (out_of_budget()) return Truth::Unknown;
            if (!cfg_.enable_failed_literal && !cfg_.enable_universal_probing) break;
            Look l = lookahead(live);
            if (l == Look::Refuted) return Truth::False;
            if (l == Look::Aborted) return Truth::Unknown;
            if (l == Look::Stable) break;
            std::vector<int> next;
            filter_live(live, next);
            live.swap(next);
        }

        if (cfg_.enable_partitioning) {
            auto comps = components(live);
            if (comps.size() > 1) {
                std::sort(comps.begin(), comps.end(),
                          [](const auto& a, const auto& b) { return a.size() < b.size(); });
                std::vector<int> sub;
                for (const auto& comp : comps) {
                    std::size_t m = trail_.size();
                    Truth t = node(comp, sub);
                    undo(m);
                    if (t != Truth::True) return t;
                }
                capture(entry, wit);
                wit.insert(wit.end(), sub.begin(), sub.end());
                return Truth::True;
            }
        }

        int var = 0;
        bool positive_first = true;
        pick_branch(live, var, positive_first);
        ++nodes_;
        if (out_of_budget()) return Truth::Unknown;
        const bool exists = !univ_[static_cast<std::size_t>(var)];
        const int first = positive_first ? var : -var;
        std::vector<int> sub;
        bool unknown = false;
        for (int lit : {first, -first}) {
            std::size_t m = trail_.size();
            Truth t = Truth::False;
            std::vector<int> branch_wit;
            if (assign_and_propagate(lit)) {
                t = node(live, branch_wit);
                if (t == Truth::True) capture(m, branch_wit);
            }
            undo(m);
            if (t == Truth::Unknown) {
                if (!exists) return Truth::Unknown;
                unknown = true;
                continue;
            }
            if (exists && t == Truth::True) {
                capture(entry, wit);
                wit.insert(wit.end(), branch_wit.begin(), branch_wit.end());
                return Truth::True;
            }
            if (!exists && t == Truth::False) return Truth::False;
            if (!exists) sub.insert(sub.end(), branch_wit.begin(), branch_wit.end());
        }
        if (exists) return unknown ? Truth::Unknown : Truth::False;
        capture(entry, wit);
        wit.insert(wit.end(), sub.begin(), sub.end());
        return Truth::True;
    }

    void pick_branch(const std::vector<int>& live, int& var, bool& positive_first) {
        int best_blk = INT_MAX;
        for (int c : live) {
            const auto uc = static_cast<std::size_t>(c);
            for (int i = 0; i < csize_[uc]; ++i) {
                auto v = static_cast<std::size_t>(std::abs(pool_[static_cast<std::size_t>(cstart_[uc] + i)]));
                if (val_[v] == 0) best_blk = std::min(best_blk, blk_[v]);
            }
        }
        std::unordered_map<int, std::pair<int, int>> counts;  // var -> (pos, neg)
        for (int c : live) {
            const auto uc = static_cast<std::size_t>(c);
            for (int i = 0; i < csize_[uc]; ++i) {
                int l = pool_[static_cast<std::size_t>(cstart_[uc] + i)];
                auto v = static_cast<std::size_t>(std::abs(l));
                if (val_[v] != 0 || blk_[v] != best_blk) continue;
                auto& e = counts[std::abs(l)];
                (l > 0 ? e.first : e.second) += 1;
            }
        }
        int best = 0;
        std::int64_t best_score = -1;
        std::uint64_t best_tie = 0;
        for (const auto& [v, pn] : counts) {
            std::int64_t score = pn.first + pn.second;
            auto uv = static_cast<std::size_t>(v);
            if (epoch_ != 0 && la_epoch_[uv] == epoch_)
                score = (std::int64_t{la_pos_[uv]} + 1) * (la_neg_[uv] + 1) * 1024 + score;
            std::uint64_t tie = cfg_.seed == 0 ? static_cast<std::uint64_t>(v) : mix(static_cast<std::uint64_t>(v) ^ cfg_.seed);
            if (score > best_score || (score == best_score && tie < best_tie)) {
                best = v;
                best_score = score;
                best_tie = tie;
            }
        }
        var = best;
        const auto& pn = counts[best];
        if (univ_[static_cast<std::size_t>(best)]) {
            // Falsify as many clauses as possible first.
            positive_first = pn.first <= pn.second;
        } else {
            positive_first = pn.first >= pn.second;
        }
    }

    static std::uint64_t mix(std::uint64_t x) {
        x ^= x >> 33;
        x *= 0xff51afd7ed558ccdULL;
        x ^= x >> 33;
        x *= 0xc4ceb9fe1a85ec53ULL;
        x ^= x >> 33;
        return x;
    }

    std::vector<std::vector<int>> components(const std::vector<int>& live) {
        std::vector<int> vars = live_vars(live);
        std::unordered_map<int, int> index;
        index.reserve(vars.size() * 2);
        for (std::size_t i = 0; i < vars.size(); ++i) index[vars[i]] = static_cast<int>(i);
        std::vector<int> parent(vars.size());
        std::iota(parent.begin(), parent.end(), 0);
        auto find = [&](int x) {
            while (parent[static_cast<std::size_t>(x)] != x) {
                parent[static_cast<std::size_t>(x)] = parent[static_cast<std::size_t>(parent[static_cast<std::size_t>(x)])];
                x = parent[static_cast<std::size_t>(x)];
            }
            return x;
        };
        std::vector<int> first_var(live.size(), -1);
        for (std::size_t k = 0; k < live.size(); ++k) {
            const auto uc = static_cast<std::size_t>(live[k]);
            int root = -1;
            for (int i = 0; i < csize_[uc]; ++i) {
                int v = std::abs(pool_[static_cast<std::size_t>(cstart_[uc] + i)]);
                if (val_[static_cast<std::size_t>(v)] != 0) continue;
                int r = find(index[v]);
                if (root < 0) {
                    root = r;
                } else if (r != root) {
                    parent[static_cast<std::size_t>(r)] = root;
                }
            }
            first_var[k] = root;
        }
        std::unordered_map<int, std::size_t> comp_of;
        std::vector<std::vector<int>> out;
        for (std::size_t k = 0; k < live.size(); ++k) {
            int r = first_var[k] < 0 ? -1 - static_cast<int>(k) : find(first_var[k]);
            auto it = comp_of.find(r);
            if (it == comp_of.end()) {
                it = comp_of.emplace(r, out.size()).first;
                out.emplace_back();
            }
            out[it->second].push_back(live[k]);
        }
        return out;
    }

    // ---- lookahead: failed literals and universal probing -----------------

    // Tentatively assigns `lits` in propositional mode; returns false on conflict.
    // The assignments stay on the trail for the caller to inspect and undo.
    bool probe(std::span<const int> lits) {
        prop_mode_ = true;
        bool ok = true;
        for (int l : lits) {
            if (!assign_and_propagate(l)) {
                ok = false;
                break;
            }
        }
        prop_mode_ = false;
        return ok;
    }

    Look lookahead(const std::vector<int>& live) {
        std::vector<int> vars = live_vars(live);
        if (vars.empty()) return Look::Stable;
        int b0 = INT_MAX;
        for (int v : vars) b0 = std::min(b0, blk_[static_cast<std::size_t>(v)]);
        std::sort(vars.begin(), vars.end(), [&](int a, int b) {
            int ba = blk_[static_cast<std::size_t>(a)];
            int bb = blk_[static_cast<std::size_t>(b)];
            return ba != bb ? ba < bb : a < b;
        });
        bool changed = false;
        ++epoch_;

        if (cfg_.enable_failed_literal) {
            for (int v : vars) {
                if (out_of_budget()) return Look::Aborted;
                for (int lit : {v, -v}) {
                    if (val_[static_cast<std::size_t>(v)] != 0) break;
                    const bool outer = blk_[static_cast<std::size_t>(v)] == b0;
                    std::size_t m = trail_.size();
                    prop_mode_ = !outer;
                    bool ok = assign_and_propagate(lit);
                    prop_mode_ = false;
                    if (ok && outer) {
                        auto uv = static_cast<std::size_t>(v);
                        if (la_epoch_[uv] != epoch_) {
                            la_epoch_[uv] = epoch_;
                            la_pos_[uv] = la_neg_[uv] = 0;
                        }
                        (lit > 0 ? la_pos_[uv] : la_neg_[uv]) = static_cast<int>(trail_.size() - m);
                    }
                    undo(m);
                    if (ok) continue;
                    if (univ_[static_cast<std::size_t>(v)]) return Look::Refuted;
                    if (!assign_and_propagate(-lit)) return Look::Refuted;
                    changed = true;
                }
            }
        }

        if (cfg_.enable_universal_probing && block_quant_[static_cast<std::size_t>(b0)] == Quant::Exists &&
            static_cast<std::size_t>(b0) + 1 < block_quant_.size() &&
            block_quant_[static_cast<std::size_t>(b0) + 1] == Quant::Forall) {
            Look l = universal_probing(live, b0);
            if (l == Look::Refuted || l == Look::Aborted) return l;
            changed = changed || l == Look::Changed;
        }
        return changed ? Look::Changed : Look::Stable;
    }

    Look universal_probing(const std::vector<int>& live_in, int b0) {
        std::vector<int> live;
        filter_live(live_in, live);
        std::vector<int> vars = live_vars(live);
        std::vector<int> xs;
        std::vector<int> ys;
        for (int v : vars) {
            int b = blk_[static_cast<std::size_t>(v)];
            if (b == b0) xs.push_back(v);
            if (b == b0 + 1) ys.push_back(v);
        }
        if (ys.empty()) return Look::Stable;
        std::sort(xs.begin(), xs.end());
        std::sort(ys.begin(), ys.end());

        std::map<int, bool> forced;  // outer existential var -> value
        bool contradiction = false;
        auto record = [&](int lit) {
            auto [it, fresh] = forced.emplace(std::abs(lit), lit > 0);
            if (!fresh && it->second != (lit > 0)) contradiction = true;
        };

        // Returns false when the probe refutes the node.
        auto run_probe = [&](const std::vector<int>& ylits, std::vector<int>* implied) -> bool {
            std::size_t m = trail_.size();
            if (!probe(ylits)) {
                undo(m);
                return false;
            }
            for (std::size_t i = m; i < trail_.size(); ++i) {
                int l = trail_[i];
                if (blk_[static_cast<std::size_t>(std::abs(l))] == b0) record(l);
            }
            if (implied) implied->assign(trail_.begin() + static_cast<std::ptrdiff_t>(m), trail_.end());
            if (cfg_.enable_failed_literal) {
                for (int x : xs) {
                    for (int lit : {x, -x}) {
                        if (val_[static_cast<std::size_t>(x)] != 0) break;
                        std::size_t mm = trail_.size();
                        bool ok = probe(std::span<const int>(&lit, 1));
                        undo(mm);
                        if (!ok) record(-lit);
                    }
                }
            }
            undo(m);
            return true;
        };

        const int full_bits = 7;
        if (static_cast<int>(ys.size()) <= full_bits) {
            const std::uint32_t n = 1U << ys.size();
            std::vector<int> ylits(ys.size());
            for (std::uint32_t p = 0; p < n; ++p) {
                if (out_of_budget()) return Look::Aborted;
                for (std::size_t k = 0; k < ys.size(); ++k) ylits[k] = ((p >> k) & 1U) ? -ys[k] : ys[k];
                if (!run_probe(ylits, nullptr)) return Look::Refuted;
                if (contradiction) return Look::Refuted;
            }
        } else {
            // Most frequent universal variables of the block.
            std::unordered_map<int, int> freq;
            for (int c : live) {
                const auto uc = static_cast<std::size_t>(c);
                for (int i = 0; i < csize_[uc]; ++i) {
                    int v = std::abs(pool_[static_cast<std::size_t>(cstart_[uc] + i)]);
                    if (val_[static_cast<std::size_t>(v)] == 0 && blk_[static_cast<std::size_t>(v)] == b0 + 1) ++freq[v];
                }
            }
            std::vector<int> order = ys;
            std::stable_sort(order.begin(), order.end(), [&](int a, int b) { return freq[a] > freq[b]; });
            int budget = std::max(0, cfg_.probe_budget);
            for (int k = 0; k < budget && k < static_cast<int>(order.size()); ++k) {
                if (out_of_budget()) return Look::Aborted;
                int y = order[static_cast<std::size_t>(k)];
                std::vector<int> pos;
                std::vector<int> neg;
                if (!run_probe({y}, &pos)) return Look::Refuted;
                if (!run_probe({-y}, &neg)) return Look::Refuted;
                if (contradiction) return Look::Refuted;
                // Literals implied under both values of y hold outright.
                std::sort(pos.begin(), pos.end());
                std::sort(neg.begin(), neg.end());
                std::vector<int> both;
                std::set_intersection(pos.begin(), pos.end(), neg.begin(), neg.end(), std::back_inserter(both));
                for (int l : both) {
                    if (univ_[static_cast<std::size_t>(std::abs(l))]) return Look::Refuted;
                    if (blk_[static_cast<std::size_t>(std::abs(l))] != b0) extra_.push_back(l);
                }
            }
        }

        bool changed = false;
        for (const auto& [v, b] : forced) {
            int lit = b ? v : -v;
            if (value(lit) > 0) continue;
            if (!assign_and_propagate(lit)) return Look::Refuted;
            changed = true;
        }
        for (int l : extra_) {
            if (value(l) > 0) continue;
            if (!assign_and_propagate(l)) {
                extra_.clear();
                return Look::Refuted;
            }
            changed = true;
        }
        extra_.clear();
        return changed ? Look::Changed : Look::Stable;
    }

    // ---- data ----------------------------------------------------------------

    SolverConfig cfg_;
    Clock::time_point start_;
    int nv_ = 0;
    std::vector<int> blk_;
    std::vector<char> univ_;
    std::vector<char> in_b1_;
    std::vector<int> b1_vars_;
    bool has_b1_ = false;
    std::vector<Quant> block_quant_;

    std::vector<int> pool_;
    std::vector<int> cstart_;
    std::vector<int> csize_;
    std::vector<char> has_univ_;
    std::vector<std::vector<int>> occ_;

    std::vector<std::int8_t> val_;
    std::vector<int> nsat_;
    std::vector<int> nfalse_;
    std::vector<int> trail_;
    std::size_t qhead_ = 0;
    bool prop_mode_ = false;

    // propagation counts from the last failed-literal pass, per variable
    std::vector<int> la_pos_;
    std::vector<int> la_neg_;
    std::vector<std::uint64_t> la_epoch_;
    std::uint64_t epoch_ = 0;

    std::vector<unsigned> mark_;
    unsigned stamp_ = 0;
    std::vector<int> extra_;

    std::uint64_t nodes_ = 0;
    std::uint64_t props_ = 0;
    std::uint64_t budget_tick_ = 0;
    bool aborted_ = false;
    std::map<int, bool> wit_;
};

}  // namespace

SolverResult solve(const QbfProblem& q, const SolverConfig& cfg) { return Engine(q, cfg).run(); }

Clause universal_reduce(const Clause& c, const std::vector<Block>& prefix) {
    std::unordered_map<int, std::pair<int, bool>> where;  // var -> (block, universal)
    for (std::size_t i = 0; i < prefix.size(); ++i)
        for (int v : prefix[i].vars) where[v] = {static_cast<int>(i), prefix[i].quant == Quant::Forall};
    auto info = [&](int lit) -> std::pair<int, bool> {
        auto it = where.find(std::abs(lit));
        return it == where.end() ? std::pair<int, bool>{-1, false} : it->second;
    };
    int max_e = INT_MIN;
    for (int l : c) {
        auto [b, u] = info(l);
        if (!u) max_e = std::max(max_e, b);
    }
    Clause out;
    for (int l : c) {
        auto [b, u] = info(l);
        if (u && b > max_e) continue;
        out.push_back(l);
    }
    return out;
}

std::vector<std::vector<Clause>> partition(const std::vector<Clause>& m) {
    std::unordered_map<int, int> parent;
    std::function<int(int)> find = [&](int v) {
        auto it = parent.find(v);
        if (it == parent.end()) {
            parent[v] = v;
            return v;
        }
        if (it->second == v) return v;
        int r = find(it->second);
        parent[v] = r;
        return r;
    };
    for (const auto& c : m)
        for (std::size_t i = 1; i < c.size(); ++i) {
            int a = find(std::abs(c[0]));
            int b = find(std::abs(c[i]));
            if (a != b) parent[b] = a;
        }
    std::vector<std::vector<Clause>> out;
    std::unordered_map<int, std::size_t> comp;
    for (const auto& c : m) {
        if (c.empty()) {
            out.push_back({c});
            continue;
        }
        int r = find(std::abs(c[0]));
        auto it = comp.find(r);
        if (it == comp.end()) {
            it = comp.emplace(r, out.size()).first;
            out.emplace_back();
        }
        out[it->second].push_back(c);
    }
    return out;
}

bool expand_eval(const QbfProblem& q) {
    auto prefix = effective_prefix(q);
    std::vector<std::pair<int, bool>> order;  // (var, universal)
    for (const auto& b : prefix)
        for (int v : b.vars) order.emplace_back(v, b.quant == Quant::Forall);
    if (order.size() > 24) throw std::length_error("expand_eval: more than 24 variables");
    int nv = q.num_vars;
    for (const auto& [v, u] : order) nv = std::max(nv, v);
    std::vector<std::int8_t> val(static_cast<std::size_t>(nv) + 1, 0);
    auto matrix_true = [&] {
        for (const auto& c : q.matrix) {
            bool sat = false;
            for (int l : c) {
                std::int8_t x = val[static_cast<std::size_t>(std::abs(l))];
                if ((l > 0 && x > 0) || (l < 0 && x < 0)) {
                    sat = true;
                    break;
                }
            }
            if (!sat) return false;
        }
        return true;
    };
    std::function<bool(std::size_t)> rec = [&](std::size_t i) -> bool {
        if (i == order.size()) return matrix_true();
        auto [v, u] = order[i];
        val[static_cast<std::size_t>(v)] = 1;
        bool a = rec(i + 1);
        val[static_cast<std::size_t>(v)] = -1;
        bool b = rec(i + 1);
        val[static_cast<std::size_t>(v)] = 0;
        return u ? (a && b) : (a || b);
    };
    return rec(0);
}

Truth check_witness(const QbfProblem& q, const std::vector<int>& witness, const SolverConfig& cfg) {
    QbfProblem fixed = q;
    for (int l : witness) fixed.matrix.push_back({l});
    return solve(fixed, cfg).value;
}

}  // namespace qplan
