#include "qplan/qbf.hpp"

#include <algorithm>
#include <cstdlib>

namespace qplan {

bool normalize_clause(Clause& c) {
    std::sort(c.begin(), c.end(), [](int x, int y) {
        int ax = std::abs(x);
        int ay = std::abs(y);
        return ax != ay ? ax < ay : x < y;
    });
    c.erase(std::unique(c.begin(), c.end()), c.end());
    for (std::size_t i = 1; i < c.size(); ++i)
        if (c[i] == -c[i - 1]) return false;
    return true;
}

void QbfProblem::normalize_prefix() {
    std::vector<Block> out;
    for (auto& b : prefix) {
        if (b.vars.empty()) continue;
        if (!out.empty() && out.back().quant == b.quant) {
            out.back().vars.insert(out.back().vars.end(), b.vars.begin(), b.vars.end());
        } else {
            out.push_back(std::move(b));
        }
    }
    prefix = std::move(out);
}

void QbfProblem::update_num_vars() {
    int n = atlas.max_var();
    for (const auto& b : prefix)
        for (int v : b.vars) n = std::max(n, v);
    for (const auto& c : matrix)
        for (int l : c) n = std::max(n, std::abs(l));
    num_vars = n;
}

std::size_t QbfProblem::literal_count() const {
    std::size_t n = 0;
    for (const auto& c : matrix) n += c.size();
    return n;
}

namespace {

constexpr std::size_t kDistributeLimit = 16;

int signed_lit(const Formula& f) {
    Literal l = f.as_literal();
    return l.positive ? l.atom : -l.atom;
}

class Clausifier {
public:
    Clausifier(VariableAtlas& atlas, std::vector<int>& aux) : atlas_(atlas), aux_(aux) {}

    // Clauses whose conjunction is implied-equivalent to the NNF formula `f`.
    std::vector<Clause> run(const Formula& f) {
        using K = Formula::Kind;
        switch (f.kind()) {
            case K::True: return {};
            case K::False: return {Clause{}};
            case K::Atom:
            case K::Not: return {Clause{signed_lit(f)}};
            case K::And: {
                std::vector<Clause> out;
                for (const auto& c : f.children()) {
                    auto sub = run(c);
                    std::move(sub.begin(), sub.end(), std::back_inserter(out));
                }
                return out;
            }
            case K::Or: return disjunction(f);
            default: break;
        }
        throw std::logic_error("clausify: formula not in NNF");
    }

private:
    std::vector<Clause> disjunction(const Formula& f) {
        std::vector<std::vector<Clause>> parts;
        for (const auto& c : f.children()) parts.push_back(run(c));
        // A child with no clauses is true; the disjunction is then true.
        for (const auto& p : parts)
            if (p.empty()) return {};
        auto product = [&] {
            std::size_t n = 1;
            for (const auto& p : parts) {
                n *= p.size();
                if (n > kDistributeLimit) return n;
            }
            return n;
        };
        while (product() > kDistributeLimit) {
            auto it = std::max_element(parts.begin(), parts.end(),
                                       [](const auto& a, const auto& b) { return a.size() < b.size(); });
            int x = atlas_.fresh_tseitin();
            aux_.push_back(x);
            for (auto& c : *it) {
                c.push_back(-x);
                if (normalize_clause(c)) side_.push_back(std::move(c));
            }
            *it = {Clause{x}};
        }
        std::vector<Clause> acc{Clause{}};
        for (const auto& p : parts) {
            std::vector<Clause> next;
            for (const auto& a : acc) {
                for (const auto& b : p) {
                    Clause c = a;
                    c.insert(c.end(), b.begin(), b.end());
                    next.push_back(std::move(c));
                }
            }
            acc = std::move(next);
        }
        std::vector<Clause> out;
        for (auto& c : acc)
            if (normalize_clause(c)) out.push_back(std::move(c));
        std::move(side_.begin(), side_.end(), std::back_inserter(out));
        side_.clear();
        return out;
    }

    VariableAtlas& atlas_;
    std::vector<int>& aux_;
    std::vector<Clause> side_;
};

}  // namespace

std::vector<Clause> clausify(const Formula& f, VariableAtlas& atlas, std::vector<int>& aux_vars) {
    Clausifier cl(atlas, aux_vars);
    std::vector<Clause> raw = cl.run(to_nnf(f));
    std::vector<Clause> out;
    out.reserve(raw.size());
    for (auto& c : raw)
        if (normalize_clause(c)) out.push_back(std::move(c));
    return out;
}

}  // namespace qplan
