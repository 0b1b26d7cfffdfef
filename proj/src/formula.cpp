#include "qplan/formula.hpp"

#include <algorithm>
#include <map>

namespace qplan {

Formula Formula::conj_literals(std::span<const Literal> lits) {
    std::vector<Formula> fs;
    fs.reserve(lits.size());
    for (auto l : lits) fs.push_back(literal(l));
    return conj(std::move(fs));
}

Formula Formula::disj_literals(std::span<const Literal> lits) {
    std::vector<Formula> fs;
    fs.reserve(lits.size());
    for (auto l : lits) fs.push_back(literal(l));
    return disj(std::move(fs));
}

bool Formula::is_literal() const {
    return kind_ == Kind::Atom || (kind_ == Kind::Not && children_[0].kind_ == Kind::Atom);
}

Literal Formula::as_literal() const {
    if (kind_ == Kind::Atom) return {atom_, true};
    return {children_[0].atom_, false};
}

std::set<int> Formula::atoms() const {
    std::set<int> out;
    std::vector<const Formula*> stack{this};
    while (!stack.empty()) {
        const Formula* f = stack.back();
        stack.pop_back();
        if (f->kind_ == Kind::Atom) out.insert(f->atom_);
        for (const auto& c : f->children_) stack.push_back(&c);
    }
    return out;
}

std::size_t Formula::occurrences() const {
    if (kind_ == Kind::Atom) return 1;
    std::size_t n = 0;
    for (const auto& c : children_) n += c.occurrences();
    return n;
}

Formula Formula::map_atoms(const std::function<Formula(int)>& f) const {
    if (kind_ == Kind::Atom) return f(atom_);
    if (children_.empty()) return *this;
    std::vector<Formula> ch;
    ch.reserve(children_.size());
    for (const auto& c : children_) ch.push_back(c.map_atoms(f));
    return Formula(kind_, 0, std::move(ch));
}

bool Formula::operator==(const Formula& o) const {
    return kind_ == o.kind_ && atom_ == o.atom_ && children_ == o.children_;
}

std::string Formula::to_string(const std::function<std::string(int)>& name) const {
    auto nary = [&](const char* op) {
        std::string s = "(";
        s += op;
        for (const auto& c : children_) {
            s += ' ';
            s += c.to_string(name);
        }
        return s + ")";
    };
    switch (kind_) {
        case Kind::Atom: return name(atom_);
        case Kind::True: return "(true)";
        case Kind::False: return "(false)";
        case Kind::Not: return nary("not");
        case Kind::And: return nary("and");
        case Kind::Or: return nary("or");
        case Kind::Implies: return nary("imp");
        case Kind::Iff: return nary("iff");
    }
    return {};
}

std::string Formula::to_string() const {
    return to_string([](int a) { return "v" + std::to_string(a); });
}

bool eval(const Formula& f, const std::function<std::optional<bool>(int)>& value) {
    using K = Formula::Kind;
    const auto& ch = f.children();
    switch (f.kind()) {
        case K::Atom: {
            auto v = value(f.atom_id());
            if (!v) throw EvalError("unvalued atom " + std::to_string(f.atom_id()));
            return *v;
        }
        case K::True: return true;
        case K::False: return false;
        case K::Not: return !eval(ch[0], value);
        case K::And:
            return std::all_of(ch.begin(), ch.end(), [&](const Formula& c) { return eval(c, value); });
        case K::Or:
            return std::any_of(ch.begin(), ch.end(), [&](const Formula& c) { return eval(c, value); });
        case K::Implies: return !eval(ch[0], value) || eval(ch[1], value);
        case K::Iff: return eval(ch[0], value) == eval(ch[1], value);
    }
    return false;
}

bool eval(const Formula& f, std::span<const std::uint8_t> valuation) {
    return eval(f, [&](int a) -> std::optional<bool> {
        if (a < 0 || static_cast<std::size_t>(a) >= valuation.size()) return std::nullopt;
        return valuation[a] != 0;
    });
}

namespace {

Formula nnf(const Formula& f, bool positive) {
    using K = Formula::Kind;
    const auto& ch = f.children();
    switch (f.kind()) {
        case K::Atom: return positive ? f : Formula::negate(f);
        case K::True: return Formula::constant(positive);
        case K::False: return Formula::constant(!positive);
        case K::Not: return nnf(ch[0], !positive);
        case K::And:
        case K::Or: {
            bool is_and = (f.kind() == K::And) == positive;
            std::vector<Formula> out;
            for (const auto& c : ch) {
                Formula n = nnf(c, positive);
                if (n.kind() == (is_and ? K::False : K::True)) return n;
                if (n.kind() == (is_and ? K::True : K::False)) continue;
                if (n.kind() == (is_and ? K::And : K::Or)) {
                    for (const auto& g : n.children()) out.push_back(g);
                } else {
                    out.push_back(std::move(n));
                }
            }
            if (out.empty()) return Formula::constant(is_and);
            if (out.size() == 1) return out[0];
            return is_and ? Formula::conj(std::move(out)) : Formula::disj(std::move(out));
        }
        case K::Implies:
            return nnf(Formula::disj({Formula::negate(ch[0]), ch[1]}), positive);
        case K::Iff: {
            const Formula& a = ch[0];
            const Formula& b = ch[1];
            if (positive) {
                return nnf(Formula::conj({Formula::disj({Formula::negate(a), b}),
                                          Formula::disj({a, Formula::negate(b)})}),
                           true);
            }
            return nnf(Formula::disj({Formula::conj({a, Formula::negate(b)}),
                                      Formula::conj({Formula::negate(a), b})}),
                       true);
        }
    }
    return f;
}

// Normalizes a term: sorted, deduplicated; returns false if contradictory.
bool normalize_term(Term& t) {
    std::sort(t.begin(), t.end());
    t.erase(std::unique(t.begin(), t.end()), t.end());
    for (std::size_t i = 1; i < t.size(); ++i) {
        if (t[i].atom == t[i - 1].atom) return false;
    }
    return true;
}

std::vector<Term> dnf_of_nnf(const Formula& f, std::size_t cap) {
    using K = Formula::Kind;
    switch (f.kind()) {
        case K::True: return {Term{}};
        case K::False: return {};
        case K::Atom:
        case K::Not: return {Term{f.as_literal()}};
        case K::Or: {
            std::vector<Term> out;
            for (const auto& c : f.children()) {
                auto sub = dnf_of_nnf(c, cap);
                out.insert(out.end(), sub.begin(), sub.end());
                if (out.size() > cap) throw DnfCapExceeded(cap);
            }
            return out;
        }
        case K::And: {
            std::vector<Term> acc{Term{}};
            for (const auto& c : f.children()) {
                auto sub = dnf_of_nnf(c, cap);
                std::vector<Term> next;
                for (const auto& a : acc) {
                    for (const auto& b : sub) {
                        Term t = a;
                        t.insert(t.end(), b.begin(), b.end());
                        if (!normalize_term(t)) continue;
                        next.push_back(std::move(t));
                        if (next.size() > cap) throw DnfCapExceeded(cap);
                    }
                }
                acc = std::move(next);
                if (acc.empty()) break;
            }
            return acc;
        }
        default: break;
    }
    throw std::logic_error("dnf_of_nnf: formula not in NNF");
}

}  // namespace

Formula to_nnf(const Formula& f) { return nnf(f, true); }

std::vector<Term> to_padded_dnf(const Formula& f, std::size_t cap) {
    const std::set<int> all = f.atoms();
    std::vector<Term> raw = dnf_of_nnf(to_nnf(f), cap);
    std::set<Term> out;
    for (auto& t : raw) {
        if (!normalize_term(t)) continue;
        std::vector<int> missing;
        for (int a : all) {
            bool present = std::any_of(t.begin(), t.end(), [&](const Literal& l) { return l.atom == a; });
            if (!present) missing.push_back(a);
        }
        if (missing.size() >= 63) throw DnfCapExceeded(cap);
        const std::uint64_t combos = std::uint64_t{1} << missing.size();
        for (std::uint64_t m = 0; m < combos; ++m) {
            Term padded = t;
            for (std::size_t k = 0; k < missing.size(); ++k) {
                padded.push_back({missing[k], ((m >> k) & 1U) == 0});
            }
            std::sort(padded.begin(), padded.end());
            out.insert(std::move(padded));
            if (out.size() > cap) throw DnfCapExceeded(cap);
        }
    }
    return {out.begin(), out.end()};
}

}  // namespace qplan
