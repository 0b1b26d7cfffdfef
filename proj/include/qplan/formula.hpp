#pragma once

#include <compare>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <initializer_list>
#include <optional>
#include <set>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace qplan {

/// A signed reference to an atom. Atoms are fact indices in domain formulas
/// and VarIds once a formula has been instantiated over the variable atlas.
struct Literal {
    int atom = 0;
    bool positive = true;

    Literal complement() const { return {atom, !positive}; }
    auto operator<=>(const Literal&) const = default;
};

class EvalError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Immutable propositional formula tree.
class Formula {
public:
    enum class Kind : std::uint8_t { Atom, True, False, Not, And, Or, Implies, Iff };

    Formula() : kind_(Kind::True) {}

    static Formula atom(int a) { return Formula(Kind::Atom, a, {}); }
    static Formula literal(Literal l) { return l.positive ? atom(l.atom) : negate(atom(l.atom)); }
    static Formula top() { return Formula(Kind::True, 0, {}); }
    static Formula bottom() { return Formula(Kind::False, 0, {}); }
    static Formula constant(bool b) { return b ? top() : bottom(); }
    static Formula negate(Formula f) { return Formula(Kind::Not, 0, {std::move(f)}); }
    static Formula conj(std::vector<Formula> fs) { return Formula(Kind::And, 0, std::move(fs)); }
    static Formula disj(std::vector<Formula> fs) { return Formula(Kind::Or, 0, std::move(fs)); }
    static Formula implies(Formula a, Formula b) {
        return Formula(Kind::Implies, 0, {std::move(a), std::move(b)});
    }
    static Formula iff(Formula a, Formula b) {
        return Formula(Kind::Iff, 0, {std::move(a), std::move(b)});
    }
    static Formula conj_literals(std::span<const Literal> lits);
    static Formula disj_literals(std::span<const Literal> lits);

    Kind kind() const { return kind_; }
    int atom_id() const { return atom_; }
    const std::vector<Formula>& children() const { return children_; }

    bool is_literal() const;
    /// Only valid when is_literal().
    Literal as_literal() const;

    /// Atoms in ascending order.
    std::set<int> atoms() const;
    /// Number of atom occurrences (the classic size measure for QBF).
    std::size_t occurrences() const;

    /// Replace each atom a by f(a).
    Formula map_atoms(const std::function<Formula(int)>& f) const;

    /// Structural rendering in the domain-file syntax; `name` maps atoms to text.
    std::string to_string(const std::function<std::string(int)>& name) const;
    std::string to_string() const;

    bool operator==(const Formula& o) const;

private:
    Formula(Kind k, int a, std::vector<Formula> ch) : kind_(k), atom_(a), children_(std::move(ch)) {}

    Kind kind_;
    int atom_ = 0;
    std::vector<Formula> children_;
};

/// Evaluates `f` where `value(atom)` returns the atom's truth value or nullopt
/// when unvalued (which raises EvalError).
bool eval(const Formula& f, const std::function<std::optional<bool>(int)>& value);

/// Evaluates `f` over a dense valuation indexed by atom.
bool eval(const Formula& f, std::span<const std::uint8_t> valuation);

using Term = std::vector<Literal>;

class DnfCapExceeded : public std::runtime_error {
public:
    explicit DnfCapExceeded(std::size_t cap)
        : std::runtime_error("DNF term count exceeds cap " + std::to_string(cap)) {}
};

inline constexpr std::size_t kDefaultDnfCap = 4096;

/// Disjunctive normal form in which every term mentions exactly the atoms of
/// `f`. Terms are sorted by atom, deduplicated, and returned in ascending
/// lexicographic order. `(false)` yields no terms; `(true)` yields one empty term.
std::vector<Term> to_padded_dnf(const Formula& f, std::size_t cap = kDefaultDnfCap);

/// Negation normal form over And/Or/Not-of-atom/constants with constants folded.
Formula to_nnf(const Formula& f);

}  // namespace qplan
