#pragma once

#include <cstddef>
#include <vector>

#include "qplan/atlas.hpp"
#include "qplan/formula.hpp"

namespace qplan {

enum class Quant : std::uint8_t { Exists, Forall };

struct Block {
    Quant quant = Quant::Exists;
    std::vector<int> vars;

    bool operator==(const Block&) const = default;
};

/// Signed VarIds, DIMACS style.
using Clause = std::vector<int>;

/// Sorts by variable and removes duplicate literals. Returns false for a
/// tautology (v and -v both present).
bool normalize_clause(Clause& c);

struct QbfProblem {
    std::vector<Block> prefix;
    std::vector<Clause> matrix;
    VariableAtlas atlas;
    /// Declared variable count (the QDIMACS header value); at least every VarId used.
    int num_vars = 0;

    /// Drops empty blocks and merges adjacent blocks with the same quantifier.
    void normalize_prefix();
    /// Recomputes num_vars as the maximum VarId in prefix, matrix and atlas.
    void update_num_vars();

    /// Total number of literal occurrences in the matrix.
    std::size_t literal_count() const;
};

/// Polarity-aware definitional clausification. Atoms of `f` are VarIds.
/// Fresh auxiliaries are allocated in `atlas` and appended to `aux_vars`.
/// The result is satisfiable by an extension to the auxiliaries exactly when
/// `f` holds; formulae already in clause shape produce no auxiliaries.
std::vector<Clause> clausify(const Formula& f, VariableAtlas& atlas, std::vector<int>& aux_vars);

}  // namespace qplan
