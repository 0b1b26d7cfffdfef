#pragma once

#include <compare>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace qplan {

/// Structured meaning of an encoding variable.
enum class Role : std::uint8_t {
    FactAt,   // (fact, t)
    OpAt,     // (op, t)
    Cond,     // (state, fact)
    SuccT,    // (state, state)
    SuccF,    // (state, state)
    StateAt,  // (state, t)
    Enabled,  // (op, state or t)
    ApplAt,   // (op, t)
    AuxInit,  // (k)
    Choice,   // (source, bit, t); sources are operators then rules
    Tseitin,  // (n)
};

struct VarIdentity {
    Role role = Role::Tseitin;
    int a = 0;
    int b = 0;
    int c = 0;

    auto operator<=>(const VarIdentity&) const = default;
};

std::string to_string(const VarIdentity& id);
/// Inverse of to_string; nullopt on malformed text.
std::optional<VarIdentity> parse_identity(std::string_view text);

/// Bijection between VarIds (1-based) and structured identities.
class VariableAtlas {
public:
    /// Returns the VarId of `id`, allocating the next one on first use.
    int intern(const VarIdentity& id);
    std::optional<int> find(const VarIdentity& id) const;
    /// Allocates a fresh clausification auxiliary.
    int fresh_tseitin();

    /// Registers `id` under a given VarId (used when reading files).
    /// Throws std::invalid_argument if either side is already taken.
    void bind(int var, const VarIdentity& id);

    bool has(int var) const;
    const VarIdentity& identity(int var) const;
    std::string name(int var) const;

    /// Highest VarId allocated or bound.
    int max_var() const { return static_cast<int>(ids_.size()); }
    std::size_t size() const { return by_id_.size(); }

    bool operator==(const VariableAtlas& o) const { return by_id_ == o.by_id_; }

private:
    std::vector<std::optional<VarIdentity>> ids_;  // index var-1
    std::map<VarIdentity, int> by_id_;
    int next_tseitin_ = 0;
};

}  // namespace qplan
