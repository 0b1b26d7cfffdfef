#include "qplan/atlas.hpp"

#include <array>
#include <charconv>
#include <stdexcept>

namespace qplan {

namespace {

struct RoleInfo {
    Role role;
    const char* name;
    int arity;
};

constexpr std::array<RoleInfo, 11> kRoles{{
    {Role::FactAt, "FactAt", 2},
    {Role::OpAt, "OpAt", 2},
    {Role::Cond, "Cond", 2},
    {Role::SuccT, "SuccT", 2},
    {Role::SuccF, "SuccF", 2},
    {Role::StateAt, "StateAt", 2},
    {Role::Enabled, "Enabled", 2},
    {Role::ApplAt, "ApplAt", 2},
    {Role::AuxInit, "AuxInit", 1},
    {Role::Choice, "Choice", 3},
    {Role::Tseitin, "Tseitin", 1},
}};

const RoleInfo& info(Role r) { return kRoles[static_cast<std::size_t>(r)]; }

}  // namespace

std::string to_string(const VarIdentity& id) {
    const RoleInfo& ri = info(id.role);
    std::string s = ri.name;
    s += '(';
    s += std::to_string(id.a);
    if (ri.arity > 1) s += "," + std::to_string(id.b);
    if (ri.arity > 2) s += "," + std::to_string(id.c);
    s += ')';
    return s;
}

std::optional<VarIdentity> parse_identity(std::string_view text) {
    auto open = text.find('(');
    if (open == std::string_view::npos || text.empty() || text.back() != ')') return std::nullopt;
    std::string_view head = text.substr(0, open);
    std::string_view args = text.substr(open + 1, text.size() - open - 2);
    for (const auto& ri : kRoles) {
        if (head != ri.name) continue;
        int vals[3] = {0, 0, 0};
        int n = 0;
        while (true) {
            if (n == 3) return std::nullopt;
            auto comma = args.find(',');
            std::string_view part = args.substr(0, comma);
            auto [p, ec] = std::from_chars(part.data(), part.data() + part.size(), vals[n]);
            if (ec != std::errc() || p != part.data() + part.size()) return std::nullopt;
            ++n;
            if (comma == std::string_view::npos) break;
            args.remove_prefix(comma + 1);
        }
        if (n != ri.arity) return std::nullopt;
        return VarIdentity{ri.role, vals[0], vals[1], vals[2]};
    }
    return std::nullopt;
}

int VariableAtlas::intern(const VarIdentity& id) {
    auto it = by_id_.find(id);
    if (it != by_id_.end()) return it->second;
    ids_.push_back(id);
    int v = static_cast<int>(ids_.size());
    by_id_.emplace(id, v);
    if (id.role == Role::Tseitin && id.a >= next_tseitin_) next_tseitin_ = id.a + 1;
    return v;
}

std::optional<int> VariableAtlas::find(const VarIdentity& id) const {
    auto it = by_id_.find(id);
    if (it == by_id_.end()) return std::nullopt;
    return it->second;
}

int VariableAtlas::fresh_tseitin() { return intern({Role::Tseitin, next_tseitin_, 0, 0}); }

void VariableAtlas::bind(int var, const VarIdentity& id) {
    if (var < 1) throw std::invalid_argument("VarId must be positive");
    if (has(var) || by_id_.count(id)) throw std::invalid_argument("atlas entry already bound: " + to_string(id));
    if (static_cast<std::size_t>(var) > ids_.size()) ids_.resize(static_cast<std::size_t>(var));
    ids_[static_cast<std::size_t>(var - 1)] = id;
    by_id_.emplace(id, var);
    if (id.role == Role::Tseitin && id.a >= next_tseitin_) next_tseitin_ = id.a + 1;
}

bool VariableAtlas::has(int var) const {
    return var >= 1 && static_cast<std::size_t>(var) <= ids_.size() && ids_[static_cast<std::size_t>(var - 1)];
}

const VarIdentity& VariableAtlas::identity(int var) const {
    if (!has(var)) throw std::out_of_range("unregistered VarId " + std::to_string(var));
    return *ids_[static_cast<std::size_t>(var - 1)];
}

std::string VariableAtlas::name(int var) const { return has(var) ? to_string(identity(var)) : "x" + std::to_string(var); }

}  // namespace qplan
