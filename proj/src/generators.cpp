#include "qplan/generators.hpp"

#include <sstream>
#include <stdexcept>

namespace qplan {

std::string rooms_domain(int n) {
    if (n < 2) throw std::invalid_argument("rooms needs n >= 2");
    std::ostringstream os;
    os << "# " << n << " rooms, one unknown door per gap\nfact";
    for (int j = 1; j <= n; ++j) os << " at-room-" << j;
    for (int j = 1; j < n; ++j) os << " left-open-" << j;
    os << '\n';
    for (int j = 1; j < n; ++j) {
        os << "operator move-a-" << j << " pre at-room-" << j << " left-open-" << j << " post -at-room-" << j
           << " at-room-" << j + 1 << '\n';
        os << "operator move-b-" << j << " pre at-room-" << j << " -left-open-" << j << " post -at-room-" << j
           << " at-room-" << j + 1 << '\n';
    }
    os << "init (and at-room-1";
    for (int j = 2; j <= n; ++j) os << " (not at-room-" << j << ")";
    os << ")\ngoal at-room-" << n << '\n';
    return os.str();
}

ProblemInstance gen_rooms(int n) { return parse_domain(rooms_domain(n)); }

std::vector<std::vector<int>> blocks_configurations(int n) {
    std::vector<std::vector<int>> out;
    std::vector<int> sup(static_cast<std::size_t>(n), -1);
    // supports as a base-(n+1) counter; keep the ones that form stacks
    auto legal = [&] {
        std::vector<int> below(static_cast<std::size_t>(n), 0);
        for (int x = 0; x < n; ++x) {
            int s = sup[static_cast<std::size_t>(x)];
            if (s == x) return false;
            if (s >= 0 && ++below[static_cast<std::size_t>(s)] > 1) return false;
        }
        for (int x = 0; x < n; ++x) {
            int cur = x;
            for (int steps = 0; cur >= 0; ++steps) {
                if (steps > n) return false;
                cur = sup[static_cast<std::size_t>(cur)];
            }
        }
        return true;
    };
    while (true) {
        if (legal()) out.push_back(sup);
        int i = 0;
        while (i < n && sup[static_cast<std::size_t>(i)] == n - 1) sup[static_cast<std::size_t>(i++)] = -1;
        if (i == n) break;
        ++sup[static_cast<std::size_t>(i)];
    }
    return out;
}

namespace {

std::string blk(int i) { return std::string(1, static_cast<char>('A' + i)); }

}  // namespace

std::string blocks_domain(int n) {
    if (n < 2 || n > 5) throw std::invalid_argument("blocks supports 2..5 blocks");
    std::ostringstream os;
    os << "# blocks world, " << n << " blocks, every initial configuration\nfact";
    for (int x = 0; x < n; ++x) os << " ontable" << blk(x);
    for (int x = 0; x < n; ++x) os << " clear" << blk(x);
    for (int x = 0; x < n; ++x)
        for (int y = 0; y < n; ++y)
            if (x != y) os << " on" << blk(x) << blk(y);
    os << '\n';
    for (int x = 0; x < n; ++x)
        for (int y = 0; y < n; ++y)
            if (x != y)
                os << "defined con" << blk(x) << blk(y) << " (and on" << blk(x) << blk(y) << " clear" << blk(x)
                   << ")\n";
    os << "observable";
    for (int x = 0; x < n; ++x)
        for (int y = 0; y < n; ++y)
            if (x != y) os << " con" << blk(x) << blk(y);
    os << '\n';
    for (int x = 0; x < n; ++x)
        for (int y = 0; y < n; ++y) {
            if (x == y) continue;
            const std::string X = blk(x), Y = blk(y);
            os << "operator totable-" << X << "-" << Y << " pre on" << X << Y << " clear" << X << " post -on" << X
               << Y << " ontable" << X << " clear" << Y << '\n';
        }
    for (int x = 0; x < n; ++x)
        for (int y = 0; y < n; ++y)
            for (int z = 0; z < n; ++z) {
                if (x == y || x == z || y == z) continue;
                const std::string X = blk(x), Y = blk(y), Z = blk(z);
                os << "operator move-" << X << "-" << Y << "-" << Z << " pre on" << X << Y << " clear" << Z
                   << " clear" << X << " post -on" << X << Y << " -clear" << Z << " on" << X << Z << " clear" << Y
                   << '\n';
            }
    for (int x = 0; x < n; ++x)
        for (int z = 0; z < n; ++z) {
            if (x == z) continue;
            const std::string X = blk(x), Z = blk(z);
            os << "operator stack-" << X << "-" << Z << " pre ontable" << X << " clear" << Z << " clear" << X
               << " post -ontable" << X << " -clear" << Z << " on" << X << Z << '\n';
        }
    os << "init (or";
    for (const auto& sup : blocks_configurations(n)) {
        os << "\n  (and";
        auto lit = [&](bool pos, const std::string& name) {
            if (pos) os << ' ' << name;
            else os << " (not " << name << ')';
        };
        for (int x = 0; x < n; ++x) lit(sup[static_cast<std::size_t>(x)] < 0, "ontable" + blk(x));
        for (int x = 0; x < n; ++x) {
            bool covered = false;
            for (int y = 0; y < n; ++y) covered |= sup[static_cast<std::size_t>(y)] == x;
            lit(!covered, "clear" + blk(x));
        }
        for (int x = 0; x < n; ++x)
            for (int y = 0; y < n; ++y)
                if (x != y) lit(sup[static_cast<std::size_t>(x)] == y, "on" + blk(x) + blk(y));
        os << ")";
    }
    os << ")\ngoal (and";
    for (int x = 0; x + 1 < n; ++x) os << " on" << blk(x) << blk(x + 1);
    os << " ontable" << blk(n - 1) << ")\n";
    return os.str();
}

ProblemInstance gen_blocks(int n) { return parse_domain(blocks_domain(n)); }

std::string two_blocks_domain() {
    return R"(# two blocks, A and B
fact ontableB onBA clearB ontableA clearA onAB
observable ontableA clearA onAB
operator a-to-table pre onAB clearA post ontableA -onAB clearB
operator b-to-table pre onBA clearB post ontableB -onBA clearA
operator a-onto-b pre ontableA clearB post onAB -clearB -ontableA
operator b-onto-a pre ontableB clearA post onBA -clearA -ontableB
init (or (and clearA clearB ontableA ontableB (not onAB) (not onBA))
         (and clearA (not clearB) (not ontableA) ontableB onAB (not onBA))
         (and (not clearA) clearB ontableA (not ontableB) (not onAB) onBA))
goal onAB
)";
}

std::string example43_domain() {
    return R"(# food in exactly one city
fact Bob-has-1000DM Bob-in-Kyoto Bob-in-Paris Bob-has-5DM Bob-hungry food-in-Kyoto food-in-Paris
observable food-in-Kyoto food-in-Paris
operator fly-kyoto pre Bob-has-1000DM post -Bob-has-1000DM Bob-in-Kyoto
operator fly-paris pre Bob-has-1000DM post -Bob-has-1000DM Bob-in-Paris
operator eat-kyoto pre food-in-Kyoto Bob-in-Kyoto Bob-has-5DM post -Bob-has-5DM -Bob-hungry
operator eat-paris pre food-in-Paris Bob-in-Paris Bob-has-5DM post -Bob-has-5DM -Bob-hungry
init (and (or (and food-in-Kyoto (not food-in-Paris)) (and (not food-in-Kyoto) food-in-Paris))
          Bob-has-1000DM Bob-has-5DM Bob-hungry (not Bob-in-Kyoto) (not Bob-in-Paris))
goal (not Bob-hungry)
)";
}

}  // namespace qplan
