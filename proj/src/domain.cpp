#include "qplan/domain.hpp"

#include <algorithm>
#include <cctype>
#include <iterator>
#include <set>
#include <sstream>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace qplan {

DomainError::DomainError(const std::string& what, int line, int column)
    : std::runtime_error(line > 0 ? std::to_string(line) + ":" + std::to_string(column) + ": " + what
                                  : what),
      line_(line),
      column_(column) {}

// ---------------------------------------------------------------------------
// ProblemInstance

ProblemInstance::ProblemInstance(std::vector<Fact> facts, std::vector<Operator> operators,
                                 std::vector<NondetRule> rules, Formula init, Formula goal)
    : facts_(std::move(facts)),
      operators_(std::move(operators)),
      rules_(std::move(rules)),
      init_(std::move(init)),
      goal_(std::move(goal)) {
    for (std::size_t i = 0; i < facts_.size(); ++i) {
        Fact& f = facts_[i];
        if (f.index != static_cast<int>(i)) throw DomainError("fact indices must be dense: " + f.name);
        if (!fact_by_name_.emplace(f.name, f.index).second) throw DomainError("duplicate fact " + f.name);
        (f.is_defined() ? defined_facts_ : base_facts_).push_back(f.index);
        if (f.observable) observables_.push_back(f.index);
    }
    auto check_atoms = [&](const Formula& g, const std::string& where, bool base_only) {
        for (int a : g.atoms()) {
            if (a < 0 || static_cast<std::size_t>(a) >= facts_.size())
                throw DomainError("undeclared fact in " + where);
            if (base_only && facts_[a].is_defined())
                throw DomainError("definition of " + where + " mentions defined fact " + facts_[a].name);
        }
    };
    for (const auto& f : facts_) {
        if (f.defined_by) check_atoms(*f.defined_by, f.name, true);
    }
    std::set<std::string> names;
    for (std::size_t i = 0; i < operators_.size(); ++i) {
        Operator& op = operators_[i];
        if (op.index != static_cast<int>(i)) throw DomainError("operator indices must be dense: " + op.name);
        if (!names.insert(op.name).second) throw DomainError("duplicate operator " + op.name);
        op_by_name_.emplace(op.name, op.index);
        if (op.effects.empty()) throw DomainError("operator " + op.name + " has an empty effect list");
        validate_literals(op.precondition, "operator " + op.name);
        for (const auto& e : op.effects) validate_literals(e, "operator " + op.name);
    }
    for (const auto& r : rules_) {
        if (!names.insert(r.name).second) throw DomainError("duplicate rule " + r.name);
        if (r.alternatives.size() < 2) throw DomainError("rule " + r.name + " needs at least two alternatives");
        validate_literals(r.precondition, "rule " + r.name);
        for (const auto& e : r.alternatives) validate_literals(e, "rule " + r.name);
    }
    check_atoms(init_, "init", false);
    check_atoms(goal_, "goal", false);
}

void ProblemInstance::validate_literals(std::span<const Literal> lits, const std::string& where) const {
    for (auto l : lits) {
        if (l.atom < 0 || static_cast<std::size_t>(l.atom) >= facts_.size())
            throw DomainError("undeclared fact in " + where);
    }
}

std::optional<int> ProblemInstance::fact_index(std::string_view name) const {
    auto it = fact_by_name_.find(std::string(name));
    if (it == fact_by_name_.end()) return std::nullopt;
    return it->second;
}

std::optional<int> ProblemInstance::operator_index(std::string_view name) const {
    auto it = op_by_name_.find(std::string(name));
    if (it == op_by_name_.end()) return std::nullopt;
    return it->second;
}

std::size_t ProblemInstance::operator_size() const {
    std::size_t n = 0;
    for (const auto& op : operators_) {
        n += op.precondition.size();
        for (const auto& e : op.effects) n += e.size();
    }
    return n;
}

Formula ProblemInstance::expanded_init() const {
    return init_.map_atoms([&](int a) {
        const Fact& f = facts_[a];
        return f.defined_by ? *f.defined_by : Formula::atom(a);
    });
}

// ---------------------------------------------------------------------------
// FactValuation

FactValuation::FactValuation(const ProblemInstance& inst, std::vector<std::uint8_t> base)
    : values_(std::move(base)) {
    values_.resize(inst.num_facts(), 0);
    recompute(inst);
}

bool FactValuation::holds_all(std::span<const Literal> lits) const {
    return std::all_of(lits.begin(), lits.end(), [&](Literal l) { return holds(l); });
}

void FactValuation::assign(const ProblemInstance& inst, std::span<const Literal> lits) {
    for (auto l : lits) values_[static_cast<std::size_t>(l.atom)] = l.positive ? 1 : 0;
    recompute(inst);
}

void FactValuation::recompute(const ProblemInstance& inst) {
    for (int d : inst.defined_facts()) {
        values_[static_cast<std::size_t>(d)] = eval(*inst.fact(d).defined_by, values_) ? 1 : 0;
    }
}

// ---------------------------------------------------------------------------
// Dependency

namespace {

bool shares_var(std::span<const Literal> a, std::span<const Literal> b) {
    for (auto x : a)
        for (auto y : b)
            if (x.atom == y.atom) return true;
    return false;
}

}  // namespace

bool dependent(const Operator& a, const Operator& b) {
    for (const auto& ea : a.effects)
        if (shares_var(ea, b.precondition)) return true;
    for (const auto& eb : b.effects)
        if (shares_var(eb, a.precondition)) return true;
    for (const auto& ea : a.effects)
        for (const auto& eb : b.effects)
            for (auto x : ea)
                for (auto y : eb)
                    if (x.atom == y.atom && x.positive != y.positive) return true;
    return false;
}

// ---------------------------------------------------------------------------
// Parsing

namespace {

struct Token {
    enum class Kind { Word, LParen, RParen, End } kind = Kind::End;
    std::string text;
    int line = 0;
    int column = 0;
};

class Lexer {
public:
    explicit Lexer(std::string_view src) : src_(src) {}

    std::vector<Token> run() {
        std::vector<Token> out;
        while (true) {
            skip_space();
            Token t;
            t.line = line_;
            t.column = col_;
            if (pos_ >= src_.size()) {
                out.push_back(t);
                return out;
            }
            char c = src_[pos_];
            if (c == '(' || c == ')') {
                t.kind = c == '(' ? Token::Kind::LParen : Token::Kind::RParen;
                t.text = std::string(1, c);
                advance();
            } else {
                t.kind = Token::Kind::Word;
                while (pos_ < src_.size() && !std::isspace(static_cast<unsigned char>(src_[pos_])) &&
                       src_[pos_] != '(' && src_[pos_] != ')' && src_[pos_] != '#') {
                    t.text += src_[pos_];
                    advance();
                }
            }
            out.push_back(std::move(t));
        }
    }

private:
    void advance() {
        if (src_[pos_] == '\n') {
            ++line_;
            col_ = 1;
        } else {
            ++col_;
        }
        ++pos_;
    }
    void skip_space() {
        while (pos_ < src_.size()) {
            char c = src_[pos_];
            if (c == '#') {
                while (pos_ < src_.size() && src_[pos_] != '\n') advance();
            } else if (std::isspace(static_cast<unsigned char>(c))) {
                advance();
            } else {
                break;
            }
        }
    }

    std::string_view src_;
    std::size_t pos_ = 0;
    int line_ = 1;
    int col_ = 1;
};

const std::set<std::string, std::less<>> kStatementKeywords{"fact", "observable", "defined", "operator",
                                                            "rule", "init", "goal"};
const std::set<std::string, std::less<>> kClauseKeywords{"pre", "post", "eff"};

bool is_keyword(std::string_view w) {
    return kStatementKeywords.count(w) > 0 || kClauseKeywords.count(w) > 0;
}

struct NamedLit {
    std::string name;
    bool positive;
    int line;
    int column;
};

// Formula AST with unresolved names.
struct RawFormula {
    std::string op;  // "atom" for names
    std::string name;
    int line = 0;
    int column = 0;
    std::vector<RawFormula> children;
};

struct RawOperator {
    std::string name;
    int line = 0;
    int column = 0;
    std::vector<NamedLit> pre;
    std::vector<std::vector<NamedLit>> effects;
};

class Parser {
public:
    explicit Parser(std::vector<Token> toks) : toks_(std::move(toks)) {}

    ProblemInstance run() {
        while (peek().kind != Token::Kind::End) statement();
        return build();
    }

private:
    const Token& peek() const { return toks_[pos_]; }
    Token next() { return toks_[pos_ == toks_.size() - 1 ? pos_ : pos_++]; }

    [[noreturn]] void fail(const std::string& msg, const Token& t) const {
        throw DomainError(msg, t.line, t.column);
    }

    bool at_word() const { return peek().kind == Token::Kind::Word; }
    bool at_plain_word() const { return at_word() && !is_keyword(peek().text); }

    Token expect_name(const char* what) {
        Token t = next();
        if (t.kind != Token::Kind::Word || is_keyword(t.text) || t.text.empty() || t.text[0] == '-')
            fail(std::string("expected ") + what, t);
        return t;
    }

    void expect_keyword(const char* kw) {
        Token t = next();
        if (t.kind != Token::Kind::Word || t.text != kw) fail(std::string("expected '") + kw + "'", t);
    }

    std::vector<NamedLit> literals() {
        std::vector<NamedLit> out;
        while (at_plain_word()) {
            Token t = next();
            bool pos = t.text[0] != '-';
            std::string name = pos ? t.text : t.text.substr(1);
            if (name.empty() || is_keyword(name)) fail("malformed literal", t);
            out.push_back({name, pos, t.line, t.column});
        }
        return out;
    }

    RawFormula formula() {
        Token t = next();
        if (t.kind == Token::Kind::Word) {
            if (is_keyword(t.text) || t.text[0] == '-') fail("expected formula", t);
            return {"atom", t.text, t.line, t.column, {}};
        }
        if (t.kind != Token::Kind::LParen) fail("expected formula", t);
        Token op = next();
        if (op.kind != Token::Kind::Word) fail("expected connective", op);
        RawFormula f{op.text, "", op.line, op.column, {}};
        static const std::set<std::string, std::less<>> kOps{"and", "or", "not", "imp", "iff", "true", "false"};
        if (kOps.count(op.text) == 0) fail("unknown connective '" + op.text + "'", op);
        while (peek().kind != Token::Kind::RParen) {
            if (peek().kind == Token::Kind::End) fail("unterminated formula", peek());
            f.children.push_back(formula());
        }
        next();
        std::size_t n = f.children.size();
        bool ok = (op.text == "not" && n == 1) || ((op.text == "imp" || op.text == "iff") && n == 2) ||
                  ((op.text == "true" || op.text == "false") && n == 0) || op.text == "and" || op.text == "or";
        if (!ok) fail("wrong number of operands for '" + op.text + "'", op);
        return f;
    }

    void statement() {
        Token kw = next();
        if (kw.kind != Token::Kind::Word || kStatementKeywords.count(kw.text) == 0)
            fail("expected a statement keyword", kw);
        if (kw.text == "fact") {
            if (!at_plain_word()) fail("expected fact names", peek());
            while (at_plain_word()) {
                Token t = expect_name("fact name");
                declare_fact(t, std::nullopt);
            }
        } else if (kw.text == "observable") {
            if (!at_plain_word()) fail("expected fact names", peek());
            while (at_plain_word()) observable_.push_back(expect_name("fact name"));
        } else if (kw.text == "defined") {
            Token t = expect_name("fact name");
            declare_fact(t, formula());
        } else if (kw.text == "operator" || kw.text == "rule") {
            bool is_rule = kw.text == "rule";
            RawOperator op;
            Token t = expect_name(is_rule ? "rule name" : "operator name");
            op.name = t.text;
            op.line = t.line;
            op.column = t.column;
            expect_keyword("pre");
            op.pre = literals();
            if (at_word() && peek().text == "post" && !is_rule) {
                next();
                op.effects.push_back(literals());
            } else {
                while (at_word() && peek().text == "eff") {
                    next();
                    op.effects.push_back(literals());
                }
                if (op.effects.empty())
                    fail(is_rule ? "empty effect list: expected 'eff'" : "empty effect list: expected 'post' or 'eff'",
                         peek());
                if (op.effects.size() < 2) fail("nondeterministic effects need at least two 'eff' groups", peek());
            }
            (is_rule ? rules_ : ops_).push_back(std::move(op));
        } else if (kw.text == "init" || kw.text == "goal") {
            auto& slot = kw.text == "init" ? init_ : goal_;
            if (slot) fail("duplicate '" + kw.text + "'", kw);
            slot = formula();
        }
    }

    void declare_fact(const Token& t, std::optional<RawFormula> def) {
        if (fact_names_.count(t.text)) fail("duplicate fact '" + t.text + "'", t);
        fact_names_[t.text] = static_cast<int>(fact_decls_.size());
        fact_decls_.push_back({t, std::move(def)});
    }

    int resolve(const std::string& name, int line, int col) const {
        auto it = fact_names_.find(name);
        if (it == fact_names_.end()) throw DomainError("undeclared fact '" + name + "'", line, col);
        return it->second;
    }

    Formula resolve(const RawFormula& r) const {
        if (r.op == "atom") return Formula::atom(resolve(r.name, r.line, r.column));
        std::vector<Formula> ch;
        for (const auto& c : r.children) ch.push_back(resolve(c));
        if (r.op == "true") return Formula::top();
        if (r.op == "false") return Formula::bottom();
        if (r.op == "not") return Formula::negate(ch[0]);
        if (r.op == "imp") return Formula::implies(ch[0], ch[1]);
        if (r.op == "iff") return Formula::iff(ch[0], ch[1]);
        if (r.op == "and") return Formula::conj(std::move(ch));
        return Formula::disj(std::move(ch));
    }

    LiteralSet resolve(const std::vector<NamedLit>& lits) const {
        LiteralSet out;
        for (const auto& l : lits) out.push_back({resolve(l.name, l.line, l.column), l.positive});
        return out;
    }

    static void check_consistent(const LiteralSet& s, const RawOperator& op) {
        for (std::size_t i = 0; i < s.size(); ++i)
            for (std::size_t j = i + 1; j < s.size(); ++j)
                if (s[i].atom == s[j].atom && s[i].positive != s[j].positive)
                    throw DomainError("effect of '" + op.name + "' contains a literal and its complement", op.line,
                                      op.column);
    }

    ProblemInstance build() {
        const Token& end = peek();
        if (!init_) fail("missing 'init'", end);
        if (!goal_) fail("missing 'goal'", end);
        std::vector<Fact> facts;
        for (std::size_t i = 0; i < fact_decls_.size(); ++i) {
            Fact f;
            f.name = fact_decls_[i].first.text;
            f.index = static_cast<int>(i);
            facts.push_back(std::move(f));
        }
        for (std::size_t i = 0; i < fact_decls_.size(); ++i) {
            const auto& def = fact_decls_[i].second;
            if (!def) continue;
            Formula g = resolve(*def);
            for (int a : g.atoms()) {
                if (fact_decls_[static_cast<std::size_t>(a)].second) {
                    const Token& t = fact_decls_[i].first;
                    throw DomainError("definition of '" + t.text + "' mentions defined fact '" +
                                          facts[static_cast<std::size_t>(a)].name + "'",
                                      t.line, t.column);
                }
            }
            facts[i].defined_by = std::move(g);
        }
        for (const auto& t : observable_) facts[static_cast<std::size_t>(resolve(t.text, t.line, t.column))].observable = true;

        std::set<std::string> names;
        std::vector<Operator> ops;
        for (const auto& r : ops_) {
            if (!names.insert(r.name).second)
                throw DomainError("duplicate operator '" + r.name + "'", r.line, r.column);
            Operator op;
            op.name = r.name;
            op.index = static_cast<int>(ops.size());
            op.precondition = resolve(r.pre);
            for (const auto& e : r.effects) {
                op.effects.push_back(resolve(e));
                check_consistent(op.effects.back(), r);
                for (auto l : op.effects.back())
                    if (facts[static_cast<std::size_t>(l.atom)].is_defined())
                        throw DomainError("operator '" + r.name + "' assigns defined fact", r.line, r.column);
            }
            ops.push_back(std::move(op));
        }
        std::vector<NondetRule> rules;
        for (const auto& r : rules_) {
            if (!names.insert(r.name).second) throw DomainError("duplicate name '" + r.name + "'", r.line, r.column);
            NondetRule rule;
            rule.name = r.name;
            rule.precondition = resolve(r.pre);
            for (const auto& e : r.effects) {
                rule.alternatives.push_back(resolve(e));
                check_consistent(rule.alternatives.back(), r);
            }
            rules.push_back(std::move(rule));
        }
        return ProblemInstance(std::move(facts), std::move(ops), std::move(rules), resolve(*init_), resolve(*goal_));
    }

    std::vector<Token> toks_;
    std::size_t pos_ = 0;
    std::vector<std::pair<Token, std::optional<RawFormula>>> fact_decls_;
    std::unordered_map<std::string, int> fact_names_;
    std::vector<Token> observable_;
    std::vector<RawOperator> ops_;
    std::vector<RawOperator> rules_;
    std::optional<RawFormula> init_;
    std::optional<RawFormula> goal_;
};

}  // namespace

ProblemInstance parse_domain(std::string_view text) { return Parser(Lexer(text).run()).run(); }

std::string print_domain(const ProblemInstance& inst) {
    std::ostringstream os;
    auto name = [&](int a) { return inst.fact_name(a); };
    auto lits = [&](const LiteralSet& s) {
        std::string out;
        for (auto l : s) out += " " + inst.literal_name(l);
        return out;
    };
    bool open_fact_line = false;
    for (const auto& f : inst.facts()) {
        if (f.defined_by) {
            if (open_fact_line) os << '\n';
            open_fact_line = false;
            os << "defined " << f.name << ' ' << f.defined_by->to_string(name) << '\n';
        } else {
            os << (open_fact_line ? " " : "fact ") << f.name;
            open_fact_line = true;
        }
    }
    if (open_fact_line) os << '\n';
    if (!inst.observables().empty()) {
        os << "observable";
        for (int o : inst.observables()) os << ' ' << inst.fact_name(o);
        os << '\n';
    }
    for (const auto& op : inst.operators()) {
        os << "operator " << op.name << " pre" << lits(op.precondition);
        if (op.deterministic()) {
            os << " post" << lits(op.effects[0]);
        } else {
            for (const auto& e : op.effects) os << " eff" << lits(e);
        }
        os << '\n';
    }
    for (const auto& r : inst.rules()) {
        os << "rule " << r.name << " pre" << lits(r.precondition);
        for (const auto& e : r.alternatives) os << " eff" << lits(e);
        os << '\n';
    }
    os << "init " << inst.init().to_string(name) << '\n';
    os << "goal " << inst.goal().to_string(name) << '\n';
    return os.str();
}

bool structurally_equal(const ProblemInstance& a, const ProblemInstance& b) {
    if (a.num_facts() != b.num_facts() || a.num_operators() != b.num_operators() ||
        a.rules().size() != b.rules().size())
        return false;
    for (std::size_t i = 0; i < a.num_facts(); ++i) {
        const Fact& x = a.facts()[i];
        const Fact& y = b.facts()[i];
        if (x.name != y.name || x.observable != y.observable || x.defined_by != y.defined_by) return false;
    }
    for (std::size_t i = 0; i < a.num_operators(); ++i) {
        const Operator& x = a.operators()[i];
        const Operator& y = b.operators()[i];
        if (x.name != y.name || x.precondition != y.precondition || x.effects != y.effects) return false;
    }
    for (std::size_t i = 0; i < a.rules().size(); ++i) {
        const NondetRule& x = a.rules()[i];
        const NondetRule& y = b.rules()[i];
        if (x.name != y.name || x.precondition != y.precondition || x.alternatives != y.alternatives) return false;
    }
    return a.init() == b.init() && a.goal() == b.goal();
}

// ---------------------------------------------------------------------------
// Initial states

InitialStateSpace::InitialStateSpace(const ProblemInstance& inst, std::size_t dnf_cap) : inst_(&inst) {
    Formula init = inst.expanded_init();
    terms_ = to_padded_dnf(init, dnf_cap);
    std::set<int> atoms = init.atoms();
    constrained_.assign(atoms.begin(), atoms.end());
    for (int b : inst.base_facts())
        if (!atoms.count(b)) free_facts_.push_back(b);
    if (terms_.empty()) {
        count_ = 0;
    } else if (free_facts_.size() >= 64) {
        count_ = UINT64_MAX;
    } else {
        std::uint64_t per = std::uint64_t{1} << free_facts_.size();
        count_ = terms_.size() > UINT64_MAX / per ? UINT64_MAX : terms_.size() * per;
    }
}

FactValuation InitialStateSpace::state(std::uint64_t index) const {
    std::vector<std::uint8_t> v(inst_->num_facts(), 0);
    const Term& t = terms_[static_cast<std::size_t>(index % terms_.size())];
    std::uint64_t rest = index / terms_.size();
    for (auto l : t) v[static_cast<std::size_t>(l.atom)] = l.positive ? 1 : 0;
    for (std::size_t k = 0; k < free_facts_.size() && k < 64; ++k)
        v[static_cast<std::size_t>(free_facts_[k])] = static_cast<std::uint8_t>((rest >> k) & 1U);
    return FactValuation(*inst_, std::move(v));
}

namespace {

constexpr std::size_t kBruteForceMaxFacts = 26;

// Base valuation for the m-th assignment in lexicographic order (first base fact most significant).
std::vector<std::uint8_t> nth_base(const ProblemInstance& inst, std::uint64_t m) {
    const auto& base = inst.base_facts();
    std::vector<std::uint8_t> v(inst.num_facts(), 0);
    for (std::size_t k = 0; k < base.size(); ++k)
        v[static_cast<std::size_t>(base[k])] = static_cast<std::uint8_t>((m >> (base.size() - 1 - k)) & 1U);
    return v;
}

void check_bruteforce_size(const ProblemInstance& inst) {
    if (inst.base_facts().size() > kBruteForceMaxFacts)
        throw CapExceeded("brute-force enumeration over too many base facts",
                          inst.base_facts().size());
}

}  // namespace

std::vector<FactValuation> enumerate_initial_states_bruteforce_serial(const ProblemInstance& inst,
                                                                      std::size_t cap) {
    check_bruteforce_size(inst);
    const std::uint64_t total = std::uint64_t{1} << inst.base_facts().size();
    std::vector<FactValuation> out;
    for (std::uint64_t m = 0; m < total; ++m) {
        FactValuation s(inst, nth_base(inst, m));
        if (!eval(inst.init(), s.values())) continue;
        if (out.size() == cap) throw CapExceeded("initial-state count exceeds cap", cap + 1);
        out.push_back(std::move(s));
    }
    return out;
}

std::vector<FactValuation> enumerate_initial_states_bruteforce(const ProblemInstance& inst, std::size_t cap) {
    check_bruteforce_size(inst);
    const std::int64_t total = std::int64_t{1} << inst.base_facts().size();
    int chunks = 1;
#ifdef _OPENMP
    chunks = std::max(1, omp_get_max_threads() * 4);
#endif
    std::vector<std::vector<FactValuation>> parts(static_cast<std::size_t>(chunks));
#pragma omp parallel for schedule(dynamic, 1)
    for (int c = 0; c < chunks; ++c) {
        std::int64_t lo = total * c / chunks;
        std::int64_t hi = total * (c + 1) / chunks;
        auto& part = parts[static_cast<std::size_t>(c)];
        for (std::int64_t m = lo; m < hi; ++m) {
            FactValuation s(inst, nth_base(inst, static_cast<std::uint64_t>(m)));
            if (eval(inst.init(), s.values())) part.push_back(std::move(s));
        }
    }
    std::size_t n = 0;
    for (const auto& p : parts) n += p.size();
    if (n > cap) throw CapExceeded("initial-state count exceeds cap", n);
    std::vector<FactValuation> out;
    out.reserve(n);
    for (auto& p : parts) std::move(p.begin(), p.end(), std::back_inserter(out));
    return out;
}

std::vector<FactValuation> enumerate_initial_states(const ProblemInstance& inst, std::size_t cap) {
    if (cap == 0) throw std::invalid_argument("cap must be positive");
    std::optional<InitialStateSpace> space;
    try {
        space.emplace(inst);
    } catch (const DnfCapExceeded&) {
        return enumerate_initial_states_bruteforce(inst, cap);
    }
    if (space->count() > cap) throw CapExceeded("initial-state count exceeds cap", space->count());
    std::vector<FactValuation> out;
    out.reserve(static_cast<std::size_t>(space->count()));
    for (std::uint64_t i = 0; i < space->count(); ++i) out.push_back(space->state(i));
    std::sort(out.begin(), out.end(), [&](const FactValuation& a, const FactValuation& b) {
        for (int f : inst.base_facts())
            if (a[f] != b[f]) return !a[f];
        return false;
    });
    return out;
}

}  // namespace qplan
