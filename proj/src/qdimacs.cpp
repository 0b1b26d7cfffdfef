#include "qplan/qdimacs.hpp"

#include <algorithm>
#include <charconv>
#include <cstdlib>
#include <set>
#include <sstream>
#include <vector>

namespace qplan {

std::string qdimacs_write(const QbfProblem& q) {
    std::string out;
    out.reserve(q.literal_count() * 6 + 64);
    for (int v = 1; v <= q.atlas.max_var(); ++v) {
        if (q.atlas.has(v)) out += "c var " + std::to_string(v) + " " + q.atlas.name(v) + "\n";
    }
    out += "p cnf " + std::to_string(q.num_vars) + " " + std::to_string(q.matrix.size()) + "\n";
    for (const auto& b : q.prefix) {
        out += b.quant == Quant::Exists ? 'e' : 'a';
        for (int v : b.vars) {
            out += ' ';
            out += std::to_string(v);
        }
        out += " 0\n";
    }
    for (const auto& c : q.matrix) {
        for (int l : c) {
            out += std::to_string(l);
            out += ' ';
        }
        out += "0\n";
    }
    return out;
}

namespace {

std::vector<std::string_view> split_ws(std::string_view s) {
    std::vector<std::string_view> out;
    std::size_t i = 0;
    while (i < s.size()) {
        while (i < s.size() && (s[i] == ' ' || s[i] == '\t' || s[i] == '\r')) ++i;
        std::size_t j = i;
        while (j < s.size() && s[j] != ' ' && s[j] != '\t' && s[j] != '\r') ++j;
        if (j > i) out.push_back(s.substr(i, j - i));
        i = j;
    }
    return out;
}

int to_int(std::string_view tok, int line) {
    int v = 0;
    auto [p, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v);
    if (ec != std::errc() || p != tok.data() + tok.size())
        throw FormatError("expected integer, got '" + std::string(tok) + "'", line);
    return v;
}

}  // namespace

QbfProblem qdimacs_read(std::string_view text) {
    QbfProblem q;
    bool have_header = false;
    bool in_clauses = false;
    int declared_clauses = 0;
    Clause current;
    std::set<int> quantified;
    int line_no = 0;
    std::size_t pos = 0;
    while (pos <= text.size()) {
        std::size_t nl = text.find('\n', pos);
        if (nl == std::string_view::npos) nl = text.size();
        std::string_view line = text.substr(pos, nl - pos);
        pos = nl + 1;
        ++line_no;
        auto toks = split_ws(line);
        if (toks.empty()) {
            if (nl == text.size()) break;
            continue;
        }
        if (toks[0] == "c") {
            if (toks.size() == 4 && toks[1] == "var") {
                int v = to_int(toks[2], line_no);
                auto id = parse_identity(toks[3]);
                if (!id) throw FormatError("malformed variable name '" + std::string(toks[3]) + "'", line_no);
                try {
                    q.atlas.bind(v, *id);
                } catch (const std::invalid_argument& e) {
                    throw FormatError(e.what(), line_no);
                }
            }
        } else if (toks[0] == "p") {
            if (have_header) throw FormatError("duplicate header", line_no);
            if (toks.size() != 4 || toks[1] != "cnf") throw FormatError("malformed header", line_no);
            q.num_vars = to_int(toks[2], line_no);
            declared_clauses = to_int(toks[3], line_no);
            if (q.num_vars < 0 || declared_clauses < 0) throw FormatError("negative count in header", line_no);
            have_header = true;
        } else if (toks[0] == "e" || toks[0] == "a") {
            if (!have_header) throw FormatError("quantifier line before header", line_no);
            if (in_clauses) throw FormatError("quantifier line after clauses", line_no);
            if (toks.back() != "0") throw FormatError("quantifier line not terminated by 0", line_no);
            Block b;
            b.quant = toks[0] == "e" ? Quant::Exists : Quant::Forall;
            for (std::size_t i = 1; i + 1 < toks.size(); ++i) {
                int v = to_int(toks[i], line_no);
                if (v <= 0 || v > q.num_vars) throw FormatError("variable out of range in prefix", line_no);
                if (!quantified.insert(v).second) throw FormatError("variable quantified twice", line_no);
                b.vars.push_back(v);
            }
            q.prefix.push_back(std::move(b));
        } else {
            if (!have_header) throw FormatError("clause before header", line_no);
            in_clauses = true;
            for (auto tok : toks) {
                int l = to_int(tok, line_no);
                if (l == 0) {
                    q.matrix.push_back(std::move(current));
                    current.clear();
                } else {
                    if (std::abs(l) > q.num_vars) throw FormatError("literal out of range", line_no);
                    current.push_back(l);
                }
            }
        }
        if (nl == text.size()) break;
    }
    if (!have_header) throw FormatError("missing header", line_no);
    if (!current.empty()) throw FormatError("last clause not terminated by 0", line_no);
    if (static_cast<int>(q.matrix.size()) != declared_clauses)
        throw FormatError("clause count " + std::to_string(q.matrix.size()) + " differs from header " +
                              std::to_string(declared_clauses),
                          line_no);
    std::vector<int> free_vars;
    std::set<int> seen;
    for (const auto& c : q.matrix)
        for (int l : c)
            if (!quantified.count(std::abs(l)) && seen.insert(std::abs(l)).second) free_vars.push_back(std::abs(l));
    if (!free_vars.empty()) {
        std::sort(free_vars.begin(), free_vars.end());
        q.prefix.insert(q.prefix.begin(), Block{Quant::Exists, free_vars});
        q.normalize_prefix();
    }
    return q;
}

}  // namespace qplan
