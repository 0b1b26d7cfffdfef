#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

#include "qplan/qbf.hpp"

namespace qplan {

class FormatError : public std::runtime_error {
public:
    FormatError(const std::string& what, int line)
        : std::runtime_error("line " + std::to_string(line) + ": " + what), line_(line) {}
    int line() const { return line_; }

private:
    int line_;
};

/// Writes atlas comments (`c var <id> <name>`), the header, the prefix and the clauses.
std::string qdimacs_write(const QbfProblem& q);

/// Parses QDIMACS. Variables used in the matrix but absent from the prefix are
/// placed in an outermost existential block.
QbfProblem qdimacs_read(std::string_view text);

}  // namespace qplan
