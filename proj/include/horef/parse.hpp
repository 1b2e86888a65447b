// ============================================================================
// parse.hpp — Prolog-like surface syntax for programs
// ============================================================================
//
// Grammar:
//   program  := { clause }
//   clause   := atom [ (":-" | "<-" | "←") body ] "."
//   body     := atom { "," atom }
//   atom     := callee [ "(" term { "," term } ")" ]
//   callee   := identifier (lowercase = predicate symbol, uppercase = variable)
//   term     := lowercase identifier | uppercase identifier | integer
//
// "%" starts a comment running to end of line.
//
// Higher-order classification happens after parsing: a variable used in a
// callee position is higher-order, and so is any variable occupying a head
// argument position that another clause of the same definition uses for a
// higher-order variable.  A lowercase identifier in an argument position that
// a known definition declares higher-order parses as a predicate reference.
// ============================================================================

#ifndef HOREF_PARSE_HPP
#define HOREF_PARSE_HPP

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "horef/ast.hpp"

namespace horef {

struct SourceSpan {
    std::string file;
    int line = 1;    // 1-based
    int column = 1;  // 1-based
};

enum class Severity { Error, Warning };

struct ParseDiagnostic {
    SourceSpan span;
    Severity severity = Severity::Error;
    std::string message;

    std::string to_string() const;
};

struct ParseOptions {
    bool allow_higher_order = false;
    std::string filename = "<input>";
};

struct ParseResult {
    std::optional<Program> program;  // present iff no error diagnostics
    std::vector<ParseDiagnostic> diagnostics;

    bool ok() const { return program.has_value(); }
};

ParseResult parse_program(std::string_view text, const ParseOptions& options = {});

}  // namespace horef

#endif  // HOREF_PARSE_HPP
