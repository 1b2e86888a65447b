// ============================================================================
// abstraction.hpp — candidate higher-order abstraction discovery
// ============================================================================
//
// An abstraction is built from a first-order definition by choosing a subset
// of its distinct non-recursive body predicate symbols, replacing every
// occurrence of each chosen symbol with a fresh higher-order variable,
// appending those variables to every clause head, and renaming the head
// symbol (and all recursive body calls) to an invented symbol that carries
// the extended argument list.  The head symbol itself is never abstracted.
//
// Two candidates merge when they are alpha-equivalent: equal after renaming
// first-order variables to A,B,C,... per clause, higher-order variables to
// P,Q,R,... by head position, and the invented head symbol to a placeholder.
// Body-literal order and clause order are significant.
// ============================================================================

#ifndef HOREF_ABSTRACTION_HPP
#define HOREF_ABSTRACTION_HPP

#include <string>
#include <utility>
#include <vector>

#include "horef/ast.hpp"
#include "horef/parse.hpp"

namespace horef {

// Concrete predicate symbols bound to an abstraction's higher-order
// variables, in head-position order.
struct InstantiationTuple {
    std::vector<PredicateSymbol> bindings;

    friend auto operator<=>(const InstantiationTuple&, const InstantiationTuple&) = default;
};

// Raw output of enumeration.  Variable names still match the source
// definition, so substituting the tuple back reproduces it exactly.
struct CandidateAbstraction {
    Definition def;  // head symbol = kInventedPlaceholder
    int ho_var_count = 0;
    InstantiationTuple tuple;
};

struct Abstraction {
    Definition definition;  // canonical variable names
    int ho_var_count = 0;
    std::string canonical_key;
    std::vector<std::pair<int, InstantiationTuple>> origins;  // source def index -> tuple

    const std::string& name() const { return definition.head_symbol.name; }
    const InstantiationTuple* tuple_for(int def_index) const;
};

// Not a parseable identifier, so it can never collide with a program symbol.
inline constexpr const char* kInventedPlaceholder = "$ho";

// All abstractions of d with between 1 and max_ho_vars abstracted symbols.
// Order: subset size ascending, then positions of the symbols in first-
// occurrence order.  A definition with no abstractable symbol yields {}.
std::vector<CandidateAbstraction> enumerate_abstractions(const Definition& d, int max_ho_vars);

// Alpha-canonical renaming: first-order variables restart at A per clause,
// higher-order variables are P,Q,R,... by head position, the head symbol
// becomes the placeholder.  Idempotent.
Definition canonicalize_definition(const Definition& d);
std::string canonical_key(const Definition& d);
Abstraction canonicalize(const CandidateAbstraction& raw, int origin_def_index);

// Renames the head symbol everywhere it occurs (head and recursive calls).
void rename_head_symbol(Definition& d, const std::string& new_name);

struct CandidatePool {
    std::vector<Abstraction> abstractions;  // named ho_0, ho_1, ... in discovery order
    int enumerated = 0;                     // candidates before alpha-equivalence merging
    int distinct_before_filter = 0;         // merged candidates before the sharing filter
};

// Enumerates over every definition, merges alpha-equivalent candidates, and
// unless keep_singletons is set drops every abstraction usable by fewer than
// two definitions.
CandidatePool build_candidate_pool(const Program& p, int max_ho_vars, bool keep_singletons = false);

// --- library files ---------------------------------------------------------

// Same surface syntax as programs, with higher-order heads.  Every clause
// head must carry at least one higher-order variable.
std::vector<Abstraction> parse_abstraction_library(std::string_view text,
                                                   std::vector<ParseDiagnostic>& diagnostics,
                                                   const std::string& filename = "<library>");
std::string export_abstraction_library(const std::vector<Abstraction>& library);

}  // namespace horef

#endif  // HOREF_ABSTRACTION_HPP
