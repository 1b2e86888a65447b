// ============================================================================
// ast.hpp — first-order and higher-order definite program representation
// ============================================================================
//
// A Program is an ordered list of Definitions (clauses grouped by head
// predicate symbol), plus the target symbols whose semantics a refactoring
// must preserve.  All types are plain immutable values: nothing here mutates
// after construction, so everything is safe to share across threads.
//
// Size is measured as the number of literals: each head counts 1, each body
// atom counts 1, independent of arity and of any higher-order arguments.
// ============================================================================

#ifndef HOREF_AST_HPP
#define HOREF_AST_HPP

#include <compare>
#include <cstddef>
#include <string>
#include <vector>

namespace horef {

// A predicate symbol is identified by name *and* arity.
struct PredicateSymbol {
    std::string name;
    int arity = 0;

    friend auto operator<=>(const PredicateSymbol&, const PredicateSymbol&) = default;
};

enum class TermKind {
    Constant,  // lowercase identifier or integer literal
    Var,       // first-order variable (uppercase identifier)
    HoVar,     // higher-order variable (bindable to a predicate symbol)
    PredRef,   // concrete predicate symbol in an argument position
};

struct Term {
    TermKind kind = TermKind::Constant;
    std::string name;

    static Term constant(std::string n) { return {TermKind::Constant, std::move(n)}; }
    static Term var(std::string n) { return {TermKind::Var, std::move(n)}; }
    static Term ho_var(std::string n) { return {TermKind::HoVar, std::move(n)}; }
    static Term pred_ref(std::string n) { return {TermKind::PredRef, std::move(n)}; }

    bool is_variable() const { return kind == TermKind::Var || kind == TermKind::HoVar; }

    friend auto operator<=>(const Term&, const Term&) = default;
};

// An atom's callee is a predicate symbol name, or a (higher-order) variable
// name when callee_is_var is set.  The callee's arity is args.size().
struct Atom {
    std::string callee;
    bool callee_is_var = false;
    std::vector<Term> args;

    int arity() const { return static_cast<int>(args.size()); }
    PredicateSymbol callee_symbol() const { return {callee, arity()}; }
    bool is_higher_order() const;

    friend auto operator<=>(const Atom&, const Atom&) = default;
};

// Head callees are always predicate symbols, never variables.
struct Clause {
    Atom head;
    std::vector<Atom> body;

    int literal_count() const { return 1 + static_cast<int>(body.size()); }
    bool is_higher_order() const;

    friend auto operator<=>(const Clause&, const Clause&) = default;
};

struct Definition {
    PredicateSymbol head_symbol;
    std::vector<Clause> clauses;  // non-empty, original textual order

    friend auto operator<=>(const Definition&, const Definition&) = default;
};

struct Program {
    std::vector<Definition> definitions;     // pairwise-distinct head symbols
    std::vector<PredicateSymbol> targets;    // T; subset of head symbols

    const Definition* find_definition(const std::string& name) const;

    friend auto operator<=>(const Program&, const Program&) = default;
};

// --- size accounting (number of literals) ----------------------------------

int size(const Clause& c);
int size(const Definition& d);
int size(const Program& p);

// --- structure queries -----------------------------------------------------

// True iff the head symbol occurs as a callee in some body atom.
bool is_recursive(const Definition& d);

bool is_first_order(const Clause& c);
bool is_first_order(const Definition& d);
bool is_first_order(const Program& p);

// Partitions a clause stream into definitions by head predicate symbol.
// Definition order follows the first appearance of each head symbol; clause
// order within a definition is preserved.
std::vector<Definition> group_into_definitions(const std::vector<Clause>& clauses);

// Convenience spelling of the partition accessor.
inline const std::vector<Definition>& defs(const Program& p) { return p.definitions; }

// Head symbols that are never called from the body of a *different*
// definition.  Used as the default target set when the user supplies none.
std::vector<PredicateSymbol> root_symbols(const Program& p);

// All symbols that occur as a body callee but head no definition.  These must
// be resolved by background relations at evaluation time.
std::vector<PredicateSymbol> undefined_body_symbols(const Program& p);

}  // namespace horef

#endif  // HOREF_AST_HPP
