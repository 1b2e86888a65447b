// Bounded bottom-up semantics.  Programs are evaluated to their least model
// over a finite universe of constants plus finite background relations; two
// programs are considered equivalent when the models restricted to the target
// symbols coincide.  Higher-order programs are first specialised into
// first-order ones by instantiating each (abstraction, binding tuple) pair
// reachable from a call site.
#pragma once

#include <compare>
#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include "horef/abstraction.hpp"
#include "horef/ast.hpp"

namespace horef {

enum class EvalErrorKind {
    UnresolvedSymbol,   // body predicate neither defined nor a background relation
    UnsafeClause,       // head variable not bound by the body
    UnboundHoVariable,  // higher-order variable with no concrete binding
    BadUniverse,        // malformed universe description
};

class EvalError : public std::runtime_error {
  public:
    EvalError(EvalErrorKind kind, const std::string& message)
        : std::runtime_error(message), kind_(kind) {}
    EvalErrorKind kind() const { return kind_; }

  private:
    EvalErrorKind kind_;
};

// Finite constant pool plus extensional background relations over it.
class Universe {
  public:
    int add_constant(const std::string& name);            // idempotent
    std::optional<int> find_constant(const std::string& name) const;
    const std::string& constant_name(int id) const { return names_.at(id); }
    const std::vector<std::string>& constants() const { return names_; }

    // Constants in the tuple are interned on the fly.
    void add_fact(const std::string& relation, const std::vector<std::string>& tuple);
    // Makes the relation resolvable even when it holds no facts.
    void declare_relation(const std::string& relation, int arity);
    bool has_relation(const PredicateSymbol& s) const;
    const std::set<std::vector<int>>* facts(const PredicateSymbol& s) const;
    const std::map<PredicateSymbol, std::set<std::vector<int>>>& relations() const {
        return relations_;
    }

  private:
    std::vector<std::string> names_;
    std::map<std::string, int> ids_;
    std::map<PredicateSymbol, std::set<std::vector<int>>> relations_;
};

// Parameters for generating a universe: an integer interval, all lists over a
// fixed element set up to a length bound (lists are constants spelled
// "[e1,e2,...]"), extra named constants, and extensional relations.  The
// generated background relations cover the arithmetic and list vocabulary
// used throughout: head/tail/empty, zero/one/even/odd/positive/negative,
// increment/decrement/sum/geq/eq, and ord/bin/cube.
struct UniverseSpec {
    long long int_min = 0;
    long long int_max = 5;
    std::vector<long long> list_elements = {0, 1, 2};
    int list_max_len = 4;
    bool standard_builtins = true;
    std::vector<std::string> extra_constants;
    // name -> tuples of constant names; arity taken from the tuples
    std::map<std::string, std::vector<std::vector<std::string>>> extra_relations;
};

Universe build_universe(const UniverseSpec& spec);
Universe standard_universe();  // build_universe with the defaults above

// Throws EvalError{BadUniverse} on malformed input.
UniverseSpec parse_universe_spec(const std::string& json_text);

struct GroundAtom {
    std::string predicate;
    std::vector<std::string> args;

    std::string to_string() const;
    friend auto operator<=>(const GroundAtom&, const GroundAtom&) = default;
};

struct RestrictedModel {
    std::set<GroundAtom> facts;  // only atoms whose predicate is a target

    bool contains(const GroundAtom& a) const { return facts.count(a) > 0; }
    bool operator==(const RestrictedModel&) const = default;
};

struct EvalStats {
    int iterations = 0;
    std::vector<std::size_t> facts_per_iteration;  // cumulative; non-decreasing
    std::size_t total_facts = 0;                   // before restricting to targets
};

// Replaces every (higher-order definition, concrete binding tuple) pair
// reachable from a call site with a fresh first-order copy under a mangled
// name, and drops the higher-order definitions.  First-order programs are
// returned unchanged.  Throws EvalError{UnboundHoVariable} if a higher-order
// variable survives.
Program specialize(const Program& q, const std::vector<Abstraction>& pool);

// Least-model computation by semi-naive iteration, restricted to `targets`.
// Throws EvalError{UnresolvedSymbol} for a body symbol with no definition and
// no background relation, EvalError{UnsafeClause} for a clause whose head
// variables are not all bound by its body.
RestrictedModel restricted_model(const Program& p, const Universe& u,
                                 const std::vector<PredicateSymbol>& targets,
                                 EvalStats* stats = nullptr);

struct Counterexample {
    GroundAtom atom;
    bool in_input = false;  // true: derivable from p only; false: from q only
};

struct EquivalenceResult {
    bool equivalent = false;
    std::optional<Counterexample> counterexample;  // lexicographically first difference
};

// Compares the restricted models of p and specialize(q, pool) over u.  The
// two model computations run concurrently when HOREF_THREADS allows.
EquivalenceResult check_equivalence(const Program& p, const Program& q,
                                    const std::vector<Abstraction>& pool, const Universe& u,
                                    const std::vector<PredicateSymbol>& targets);

}  // namespace horef
