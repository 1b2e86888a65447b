// Optimal selection of abstractions, phrased as a constraint optimisation
// problem.  Every definition either keeps its original clauses or is rewritten
// to a two-literal call into exactly one selected abstraction; an abstraction
// is paid for once no matter how many definitions use it.
//
// The solver is exact: it decomposes the definition/abstraction incidence
// graph into connected components and runs depth-first branch and bound over
// the selection variables of each component.  With a deadline it degrades
// into an anytime search that reports the best incumbent found.
#pragma once

#include <optional>
#include <string>
#include <vector>

#include "horef/abstraction.hpp"
#include "horef/ast.hpp"

namespace horef {

struct Weights {
    int unabstracted = 1;  // per literal of a definition kept as-is
    int abstraction = 1;   // per literal of a selected abstraction
    int refactored = 1;    // per literal of a rewritten definition (always 2)
    int ho_var = 1;        // per higher-order variable of a selected abstraction

    bool operator==(const Weights&) const = default;
};

// Unweighted literal/variable counts; the objective applies the weights.
struct ObjectiveBreakdown {
    long long unabstracted_size = 0;
    long long abstraction_size = 0;
    long long refactored_size = 0;
    long long penalty = 0;

    long long weighted_total(const Weights& w) const {
        return w.unabstracted * unabstracted_size + w.abstraction * abstraction_size +
               w.refactored * refactored_size + w.ho_var * penalty;
    }
    bool operator==(const ObjectiveBreakdown&) const = default;
};

struct CopModel {
    Weights weights;
    std::vector<int> def_sizes;                  // literal count per definition
    std::vector<int> abstraction_sizes;          // literal count per abstraction
    std::vector<int> ho_var_counts;              // higher-order arity per abstraction
    std::vector<std::string> canonical_keys;     // tie-breaking identity per abstraction
    std::vector<std::vector<int>> options;       // definition -> applicable abstractions
    std::vector<std::vector<int>> origins;       // abstraction -> definitions it covers

    int num_definitions() const { return static_cast<int>(def_sizes.size()); }
    int num_abstractions() const { return static_cast<int>(abstraction_sizes.size()); }

    // Decision variable and constraint counts of the underlying model:
    // one r variable per (definition, applicable abstraction) pair, one n
    // variable per definition, one s variable per abstraction; an exactly-one
    // constraint per definition and a linking constraint per abstraction.
    int num_r_vars() const;
    int num_n_vars() const { return num_definitions(); }
    int num_s_vars() const { return num_abstractions(); }
    int num_exactly_one_constraints() const { return num_definitions(); }
    int num_link_constraints() const { return num_abstractions(); }
};

CopModel build_cop(const Program& p, const CandidatePool& pool, const Weights& w = {});

struct Assignment {
    std::vector<int> choice;        // per definition: abstraction index, or -1 to keep
    std::vector<bool> selected;     // per abstraction
    long long objective = 0;
    ObjectiveBreakdown breakdown;
    bool proved_optimal = false;
    // Objective of each improving incumbent, starting with the trivial
    // keep-everything solution; strictly decreasing.
    std::vector<long long> incumbent_trace;
    long long nodes_explored = 0;
};

struct SolveOptions {
    std::optional<double> timeout_secs;  // wall-clock budget; absent = run to proof
};

// Exact minimisation.  Always returns a feasible assignment; proved_optimal
// is false only when the deadline interrupted the search.
Assignment solve_cop(const CopModel& model, const SolveOptions& opts = {});

// Derives the remaining fields (selected set, breakdown, objective) from a
// per-definition choice vector.  Throws std::invalid_argument if a choice
// names an abstraction that does not cover the definition.
Assignment evaluate_assignment(const CopModel& model, const std::vector<int>& choice);

// Rewrites the program per the assignment: each selected abstraction's
// definition followed by the two-literal definitions that call it, then the
// untouched definitions, preserving relative program order within each group.
Program apply_refactoring(const Program& p, const std::vector<Abstraction>& abstractions,
                          const Assignment& assignment);

}  // namespace horef
