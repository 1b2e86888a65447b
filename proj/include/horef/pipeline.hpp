// End-to-end orchestration: candidate enumeration, optimal selection,
// rewriting, verification, report assembly.  The command-line driver is a
// thin wrapper over this, so tests can compare the two.
#pragma once

#include <optional>
#include <string>
#include <vector>

#include "horef/abstraction.hpp"
#include "horef/ast.hpp"
#include "horef/cop.hpp"
#include "horef/eval.hpp"
#include "horef/report.hpp"

namespace horef {

struct PipelineOptions {
    std::vector<std::string> targets;  // empty: use the root symbols
    int max_ho_vars = 3;
    Weights weights;
    std::optional<double> timeout_secs;
    bool keep_singletons = false;
    bool verify = true;
    const Universe* universe = nullptr;  // null: the standard universe
};

struct PipelineResult {
    Program input;  // with the effective target set filled in
    CandidatePool pool;
    CopModel model;
    Assignment assignment;
    Program output;
    RefactorReport report;
};

// Throws EvalError{UnresolvedSymbol} if an explicit target has no definition;
// propagates evaluator errors when verification is on.
PipelineResult run_refactor_pipeline(const Program& input, const PipelineOptions& opts = {});

}  // namespace horef
