#include "horef/pipeline.hpp"

#include <chrono>

#include "horef/print.hpp"

namespace horef {

PipelineResult run_refactor_pipeline(const Program& input, const PipelineOptions& opts) {
    using Clock = std::chrono::steady_clock;
    const auto started = Clock::now();
    auto millis_since = [](Clock::time_point t0) {
        return std::chrono::duration_cast<std::chrono::milliseconds>(Clock::now() - t0).count();
    };

    PipelineResult r;
    r.input = input;
    if (!opts.targets.empty()) {
        r.input.targets.clear();
        for (const std::string& name : opts.targets) {
            const Definition* d = r.input.find_definition(name);
            if (!d)
                throw EvalError(EvalErrorKind::UnresolvedSymbol,
                                "target predicate '" + name + "' has no definition");
            r.input.targets.push_back(d->head_symbol);
        }
    } else if (r.input.targets.empty()) {
        r.input.targets = root_symbols(r.input);
    }

    r.pool = build_candidate_pool(r.input, opts.max_ho_vars, opts.keep_singletons);
    r.model = build_cop(r.input, r.pool, opts.weights);

    const auto solve_started = Clock::now();
    r.assignment = solve_cop(r.model, {opts.timeout_secs});
    r.report.solve_millis = millis_since(solve_started);

    r.output = apply_refactoring(r.input, r.pool.abstractions, r.assignment);

    r.report.input_size = size(r.input);
    r.report.output_size = size(r.output);
    r.report.objective_value = r.assignment.objective;
    r.report.objective_breakdown = r.assignment.breakdown;
    r.report.proved_optimal = r.assignment.proved_optimal;
    for (int ai = 0; ai < static_cast<int>(r.pool.abstractions.size()); ++ai) {
        if (!r.assignment.selected[ai]) continue;
        const Abstraction& a = r.pool.abstractions[ai];
        r.report.selected_abstractions.push_back({a.name(), a.ho_var_count, size(a.definition),
                                                  static_cast<int>(a.origins.size()),
                                                  print_definition(a.definition)});
    }
    for (std::size_t di = 0; di < r.input.definitions.size(); ++di) {
        const int c = r.assignment.choice[di];
        r.report.assignments.emplace_back(r.input.definitions[di].head_symbol.name,
                                          c == -1 ? "none" : r.pool.abstractions[c].name());
    }
    r.report.candidates_enumerated = r.pool.enumerated;
    r.report.candidates_before_filter = r.pool.distinct_before_filter;
    r.report.candidates_after_filter = static_cast<long long>(r.pool.abstractions.size());

    if (!opts.verify) {
        r.report.verification.kind = VerificationOutcome::Kind::Skipped;
    } else {
        Universe standard;
        const Universe* u = opts.universe;
        if (!u) {
            standard = standard_universe();
            u = &standard;
        }
        EquivalenceResult eq =
            check_equivalence(r.input, r.output, r.pool.abstractions, *u, r.input.targets);
        if (eq.equivalent) {
            r.report.verification.kind = VerificationOutcome::Kind::Equivalent;
        } else {
            r.report.verification.kind = VerificationOutcome::Kind::CounterexampleFound;
            r.report.verification.counterexample = eq.counterexample;
        }
    }

    r.report.total_millis = millis_since(started);
    return r;
}

}  // namespace horef
