// Machine-readable summary of a refactoring run.
#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "horef/cop.hpp"
#include "horef/eval.hpp"

namespace horef {

struct SelectedAbstractionInfo {
    std::string name;
    int ho_vars = 0;
    int size = 0;
    int num_origins = 0;  // |D(a)|: definitions this abstraction can refactor
    std::string text;     // printed definition
};

struct VerificationOutcome {
    enum class Kind { Skipped, Equivalent, CounterexampleFound };
    Kind kind = Kind::Skipped;
    std::optional<Counterexample> counterexample;
};

struct RefactorReport {
    long long input_size = 0;
    long long output_size = 0;
    long long objective_value = 0;
    ObjectiveBreakdown objective_breakdown;
    bool proved_optimal = false;
    std::vector<SelectedAbstractionInfo> selected_abstractions;
    // Definition name -> abstraction name or "none", in program order.
    std::vector<std::pair<std::string, std::string>> assignments;
    long long candidates_enumerated = 0;     // one per (definition, symbol subset)
    long long candidates_before_filter = 0;  // distinct modulo renaming
    long long candidates_after_filter = 0;   // reusable by at least two definitions
    VerificationOutcome verification;
    long long solve_millis = 0;
    long long total_millis = 0;
};

// Stable, deterministically ordered JSON; byte-identical for identical runs
// once the two timing fields are masked.
std::string emit_report(const RefactorReport& r);

}  // namespace horef
