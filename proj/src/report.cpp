#include "horef/report.hpp"

#include <json.hpp>

namespace horef {

std::string emit_report(const RefactorReport& r) {
    using json = nlohmann::ordered_json;

    json j;
    j["input_size"] = r.input_size;
    j["output_size"] = r.output_size;
    j["objective_value"] = r.objective_value;
    j["objective_breakdown"] = {{"unabstracted_size", r.objective_breakdown.unabstracted_size},
                                {"abstraction_size", r.objective_breakdown.abstraction_size},
                                {"refactored_size", r.objective_breakdown.refactored_size},
                                {"penalty", r.objective_breakdown.penalty}};
    j["proved_optimal"] = r.proved_optimal;

    j["selected_abstractions"] = json::array();
    for (const SelectedAbstractionInfo& a : r.selected_abstractions)
        j["selected_abstractions"].push_back({{"name", a.name},
                                              {"ho_vars", a.ho_vars},
                                              {"size", a.size},
                                              {"num_origins", a.num_origins},
                                              {"text", a.text}});

    j["assignments"] = json::object();
    for (const auto& [def, abstraction] : r.assignments) j["assignments"][def] = abstraction;

    j["candidates_enumerated"] = r.candidates_enumerated;
    j["candidates_before_filter"] = r.candidates_before_filter;
    j["candidates_after_filter"] = r.candidates_after_filter;
    j["enumeration_convention"] =
        "candidates_before_filter counts abstractions distinct modulo renaming after merging "
        "across definitions; candidates_enumerated counts every (definition, symbol subset) pair";

    switch (r.verification.kind) {
        case VerificationOutcome::Kind::Skipped:
            j["verification"] = "skipped";
            break;
        case VerificationOutcome::Kind::Equivalent:
            j["verification"] = "equivalent";
            break;
        case VerificationOutcome::Kind::CounterexampleFound: {
            const Counterexample& ce = *r.verification.counterexample;
            j["verification"] = {{"counterexample",
                                  {{"atom", ce.atom.to_string()},
                                   {"derivable_from", ce.in_input ? "input" : "output"}}}};
            break;
        }
    }

    j["solve_millis"] = r.solve_millis;
    j["total_millis"] = r.total_millis;
    return j.dump(2) + "\n";
}

}  // namespace horef
