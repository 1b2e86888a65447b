#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <json.hpp>

#include "horef/pipeline.hpp"
#include "horef/print.hpp"
#include "horef/report.hpp"
#include "test_util.hpp"

using namespace horef;
using nlohmann::ordered_json;

namespace {

RefactorReport sample_report() {
    RefactorReport r;
    r.input_size = 65;
    r.output_size = 37;
    r.objective_value = 39;
    r.objective_breakdown = {7, 16, 14, 2};
    r.proved_optimal = true;
    r.selected_abstractions.push_back({"ho_0", 1, 6, 3, "ho_0(A,P) :- head(A,B),P(B).\n"});
    r.assignments = {{"memberzero", "ho_0"}, {"allnegative", "none"}};
    r.candidates_enumerated = 91;
    r.candidates_before_filter = 62;
    r.candidates_after_filter = 11;
    r.verification.kind = VerificationOutcome::Kind::Equivalent;
    r.solve_millis = 1;
    r.total_millis = 2;
    return r;
}

std::vector<std::string> top_level_keys(const ordered_json& j) {
    std::vector<std::string> keys;
    for (const auto& item : j.items()) keys.push_back(item.key());
    return keys;
}

std::string masked(std::string report_text) {
    ordered_json j = ordered_json::parse(report_text);
    j["solve_millis"] = 0;
    j["total_millis"] = 0;
    return j.dump(2) + "\n";
}

PipelineResult run_appendix(bool verify) {
    Program p = testutil::load_program("appendix_input.pl");
    Universe u =
        build_universe(parse_universe_spec(testutil::read_file(testutil::data_path("universe_bits.json"))));
    PipelineOptions opts;
    opts.verify = verify;
    opts.universe = &u;
    return run_refactor_pipeline(p, opts);
}

}  // namespace

TEST_CASE("report fields appear in a fixed order") {
    std::string text = emit_report(sample_report());
    CHECK(text.back() == '\n');

    ordered_json j = ordered_json::parse(text);
    std::vector<std::string> expected{"input_size",
                                      "output_size",
                                      "objective_value",
                                      "objective_breakdown",
                                      "proved_optimal",
                                      "selected_abstractions",
                                      "assignments",
                                      "candidates_enumerated",
                                      "candidates_before_filter",
                                      "candidates_after_filter",
                                      "enumeration_convention",
                                      "verification",
                                      "solve_millis",
                                      "total_millis"};
    CHECK(top_level_keys(j) == expected);
    CHECK(top_level_keys(j["objective_breakdown"]) ==
          std::vector<std::string>{"unabstracted_size", "abstraction_size", "refactored_size",
                                   "penalty"});
    CHECK(top_level_keys(j["selected_abstractions"][0]) ==
          std::vector<std::string>{"name", "ho_vars", "size", "num_origins", "text"});

    CHECK(j["input_size"] == 65);
    CHECK(j["objective_breakdown"]["penalty"] == 2);
    CHECK(j["proved_optimal"] == true);
    CHECK(j["assignments"]["allnegative"] == "none");
    CHECK(j["verification"] == "equivalent");
    CHECK(j["enumeration_convention"].is_string());
    CHECK_FALSE(j["enumeration_convention"].get<std::string>().empty());
}

TEST_CASE("counterexamples serialise with their provenance side") {
    RefactorReport r = sample_report();
    r.verification.kind = VerificationOutcome::Kind::CounterexampleFound;
    r.verification.counterexample = Counterexample{{"memberzero", {"[0,0]"}}, true};

    ordered_json j = ordered_json::parse(emit_report(r));
    CHECK(j["verification"]["counterexample"]["atom"] == "memberzero([0,0])");
    CHECK(j["verification"]["counterexample"]["derivable_from"] == "input");

    r.verification.counterexample->in_input = false;
    j = ordered_json::parse(emit_report(r));
    CHECK(j["verification"]["counterexample"]["derivable_from"] == "output");
}

TEST_CASE("pipeline report for the appendix program") {
    PipelineResult r = run_appendix(true);

    CHECK(r.report.input_size == 65);
    CHECK(r.report.output_size == 37);
    CHECK(r.report.objective_value == 39);
    CHECK(r.report.objective_breakdown == ObjectiveBreakdown{7, 16, 14, 2});
    CHECK(r.report.proved_optimal);
    CHECK(r.report.candidates_enumerated == 91);
    CHECK(r.report.candidates_before_filter == 62);
    CHECK(r.report.candidates_after_filter == 11);
    CHECK(r.report.verification.kind == VerificationOutcome::Kind::Equivalent);
    CHECK(r.report.total_millis >= r.report.solve_millis);

    REQUIRE(r.report.selected_abstractions.size() == 2);
    const SelectedAbstractionInfo& member = r.report.selected_abstractions[0];
    CHECK(member.name == "ho_0");
    CHECK(member.ho_vars == 1);
    CHECK(member.size == 6);
    CHECK(member.num_origins == 3);
    CHECK(member.text ==
          "ho_0(A,P) :- head(A,B),P(B).\n"
          "ho_0(A,P) :- tail(A,B),ho_0(B,P).\n");
    const SelectedAbstractionInfo& map = r.report.selected_abstractions[1];
    CHECK(map.name == "ho_4");
    CHECK(map.ho_vars == 1);
    CHECK(map.size == 10);
    CHECK(map.num_origins == 4);
    CHECK(map.text ==
          "ho_4(A,B,P) :- empty(A),empty(B).\n"
          "ho_4(A,B,P) :- head(A,C),tail(A,D),head(B,E),tail(B,F),P(C,E),ho_4(D,F,P).\n");

    std::vector<std::pair<std::string, std::string>> expected_assignments{
        {"memberzero", "ho_0"}, {"mapaddone", "ho_4"},  {"memberodd", "ho_0"},
        {"allnegative", "none"}, {"chartoint", "ho_4"}, {"membereven", "ho_0"},
        {"mapcube", "ho_4"},     {"inttobin", "ho_4"},
    };
    CHECK(r.report.assignments == expected_assignments);

    CHECK(testutil::normalized(r.output) ==
          testutil::normalized(testutil::load_program("appendix_output.pl", true)));
}

TEST_CASE("identical runs serialise identically once timings are masked") {
    PipelineResult a = run_appendix(true);
    PipelineResult b = run_appendix(true);
    CHECK(print_program(a.output) == print_program(b.output));
    CHECK(masked(emit_report(a.report)) == masked(emit_report(b.report)));
}

TEST_CASE("verification can be skipped") {
    PipelineResult r = run_appendix(false);
    CHECK(r.report.verification.kind == VerificationOutcome::Kind::Skipped);
    ordered_json j = ordered_json::parse(emit_report(r.report));
    CHECK(j["verification"] == "skipped");
}

TEST_CASE("explicit targets drive verification and unknown ones fail") {
    Program p = testutil::load_program("appendix_input.pl");
    Universe u =
        build_universe(parse_universe_spec(testutil::read_file(testutil::data_path("universe_bits.json"))));

    PipelineOptions opts;
    opts.universe = &u;
    opts.targets = {"memberzero", "mapaddone"};
    PipelineResult r = run_refactor_pipeline(p, opts);
    REQUIRE(r.input.targets.size() == 2);
    CHECK(r.input.targets[0] == PredicateSymbol{"memberzero", 1});
    CHECK(r.report.verification.kind == VerificationOutcome::Kind::Equivalent);

    opts.targets = {"nosuch"};
    CHECK_THROWS_AS(run_refactor_pipeline(p, opts), EvalError);
}

TEST_CASE("an expired deadline yields a feasible unproved result") {
    Program p = testutil::load_program("appendix_input.pl");
    PipelineOptions opts;
    opts.timeout_secs = 0.0;
    opts.verify = false;
    PipelineResult r = run_refactor_pipeline(p, opts);
    CHECK_FALSE(r.report.proved_optimal);
    CHECK(r.report.objective_value == 65);  // keeping everything is always feasible
    CHECK(r.report.output_size == 65);
    ordered_json j = ordered_json::parse(emit_report(r.report));
    CHECK(j["proved_optimal"] == false);
}
