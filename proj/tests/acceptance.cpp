// Acceptance gate: eight end-to-end checks, one printed line each.
// Exit status is the number of failing checks (0 = all green).
#include <chrono>
#include <iostream>
#include <random>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "horef/abstraction.hpp"
#include "horef/ast.hpp"
#include "horef/cop.hpp"
#include "horef/eval.hpp"
#include "horef/parse.hpp"
#include "horef/pipeline.hpp"
#include "horef/print.hpp"
#include "horef/report.hpp"
#include "test_util.hpp"

using namespace horef;
using Clock = std::chrono::steady_clock;

namespace {

void require(bool cond, const std::string& msg) {
    if (!cond) throw std::runtime_error(msg);
}

template <typename T>
void require_eq(const T& got, const T& want, const std::string& what) {
    if (!(got == want)) {
        std::ostringstream os;
        os << what << ": got ";
        if constexpr (std::is_arithmetic_v<T>)
            os << got << ", want " << want;
        else
            os << "a value different from the expected one";
        throw std::runtime_error(os.str());
    }
}

std::set<std::string> selected_keys(const PipelineResult& r) {
    std::set<std::string> keys;
    for (std::size_t ai = 0; ai < r.pool.abstractions.size(); ++ai)
        if (r.assignment.selected[ai]) keys.insert(r.pool.abstractions[ai].canonical_key);
    return keys;
}

void require_strictly_decreasing(const std::vector<long long>& trace) {
    require(!trace.empty(), "empty incumbent trace");
    for (std::size_t i = 1; i < trace.size(); ++i)
        require(trace[i] < trace[i - 1], "incumbent trace is not strictly decreasing");
}

// ---------------------------------------------------------------------------

std::string criterion1() {
    Program input = testutil::load_program("appendix_input.pl");
    require_eq<std::size_t>(input.definitions.size(), 8, "definition count");
    require_eq<long long>(size(input), 65, "input size");

    PipelineResult r = run_refactor_pipeline(input);  // defaults: max 3, unit weights, verify

    Program reference = testutil::load_program("appendix_candidates.pl", true);
    std::set<std::string> want{canonical_key(*reference.find_definition("ho3")),
                               canonical_key(*reference.find_definition("ho8"))};
    require(selected_keys(r) == want,
            "selected abstractions are not the member-style and map-style ones");

    const Definition* allneg = input.find_definition("allnegative");
    for (std::size_t di = 0; di < input.definitions.size(); ++di)
        if (&input.definitions[di] == allneg)
            require(r.assignment.choice[di] == -1, "allnegative was refactored");

    require_eq<long long>(size(r.output), 37, "output size");
    require(testutil::normalized(r.output) ==
                testutil::normalized(testutil::load_program("appendix_output.pl", true)),
            "output is not structurally equal to the expected program");
    require(r.report.verification.kind == VerificationOutcome::Kind::Equivalent,
            "verification did not return equivalent");
    std::ostringstream os;
    os << "8 definitions, size 65 -> " << size(r.output) << ", objective "
       << r.assignment.objective << ", verified";
    return os.str();
}

std::string criterion2() {
    Program input = testutil::load_program("appendix_input.pl");
    CandidatePool pool = build_candidate_pool(input, 3);

    Program reference = testutil::load_program("appendix_candidates.pl", true);
    require_eq<std::size_t>(reference.definitions.size(), 11, "reference pool size");
    std::set<std::string> want, got;
    for (const Definition& d : reference.definitions) want.insert(canonical_key(d));
    for (const Abstraction& a : pool.abstractions) got.insert(a.canonical_key);
    require(got == want, "pool does not match the eleven reference candidates");

    PipelineOptions opts;
    opts.verify = false;
    PipelineResult r = run_refactor_pipeline(input, opts);
    require_eq<long long>(r.report.candidates_before_filter, 62, "pre-filter candidate count");
    const std::string json = emit_report(r.report);
    require(json.find("enumeration_convention") != std::string::npos &&
                json.find("distinct modulo renaming") != std::string::npos,
            "report does not document the enumeration convention");
    std::ostringstream os;
    os << "pool of " << pool.abstractions.size() << " matches; " << r.report.candidates_enumerated
       << " enumerated, " << r.report.candidates_before_filter << " distinct reported";
    return os.str();
}

std::string criterion3() {
    struct Case {
        const char* program;
        const char* expected;
    };
    for (const Case& c : {Case{"example1.pl", "example1_expected.pl"},
                          Case{"example2.pl", "example2_expected.pl"}}) {
        Program p = testutil::load_program(c.program);
        require_eq<std::size_t>(p.definitions.size(), 1, "example definition count");
        std::vector<CandidateAbstraction> cands = enumerate_abstractions(p.definitions[0], 2);

        Program expected = testutil::load_program(c.expected, true);
        require_eq(cands.size(), expected.definitions.size(),
                   std::string(c.program) + ": candidate count");
        for (std::size_t i = 0; i < cands.size(); ++i)
            require(canonical_key(cands[i].def) == canonical_key(expected.definitions[i]),
                    std::string(c.program) + ": candidate " + std::to_string(i) +
                        " is not alpha-equivalent to the expected one");
    }
    return "examples 1 and 2 each yield exactly the three expected abstractions";
}

std::string criterion4() {
    std::uint64_t seed = 1000;
    int accepted = 0, attempts = 0;
    long long nodes = 0;
    while (accepted < 20) {
        require(++attempts < 500, "could not generate 20 admissible instances");
        std::mt19937_64 rng(seed++);
        Program p = testutil::must_parse(testutil::generate_program_text(rng, 2, 5));
        CandidatePool pool = build_candidate_pool(p, 3);
        if (pool.abstractions.size() > 12 || p.definitions.size() > 10) continue;
        ++accepted;

        CopModel model = build_cop(p, pool, {});
        Assignment a = solve_cop(model);
        require(a.proved_optimal, "solver did not prove optimality without a deadline");
        long long want = testutil::brute_force_objective(model);
        require_eq(a.objective, want, "objective vs exhaustive enumeration");
        require_eq(evaluate_assignment(model, a.choice).objective, a.objective,
                   "objective audit of the returned choice");
        nodes += a.nodes_explored;
    }
    std::ostringstream os;
    os << "20 instances match exhaustive enumeration (" << nodes << " nodes)";
    return os.str();
}

std::vector<std::pair<long long, long long>> g_sizes;  // (input, output) per verified instance

std::string criterion5() {
    g_sizes.clear();
    std::uint64_t seed = 5000;
    for (int i = 0; i < 50; ++i) {
        std::mt19937_64 rng(seed + i);
        Program p = testutil::must_parse(testutil::generate_program_text(rng, 2, 5));
        PipelineResult r = run_refactor_pipeline(p);  // standard universe, verify on
        require(r.assignment.proved_optimal, "optimum not proved on a random instance");
        require(r.report.verification.kind == VerificationOutcome::Kind::Equivalent,
                "instance " + std::to_string(i) + " (seed " + std::to_string(seed + i) +
                    ") is not semantics-preserving: " + emit_report(r.report));
        g_sizes.emplace_back(r.report.input_size, r.report.output_size);
    }
    return "50 random programs refactored and verified equivalent";
}

std::string criterion6() {
    // Reuse the verified instances when available, else generate fresh ones.
    std::vector<std::pair<long long, long long>> sizes = g_sizes;
    if (sizes.empty()) {
        for (int i = 0; i < 20; ++i) {
            std::mt19937_64 rng(7000 + i);
            Program p = testutil::must_parse(testutil::generate_program_text(rng, 2, 5));
            PipelineOptions opts;
            opts.verify = false;
            PipelineResult r = run_refactor_pipeline(p, opts);
            sizes.emplace_back(r.report.input_size, r.report.output_size);
        }
    }
    for (const auto& [in, out] : sizes)
        require(out <= in, "output larger than input under default weights");

    // Empty pool: a lone definition shares nothing, so everything is kept.
    Program p = testutil::must_parse("p0(A,B) :- tail(A,C),head(C,B).\n");
    PipelineOptions opts;
    opts.verify = false;
    PipelineResult r = run_refactor_pipeline(p, opts);
    require_eq<std::size_t>(r.pool.abstractions.size(), 0, "pool size");
    for (int c : r.assignment.choice) require(c == -1, "non-none choice with an empty pool");
    require(r.output == r.input, "output differs from input with an empty pool");
    std::ostringstream os;
    os << "size(output) <= size(input) on " << sizes.size()
       << " instances; empty pool keeps everything";
    return os.str();
}

std::string criterion7() {
    Program p = testutil::load_program("intro_h1.pl");
    require_eq<long long>(size(p), 20, "input size");

    Universe u = build_universe(
        parse_universe_spec(testutil::read_file(testutil::data_path("universe_h1.json"))));
    PipelineOptions opts;
    opts.universe = &u;
    PipelineResult r = run_refactor_pipeline(p, opts);

    int selected = -1;
    for (std::size_t ai = 0; ai < r.pool.abstractions.size(); ++ai)
        if (r.assignment.selected[ai]) {
            require(selected == -1, "more than one abstraction selected");
            selected = static_cast<int>(ai);
        }
    require(selected >= 0, "no abstraction selected");
    require_eq(r.pool.abstractions[selected].ho_var_count, 1,
               "higher-order variable count of the selected abstraction");
    require_eq(r.assignment.choice[0], selected, "assignment of f");
    require_eq(r.assignment.choice[1], selected, "assignment of g");
    require_eq<long long>(size(r.output), 14, "output size");
    require(r.report.verification.kind == VerificationOutcome::Kind::Equivalent,
            "verification did not return equivalent");
    std::ostringstream os;
    os << "20 -> " << size(r.output) << " via one map-like abstraction with one variable, verified";
    return os.str();
}

std::string criterion8() {
    // Thirty map-style definitions, each over a fresh binary operator: 300
    // literals in total.
    std::ostringstream src;
    for (int i = 0; i < 30; ++i) {
        const std::string p = "p" + std::to_string(i);
        const std::string op = "op" + std::to_string(i);
        src << p << "(A,B) :- empty(A),empty(B).\n"
            << p << "(A,B) :- head(A,C),tail(A,D),head(B,E),tail(B,F)," << op << "(C,E)," << p
            << "(D,F).\n";
    }
    Program p = testutil::must_parse(src.str());
    require_eq<long long>(size(p), 300, "input size");

    PipelineOptions opts;
    opts.verify = false;  // the fresh operators have no background relations
    PipelineResult r = run_refactor_pipeline(p, opts);

    require(r.assignment.proved_optimal, "optimality was not proved");
    require_strictly_decreasing(r.assignment.incumbent_trace);
    require_eq(r.assignment.incumbent_trace.front(), 300LL, "trace start");
    require_eq(r.assignment.incumbent_trace.back(), r.assignment.objective, "trace end");
    require_eq(r.report.objective_value, 71LL, "objective");
    require_eq(r.report.output_size, 70LL, "output size");
    std::ostringstream os;
    os << "300 -> " << r.report.output_size << " proved optimal in " << r.report.solve_millis
       << " ms solve time";
    return os.str();
}

}  // namespace

int main() {
    struct Entry {
        int number;
        long long budget_ms;  // 0 = no wall-clock bound
        std::string (*body)();
    };
    const Entry entries[] = {
        {1, 5000, criterion1},   {2, 5000, criterion2},  {3, 0, criterion3},
        {4, 60000, criterion4},  {5, 300000, criterion5}, {6, 0, criterion6},
        {7, 0, criterion7},      {8, 1200000, criterion8},
    };

    int failures = 0;
    for (const Entry& e : entries) {
        const auto t0 = Clock::now();
        std::string detail, error;
        try {
            detail = e.body();
        } catch (const std::exception& ex) {
            error = ex.what();
        }
        const long long ms =
            std::chrono::duration_cast<std::chrono::milliseconds>(Clock::now() - t0).count();
        if (error.empty() && e.budget_ms > 0 && ms > e.budget_ms)
            error = "exceeded the " + std::to_string(e.budget_ms) + " ms budget";
        if (error.empty()) {
            std::cout << "criterion " << e.number << ": PASS — " << detail << " (" << ms
                      << " ms)\n";
        } else {
            ++failures;
            std::cout << "criterion " << e.number << ": FAIL — " << error << "\n";
        }
    }
    return failures;
}
