// Command-line driver: refactor (full pipeline), abstractions (candidate
// pool only), check (equivalence of two programs).
//
// Exit codes: 0 success, 1 parse error, 2 unresolved symbol, 3 verification
// failure, 4 I/O error.
#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "horef/abstraction.hpp"
#include "horef/eval.hpp"
#include "horef/parse.hpp"
#include "horef/pipeline.hpp"
#include "horef/print.hpp"
#include "horef/report.hpp"

namespace {

using namespace horef;

constexpr int kExitOk = 0;
constexpr int kExitParse = 1;
constexpr int kExitUnresolved = 2;
constexpr int kExitVerification = 3;
constexpr int kExitIo = 4;

struct Options {
    std::string input_path;
    std::string refactored_path;
    std::vector<std::string> targets;
    int max_ho_vars = 3;
    std::vector<int> weights{1, 1, 1, 1};
    double timeout_secs = 3600.0;
    std::string universe_path;
    std::string out_path;
    std::string report_path;
    bool no_verify = false;
    bool keep_singletons = false;
};

std::optional<std::string> read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) return std::nullopt;
    std::ostringstream ss;
    ss << in.rdbuf();
    if (in.bad()) return std::nullopt;
    return ss.str();
}

bool write_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) return false;
    out << content;
    out.flush();
    return static_cast<bool>(out);
}

std::optional<Program> parse_program_file(const std::string& path, bool allow_higher_order,
                                          int& rc) {
    auto text = read_file(path);
    if (!text) {
        std::cerr << "error: cannot read '" << path << "'\n";
        rc = kExitIo;
        return std::nullopt;
    }
    ParseOptions po;
    po.allow_higher_order = allow_higher_order;
    po.filename = path;
    ParseResult res = parse_program(*text, po);
    for (const ParseDiagnostic& d : res.diagnostics) std::cerr << d.to_string() << "\n";
    if (!res.ok()) {
        rc = kExitParse;
        return std::nullopt;
    }
    return std::move(res.program);
}

std::optional<Universe> load_universe(const std::string& path, int& rc) {
    if (path.empty()) return standard_universe();
    auto text = read_file(path);
    if (!text) {
        std::cerr << "error: cannot read '" << path << "'\n";
        rc = kExitIo;
        return std::nullopt;
    }
    try {
        return build_universe(parse_universe_spec(*text));
    } catch (const EvalError& e) {
        std::cerr << "error: " << e.what() << "\n";
        rc = kExitParse;
        return std::nullopt;
    }
}

int map_eval_error(const EvalError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return e.kind() == EvalErrorKind::BadUniverse ? kExitParse : kExitUnresolved;
}

int cmd_refactor(const Options& o) {
    int rc = kExitOk;
    auto program = parse_program_file(o.input_path, false, rc);
    if (!program) return rc;
    if (o.weights.size() != 4) {
        std::cerr << "error: --weights expects w1,w2,w3,w4\n";
        return kExitParse;
    }

    PipelineOptions po;
    po.targets = o.targets;
    po.max_ho_vars = o.max_ho_vars;
    po.weights = {o.weights[0], o.weights[1], o.weights[2], o.weights[3]};
    po.timeout_secs = o.timeout_secs;
    po.keep_singletons = o.keep_singletons;
    po.verify = !o.no_verify;

    std::optional<Universe> universe;
    if (po.verify) {
        universe = load_universe(o.universe_path, rc);
        if (!universe) return rc;
        po.universe = &*universe;
    }

    PipelineResult result;
    try {
        result = run_refactor_pipeline(*program, po);
    } catch (const EvalError& e) {
        return map_eval_error(e);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitParse;
    }

    const std::string out_text = print_program(result.output);
    if (o.out_path.empty()) {
        std::cout << out_text;
    } else if (!write_file(o.out_path, out_text)) {
        std::cerr << "error: cannot write '" << o.out_path << "'\n";
        return kExitIo;
    }
    if (!o.report_path.empty() && !write_file(o.report_path, emit_report(result.report))) {
        std::cerr << "error: cannot write '" << o.report_path << "'\n";
        return kExitIo;
    }

    const RefactorReport& rep = result.report;
    std::cerr << "input size " << rep.input_size << ", output size " << rep.output_size
              << ", objective " << rep.objective_value
              << (rep.proved_optimal ? " (proved optimal)" : " (best found before timeout)")
              << "\n";
    if (rep.verification.kind == VerificationOutcome::Kind::Equivalent)
        std::cerr << "verification: equivalent\n";
    if (rep.verification.kind == VerificationOutcome::Kind::CounterexampleFound) {
        const Counterexample& ce = *rep.verification.counterexample;
        std::cerr << "verification failed: " << ce.atom.to_string() << " derivable from "
                  << (ce.in_input ? "input" : "output") << " only\n";
        return kExitVerification;
    }
    return kExitOk;
}

int cmd_abstractions(const Options& o) {
    int rc = kExitOk;
    auto program = parse_program_file(o.input_path, false, rc);
    if (!program) return rc;

    CandidatePool pool;
    try {
        pool = build_candidate_pool(*program, o.max_ho_vars, o.keep_singletons);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitParse;
    }

    const std::string text = export_abstraction_library(pool.abstractions);
    if (o.out_path.empty()) {
        std::cout << text;
    } else if (!write_file(o.out_path, text)) {
        std::cerr << "error: cannot write '" << o.out_path << "'\n";
        return kExitIo;
    }
    std::cerr << "enumerated " << pool.enumerated << " candidates, "
              << pool.distinct_before_filter << " distinct, kept " << pool.abstractions.size()
              << "\n";
    return kExitOk;
}

int cmd_check(const Options& o) {
    int rc = kExitOk;
    auto p = parse_program_file(o.input_path, false, rc);
    if (!p) return rc;
    auto q = parse_program_file(o.refactored_path, true, rc);
    if (!q) return rc;
    auto universe = load_universe(o.universe_path, rc);
    if (!universe) return rc;

    std::vector<PredicateSymbol> targets;
    if (o.targets.empty()) {
        targets = root_symbols(*p);
    } else {
        for (const std::string& name : o.targets) {
            const Definition* d = p->find_definition(name);
            if (!d) {
                std::cerr << "error: target predicate '" << name << "' has no definition\n";
                return kExitUnresolved;
            }
            targets.push_back(d->head_symbol);
        }
    }

    EquivalenceResult res;
    try {
        res = check_equivalence(*p, *q, {}, *universe, targets);
    } catch (const EvalError& e) {
        return map_eval_error(e);
    }
    if (res.equivalent) {
        std::cout << "equivalent\n";
        return kExitOk;
    }
    const Counterexample& ce = *res.counterexample;
    std::cout << "counterexample: " << ce.atom.to_string() << " (derivable from "
              << (ce.in_input ? "input" : "refactored") << " only)\n";
    return kExitVerification;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Compresses definite logic programs by inventing higher-order abstractions"};
    app.require_subcommand(1);
    Options o;
    int rc = kExitOk;

    CLI::App* refactor = app.add_subcommand("refactor", "Run the full refactoring pipeline");
    refactor->add_option("input", o.input_path, "Program file")->required();
    refactor->add_option("--targets", o.targets, "Comma-separated target predicates")
        ->delimiter(',');
    refactor->add_option("--max-ho-vars", o.max_ho_vars, "Higher-order variables per abstraction")
        ->check(CLI::PositiveNumber);
    refactor->add_option("--weights", o.weights, "Objective weights w1,w2,w3,w4")->delimiter(',');
    refactor->add_option("--timeout-secs", o.timeout_secs, "Solver time budget in seconds")
        ->check(CLI::PositiveNumber);
    refactor->add_option("--universe", o.universe_path, "Universe description (JSON)");
    refactor->add_option("--out", o.out_path, "Write the refactored program here");
    refactor->add_option("--report", o.report_path, "Write the JSON report here");
    refactor->add_flag("--no-verify", o.no_verify, "Skip the equivalence check");
    refactor->add_flag("--keep-singletons", o.keep_singletons,
                       "Keep abstractions usable by only one definition");
    refactor->callback([&] { rc = cmd_refactor(o); });

    CLI::App* abstractions =
        app.add_subcommand("abstractions", "Enumerate the candidate abstraction pool");
    abstractions->add_option("input", o.input_path, "Program file")->required();
    abstractions->add_option("--max-ho-vars", o.max_ho_vars,
                             "Higher-order variables per abstraction")
        ->check(CLI::PositiveNumber);
    abstractions->add_option("--out", o.out_path, "Write the abstraction library here");
    abstractions->add_flag("--keep-singletons", o.keep_singletons,
                           "Keep abstractions usable by only one definition");
    abstractions->callback([&] { rc = cmd_abstractions(o); });

    CLI::App* check = app.add_subcommand("check", "Check two programs for equivalence");
    check->add_option("input", o.input_path, "Original program file")->required();
    check->add_option("refactored", o.refactored_path, "Refactored program file")->required();
    check->add_option("--targets", o.targets, "Comma-separated target predicates")
        ->delimiter(',');
    check->add_option("--universe", o.universe_path, "Universe description (JSON)");
    check->callback([&] { rc = cmd_check(o); });

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e);
    }
    return rc;
}
