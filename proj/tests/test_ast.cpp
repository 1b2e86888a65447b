#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "horef/ast.hpp"
#include "test_util.hpp"

using namespace horef;

namespace {

Clause clause(Atom head, std::vector<Atom> body) { return {std::move(head), std::move(body)}; }

Atom atom(std::string callee, std::vector<Term> args) {
    return {std::move(callee), false, std::move(args)};
}

}  // namespace

TEST_CASE("literal counting ignores arity and argument kinds") {
    Clause fact = clause(atom("p", {Term::constant("a"), Term::constant("b")}), {});
    CHECK(size(fact) == 1);

    Clause rule = clause(atom("p", {Term::var("A")}),
                         {atom("q", {Term::var("A"), Term::var("B")}), atom("r", {})});
    CHECK(size(rule) == 3);

    Definition d{{"p", 1}, {fact, rule}};
    CHECK(size(d) == 4);

    Program p{{d, d}, {}};
    CHECK(size(p) == 8);
}

TEST_CASE("appendix program sizes") {
    Program p = testutil::load_program("appendix_input.pl");
    CHECK(p.definitions.size() == 8);
    CHECK(size(p) == 65);

    std::vector<std::string> names;
    std::vector<int> sizes;
    for (const Definition& d : p.definitions) {
        names.push_back(d.head_symbol.name);
        sizes.push_back(size(d));
    }
    CHECK(names == std::vector<std::string>{"memberzero", "mapaddone", "memberodd", "allnegative",
                                            "chartoint", "membereven", "mapcube", "inttobin"});
    CHECK(sizes == std::vector<int>{6, 10, 6, 7, 10, 6, 10, 10});

    int total = 0;
    for (int s : sizes) total += s;
    CHECK(total == size(p));
}

TEST_CASE("recursion detection looks only at the definition's own symbol") {
    Program p = testutil::must_parse(
        "f(A) :- head(A,B).\n"
        "f(A) :- tail(A,B),f(B).\n"
        "g(A) :- f(A).\n");
    CHECK(is_recursive(*p.find_definition("f")));
    CHECK_FALSE(is_recursive(*p.find_definition("g")));
}

TEST_CASE("higher-order queries") {
    Atom plain = atom("q", {Term::var("A"), Term::constant("c")});
    CHECK_FALSE(plain.is_higher_order());

    Atom with_ho_arg = atom("q", {Term::ho_var("P")});
    CHECK(with_ho_arg.is_higher_order());

    Atom with_pred_ref = atom("q", {Term::pred_ref("zero")});
    CHECK(with_pred_ref.is_higher_order());

    Atom var_callee{"P", true, {Term::var("A")}};
    CHECK(var_callee.is_higher_order());

    Clause fo = clause(atom("p", {Term::var("A")}), {plain});
    CHECK(is_first_order(fo));
    Clause ho = clause(atom("p", {Term::var("A")}), {plain, var_callee});
    CHECK_FALSE(is_first_order(ho));

    CHECK(is_first_order(testutil::load_program("appendix_input.pl")));
    CHECK_FALSE(is_first_order(testutil::load_program("appendix_candidates.pl", true)));
}

TEST_CASE("grouping preserves first-appearance order and clause order") {
    Clause p1 = clause(atom("p", {Term::constant("a")}), {});
    Clause q1 = clause(atom("q", {Term::constant("b")}), {});
    Clause p2 = clause(atom("p", {Term::constant("c")}), {});

    auto defs = group_into_definitions({p1, q1, p2});
    REQUIRE(defs.size() == 2);
    CHECK(defs[0].head_symbol == PredicateSymbol{"p", 1});
    CHECK(defs[0].clauses == std::vector<Clause>{p1, p2});
    CHECK(defs[1].head_symbol == PredicateSymbol{"q", 1});

    // Regrouping an already-grouped clause stream is the identity.
    std::vector<Clause> flat;
    for (const Definition& d : defs)
        for (const Clause& c : d.clauses) flat.push_back(c);
    CHECK(group_into_definitions(flat) == defs);
}

TEST_CASE("root symbols exclude only symbols called from other definitions") {
    Program p = testutil::must_parse(
        "f(A) :- head(A,B).\n"
        "f(A) :- tail(A,B),f(B).\n"
        "g(A) :- f(A).\n"
        "h(A) :- empty(A).\n");
    // f's self-recursion alone would keep it a root, but g calls it.
    auto roots = root_symbols(p);
    REQUIRE(roots.size() == 2);
    CHECK(roots[0].name == "g");
    CHECK(roots[1].name == "h");

    auto all = root_symbols(testutil::load_program("appendix_input.pl"));
    CHECK(all.size() == 8);
}

TEST_CASE("undefined body symbols in first-occurrence order") {
    Program p = testutil::load_program("appendix_input.pl");
    auto undef = undefined_body_symbols(p);
    std::vector<std::string> names;
    for (const PredicateSymbol& s : undef) names.push_back(s.name);
    CHECK(names == std::vector<std::string>{"head", "zero", "tail", "empty", "increment", "odd",
                                            "negative", "ord", "even", "cube", "bin"});
    for (const PredicateSymbol& s : undef)
        CHECK(p.find_definition(s.name) == nullptr);
}

TEST_CASE("find_definition") {
    Program p = testutil::load_program("appendix_input.pl");
    REQUIRE(p.find_definition("mapcube") != nullptr);
    CHECK(p.find_definition("mapcube")->head_symbol.arity == 2);
    CHECK(p.find_definition("nosuch") == nullptr);
}
