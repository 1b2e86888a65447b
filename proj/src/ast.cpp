#include "horef/ast.hpp"

#include <algorithm>
#include <set>
#include <unordered_map>

namespace horef {

bool Atom::is_higher_order() const {
    if (callee_is_var) return true;
    return std::any_of(args.begin(), args.end(), [](const Term& t) {
        return t.kind == TermKind::HoVar || t.kind == TermKind::PredRef;
    });
}

bool Clause::is_higher_order() const {
    if (head.is_higher_order()) return true;
    return std::any_of(body.begin(), body.end(), [](const Atom& a) { return a.is_higher_order(); });
}

const Definition* Program::find_definition(const std::string& name) const {
    for (const Definition& d : definitions)
        if (d.head_symbol.name == name) return &d;
    return nullptr;
}

int size(const Clause& c) { return c.literal_count(); }

int size(const Definition& d) {
    int n = 0;
    for (const Clause& c : d.clauses) n += size(c);
    return n;
}

int size(const Program& p) {
    int n = 0;
    for (const Definition& d : p.definitions) n += size(d);
    return n;
}

bool is_recursive(const Definition& d) {
    for (const Clause& c : d.clauses)
        for (const Atom& a : c.body)
            if (!a.callee_is_var && a.callee == d.head_symbol.name) return true;
    return false;
}

bool is_first_order(const Clause& c) { return !c.is_higher_order(); }

bool is_first_order(const Definition& d) {
    return std::all_of(d.clauses.begin(), d.clauses.end(),
                       [](const Clause& c) { return is_first_order(c); });
}

bool is_first_order(const Program& p) {
    return std::all_of(p.definitions.begin(), p.definitions.end(),
                       [](const Definition& d) { return is_first_order(d); });
}

std::vector<Definition> group_into_definitions(const std::vector<Clause>& clauses) {
    std::vector<Definition> defs;
    std::unordered_map<std::string, std::size_t> index;
    for (const Clause& c : clauses) {
        auto it = index.find(c.head.callee);
        if (it == index.end()) {
            index.emplace(c.head.callee, defs.size());
            defs.push_back({c.head.callee_symbol(), {c}});
        } else {
            defs[it->second].clauses.push_back(c);
        }
    }
    return defs;
}

std::vector<PredicateSymbol> root_symbols(const Program& p) {
    // A symbol loses root status only when a *different* definition calls it;
    // self-recursion does not count.
    std::set<std::string> called_elsewhere;
    for (const Definition& d : p.definitions)
        for (const Clause& c : d.clauses)
            for (const Atom& a : c.body)
                if (!a.callee_is_var && a.callee != d.head_symbol.name)
                    called_elsewhere.insert(a.callee);

    std::vector<PredicateSymbol> roots;
    for (const Definition& d : p.definitions)
        if (!called_elsewhere.count(d.head_symbol.name)) roots.push_back(d.head_symbol);
    return roots;
}

std::vector<PredicateSymbol> undefined_body_symbols(const Program& p) {
    std::set<std::string> heads;
    for (const Definition& d : p.definitions) heads.insert(d.head_symbol.name);

    std::vector<PredicateSymbol> out;
    std::set<PredicateSymbol> seen;
    for (const Definition& d : p.definitions)
        for (const Clause& c : d.clauses)
            for (const Atom& a : c.body) {
                if (a.callee_is_var || heads.count(a.callee)) continue;
                PredicateSymbol s = a.callee_symbol();
                if (seen.insert(s).second) out.push_back(s);
            }
    return out;
}

}  // namespace horef
