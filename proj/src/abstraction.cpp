#include "horef/abstraction.hpp"

#include <algorithm>
#include <map>
#include <set>
#include <sstream>
#include <stdexcept>
#include <unordered_map>

#include "horef/print.hpp"

namespace horef {

const InstantiationTuple* Abstraction::tuple_for(int def_index) const {
    for (const auto& [idx, tuple] : origins)
        if (idx == def_index) return &tuple;
    return nullptr;
}

namespace {

// Distinct non-recursive body predicate symbols in first-occurrence order.
std::vector<PredicateSymbol> abstractable_symbols(const Definition& d) {
    std::vector<PredicateSymbol> out;
    std::set<std::string> seen;
    for (const Clause& c : d.clauses)
        for (const Atom& a : c.body) {
            if (a.callee_is_var || a.callee == d.head_symbol.name) continue;
            if (seen.insert(a.callee).second) out.push_back(a.callee_symbol());
        }
    return out;
}

std::vector<std::string> fresh_ho_var_names(const Definition& d, int count) {
    std::set<std::string> used;
    auto note = [&used](const Atom& a) {
        if (a.callee_is_var) used.insert(a.callee);
        for (const Term& t : a.args)
            if (t.is_variable()) used.insert(t.name);
    };
    for (const Clause& c : d.clauses) {
        note(c.head);
        for (const Atom& a : c.body) note(a);
    }

    std::vector<std::string> names;
    for (char c = 'P'; c <= 'Z' && static_cast<int>(names.size()) < count; ++c) {
        std::string n(1, c);
        if (!used.count(n)) names.push_back(n);
    }
    for (int i = 1; static_cast<int>(names.size()) < count; ++i) {
        std::string n = "HV" + std::to_string(i);
        if (!used.count(n)) names.push_back(n);
    }
    return names;
}

CandidateAbstraction abstract_subset(const Definition& d,
                                     const std::vector<PredicateSymbol>& symbols,
                                     const std::vector<int>& subset) {
    const int k = static_cast<int>(subset.size());
    std::vector<std::string> ho_names = fresh_ho_var_names(d, k);

    std::map<std::string, std::string> symbol_to_var;
    CandidateAbstraction cand;
    cand.ho_var_count = k;
    for (int j = 0; j < k; ++j) {
        symbol_to_var[symbols[subset[j]].name] = ho_names[j];
        cand.tuple.bindings.push_back(symbols[subset[j]]);
    }

    std::vector<Term> ho_args;
    for (const std::string& n : ho_names) ho_args.push_back(Term::ho_var(n));

    cand.def.head_symbol = {kInventedPlaceholder,
                            d.head_symbol.arity + k};
    for (const Clause& c : d.clauses) {
        Clause nc;
        nc.head.callee = kInventedPlaceholder;
        nc.head.args = c.head.args;
        nc.head.args.insert(nc.head.args.end(), ho_args.begin(), ho_args.end());
        for (const Atom& a : c.body) {
            Atom na = a;
            if (!a.callee_is_var && a.callee == d.head_symbol.name) {
                // Recursive call: rename and thread the higher-order tuple.
                na.callee = kInventedPlaceholder;
                na.args.insert(na.args.end(), ho_args.begin(), ho_args.end());
            } else if (auto it = symbol_to_var.find(a.callee);
                       !a.callee_is_var && it != symbol_to_var.end()) {
                na.callee = it->second;
                na.callee_is_var = true;
            }
            nc.body.push_back(std::move(na));
        }
        cand.def.clauses.push_back(std::move(nc));
    }
    return cand;
}

}  // namespace

std::vector<CandidateAbstraction> enumerate_abstractions(const Definition& d, int max_ho_vars) {
    if (max_ho_vars < 1) throw std::invalid_argument("max_ho_vars must be >= 1");
    if (!is_first_order(d))
        throw std::invalid_argument("cannot abstract a higher-order definition: " +
                                    d.head_symbol.name);

    std::vector<PredicateSymbol> symbols = abstractable_symbols(d);
    const int m = static_cast<int>(symbols.size());

    std::vector<CandidateAbstraction> out;
    for (int k = 1; k <= std::min(max_ho_vars, m); ++k) {
        // k-subsets in lexicographic index order.
        std::vector<int> subset(k);
        for (int i = 0; i < k; ++i) subset[i] = i;
        while (true) {
            out.push_back(abstract_subset(d, symbols, subset));
            int i = k - 1;
            while (i >= 0 && subset[i] == m - k + i) --i;
            if (i < 0) break;
            ++subset[i];
            for (int j = i + 1; j < k; ++j) subset[j] = subset[j - 1] + 1;
        }
    }
    return out;
}

Definition canonicalize_definition(const Definition& d) {
    Definition out;
    out.head_symbol = {kInventedPlaceholder, d.head_symbol.arity};

    // Every clause head carries the full higher-order tuple, so first-
    // occurrence naming keeps tuple order aligned across clauses.
    auto ho_name = [](int i) -> std::string {
        if (i < 3) return std::string(1, static_cast<char>('P' + i));
        return "W" + std::to_string(i);
    };
    auto fo_name = [](int i) -> std::string {
        if (i < 15) return std::string(1, static_cast<char>('A' + i));
        return "V" + std::to_string(i);
    };

    for (const Clause& c : d.clauses) {
        std::map<std::string, std::string> rename;
        int next_ho = 0;
        int next_fo = 0;
        auto visit = [&](const Term& t) {
            if (!t.is_variable() || rename.count(t.name)) return;
            if (t.kind == TermKind::HoVar)
                rename[t.name] = ho_name(next_ho++);
            else
                rename[t.name] = fo_name(next_fo++);
        };
        for (const Term& t : c.head.args) visit(t);
        for (const Atom& a : c.body) {
            if (a.callee_is_var) visit(Term::ho_var(a.callee));
            for (const Term& t : a.args) visit(t);
        }

        auto apply = [&](const Atom& a) {
            Atom na;
            if (a.callee_is_var) {
                na.callee_is_var = true;
                na.callee = rename.at(a.callee);
            } else {
                na.callee = a.callee == d.head_symbol.name ? kInventedPlaceholder : a.callee;
            }
            for (const Term& t : a.args) {
                Term nt = t;
                if (t.is_variable()) nt.name = rename.at(t.name);
                na.args.push_back(std::move(nt));
            }
            return na;
        };

        Clause nc;
        nc.head = apply(c.head);
        for (const Atom& a : c.body) nc.body.push_back(apply(a));
        out.clauses.push_back(std::move(nc));
    }
    return out;
}

std::string canonical_key(const Definition& d) {
    return print_definition(canonicalize_definition(d));
}

Abstraction canonicalize(const CandidateAbstraction& raw, int origin_def_index) {
    Abstraction a;
    a.definition = canonicalize_definition(raw.def);
    a.ho_var_count = raw.ho_var_count;
    a.canonical_key = print_definition(a.definition);
    a.origins.push_back({origin_def_index, raw.tuple});
    return a;
}

void rename_head_symbol(Definition& d, const std::string& new_name) {
    const std::string old = d.head_symbol.name;
    d.head_symbol.name = new_name;
    for (Clause& c : d.clauses) {
        if (c.head.callee == old) c.head.callee = new_name;
        for (Atom& a : c.body)
            if (!a.callee_is_var && a.callee == old) a.callee = new_name;
    }
}

CandidatePool build_candidate_pool(const Program& p, int max_ho_vars, bool keep_singletons) {
    if (!is_first_order(p))
        throw std::invalid_argument("candidate pool requires a first-order program");

    CandidatePool pool;
    std::vector<Abstraction> merged;
    std::unordered_map<std::string, std::size_t> by_key;

    for (int di = 0; di < static_cast<int>(p.definitions.size()); ++di) {
        for (CandidateAbstraction& raw : enumerate_abstractions(p.definitions[di], max_ho_vars)) {
            ++pool.enumerated;
            Abstraction a = canonicalize(raw, di);
            auto [it, inserted] = by_key.try_emplace(a.canonical_key, merged.size());
            if (inserted)
                merged.push_back(std::move(a));
            else
                merged[it->second].origins.emplace_back(di, std::move(raw.tuple));
        }
    }
    pool.distinct_before_filter = static_cast<int>(merged.size());

    // Names must not collide with symbols already in the program.
    std::set<std::string> taken;
    for (const Definition& d : p.definitions) {
        taken.insert(d.head_symbol.name);
        for (const Clause& c : d.clauses)
            for (const Atom& a : c.body)
                if (!a.callee_is_var) taken.insert(a.callee);
    }

    int counter = 0;
    for (Abstraction& a : merged) {
        if (!keep_singletons && a.origins.size() < 2) continue;
        std::string name;
        do {
            name = "ho_" + std::to_string(counter++);
        } while (taken.count(name));
        rename_head_symbol(a.definition, name);
        pool.abstractions.push_back(std::move(a));
    }
    return pool;
}

std::vector<Abstraction> parse_abstraction_library(std::string_view text,
                                                   std::vector<ParseDiagnostic>& diagnostics,
                                                   const std::string& filename) {
    ParseOptions opts;
    opts.allow_higher_order = true;
    opts.filename = filename;
    ParseResult res = parse_program(text, opts);
    diagnostics.insert(diagnostics.end(), res.diagnostics.begin(), res.diagnostics.end());
    if (!res.ok()) return {};

    std::vector<Abstraction> lib;
    for (const Definition& d : res.program->definitions) {
        int ho_count = -1;
        bool bad = false;
        for (const Clause& c : d.clauses) {
            int n = 0;
            for (const Term& t : c.head.args)
                if (t.kind == TermKind::HoVar) ++n;
            if (n == 0) {
                diagnostics.push_back({{filename, 1, 1},
                                       Severity::Error,
                                       "library clause head for '" + d.head_symbol.name +
                                           "' has no higher-order variable"});
                bad = true;
                break;
            }
            if (ho_count == -1) ho_count = n;
            if (n != ho_count) {
                diagnostics.push_back({{filename, 1, 1},
                                       Severity::Error,
                                       "library definition '" + d.head_symbol.name +
                                           "' uses an inconsistent number of higher-order variables"});
                bad = true;
                break;
            }
        }
        if (bad) continue;

        Abstraction a;
        a.canonical_key = canonical_key(d);
        a.definition = canonicalize_definition(d);
        rename_head_symbol(a.definition, d.head_symbol.name);
        a.ho_var_count = ho_count;
        lib.push_back(std::move(a));
    }
    return lib;
}

std::string export_abstraction_library(const std::vector<Abstraction>& library) {
    std::ostringstream os;
    for (const Abstraction& a : library) os << print_definition(a.definition);
    return os.str();
}

}  // namespace horef
