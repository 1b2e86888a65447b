#include "horef/eval.hpp"

#include <algorithm>
#include <cstdlib>
#include <future>
#include <sstream>

#include <json.hpp>

namespace horef {

// ---------------------------------------------------------------------------
// Universe

int Universe::add_constant(const std::string& name) {
    auto [it, inserted] = ids_.try_emplace(name, static_cast<int>(names_.size()));
    if (inserted) names_.push_back(name);
    return it->second;
}

std::optional<int> Universe::find_constant(const std::string& name) const {
    auto it = ids_.find(name);
    if (it == ids_.end()) return std::nullopt;
    return it->second;
}

void Universe::add_fact(const std::string& relation, const std::vector<std::string>& tuple) {
    std::vector<int> t;
    t.reserve(tuple.size());
    for (const std::string& c : tuple) t.push_back(add_constant(c));
    relations_[{relation, static_cast<int>(tuple.size())}].insert(std::move(t));
}

void Universe::declare_relation(const std::string& relation, int arity) {
    relations_[{relation, arity}];
}

bool Universe::has_relation(const PredicateSymbol& s) const { return relations_.count(s) > 0; }

const std::set<std::vector<int>>* Universe::facts(const PredicateSymbol& s) const {
    auto it = relations_.find(s);
    return it == relations_.end() ? nullptr : &it->second;
}

// ---------------------------------------------------------------------------
// Universe generation

namespace {

std::string int_name(long long v) { return std::to_string(v); }

std::string list_name(const std::vector<long long>& xs) {
    std::string s = "[";
    for (std::size_t i = 0; i < xs.size(); ++i) {
        if (i) s += ",";
        s += int_name(xs[i]);
    }
    return s + "]";
}

}  // namespace

Universe build_universe(const UniverseSpec& spec) {
    if (spec.int_min > spec.int_max)
        throw EvalError(EvalErrorKind::BadUniverse, "empty integer range");
    if (spec.int_max - spec.int_min > 1000)
        throw EvalError(EvalErrorKind::BadUniverse, "integer range too large");
    if (spec.list_max_len < 0)
        throw EvalError(EvalErrorKind::BadUniverse, "negative list length bound");

    std::set<long long> ints;
    for (long long i = spec.int_min; i <= spec.int_max; ++i) ints.insert(i);
    std::vector<long long> elems = spec.list_elements;
    std::sort(elems.begin(), elems.end());
    elems.erase(std::unique(elems.begin(), elems.end()), elems.end());

    std::set<long long> domain = ints;
    domain.insert(elems.begin(), elems.end());

    Universe u;
    for (long long v : domain) u.add_constant(int_name(v));

    // Lists over the element set, with head/tail/empty structure facts.
    u.add_constant("[]");
    u.declare_relation("head", 2);
    u.declare_relation("tail", 2);
    u.add_fact("empty", {"[]"});
    std::vector<std::vector<long long>> layer{{}};
    for (int len = 1; len <= spec.list_max_len; ++len) {
        std::vector<std::vector<long long>> next;
        for (const auto& rest : layer)
            for (long long e : elems) {
                std::vector<long long> xs{e};
                xs.insert(xs.end(), rest.begin(), rest.end());
                u.add_constant(list_name(xs));
                u.add_fact("head", {list_name(xs), int_name(e)});
                u.add_fact("tail", {list_name(xs), list_name(rest)});
                next.push_back(std::move(xs));
            }
        layer = std::move(next);
    }

    if (spec.standard_builtins) {
        // The whole vocabulary must resolve even when a relation is empty
        // (e.g. `negative` over a non-negative integer range).
        for (const char* r : {"zero", "one", "even", "odd", "positive", "negative"})
            u.declare_relation(r, 1);
        for (const char* r : {"increment", "decrement", "geq", "eq", "ord", "bin", "cube"})
            u.declare_relation(r, 2);
        u.declare_relation("sum", 3);
        for (long long v : domain) {
            if (v == 0) u.add_fact("zero", {int_name(v)});
            if (v == 1) u.add_fact("one", {int_name(v)});
            u.add_fact(v % 2 == 0 ? "even" : "odd", {int_name(v)});
            if (v > 0) u.add_fact("positive", {int_name(v)});
            if (v < 0) u.add_fact("negative", {int_name(v)});
            if (domain.count(v + 1)) {
                u.add_fact("increment", {int_name(v), int_name(v + 1)});
                u.add_fact("decrement", {int_name(v + 1), int_name(v)});
            }
            if (domain.count(v * v * v)) u.add_fact("cube", {int_name(v), int_name(v * v * v)});
            u.add_fact("eq", {int_name(v), int_name(v)});
        }
        for (long long a : domain)
            for (long long b : domain) {
                if (a >= b) u.add_fact("geq", {int_name(a), int_name(b)});
                if (domain.count(a + b)) u.add_fact("sum", {int_name(a), int_name(b), int_name(a + b)});
            }
        // ord: cyclic successor over the list elements; bin: parity bit.
        for (std::size_t i = 0; i < elems.size(); ++i) {
            u.add_fact("ord", {int_name(elems[i]), int_name(elems[(i + 1) % elems.size()])});
            u.add_fact("bin", {int_name(elems[i]), int_name(((elems[i] % 2) + 2) % 2)});
        }
    }

    for (const std::string& c : spec.extra_constants) u.add_constant(c);
    for (const auto& [name, tuples] : spec.extra_relations) {
        std::size_t arity = tuples.empty() ? 0 : tuples.front().size();
        for (const auto& t : tuples) {
            if (t.size() != arity)
                throw EvalError(EvalErrorKind::BadUniverse,
                                "relation '" + name + "' mixes tuple arities");
            u.add_fact(name, t);
        }
    }
    return u;
}

Universe standard_universe() { return build_universe(UniverseSpec{}); }

UniverseSpec parse_universe_spec(const std::string& json_text) {
    using nlohmann::json;
    json j;
    try {
        j = json::parse(json_text);
    } catch (const json::parse_error& e) {
        throw EvalError(EvalErrorKind::BadUniverse, std::string("universe file: ") + e.what());
    }
    if (!j.is_object())
        throw EvalError(EvalErrorKind::BadUniverse, "universe file: expected a JSON object");

    auto constant_of = [](const json& v) -> std::string {
        if (v.is_string()) return v.get<std::string>();
        if (v.is_number_integer()) return std::to_string(v.get<long long>());
        throw EvalError(EvalErrorKind::BadUniverse,
                        "universe file: constants must be strings or integers");
    };

    UniverseSpec s;
    try {
        for (const auto& [key, value] : j.items()) {
            if (key == "ints") {
                s.int_min = value.value("min", s.int_min);
                s.int_max = value.value("max", s.int_max);
            } else if (key == "lists") {
                if (value.contains("elements"))
                    s.list_elements = value["elements"].get<std::vector<long long>>();
                s.list_max_len = value.value("max_len", s.list_max_len);
            } else if (key == "standard_builtins") {
                s.standard_builtins = value.get<bool>();
            } else if (key == "constants") {
                s.extra_constants.clear();
                for (const auto& v : value) s.extra_constants.push_back(constant_of(v));
            } else if (key == "relations") {
                for (const auto& [name, tuples] : value.items()) {
                    auto& rel = s.extra_relations[name];
                    for (const auto& t : tuples) {
                        std::vector<std::string> tuple;
                        for (const auto& v : t) tuple.push_back(constant_of(v));
                        rel.push_back(std::move(tuple));
                    }
                }
            } else {
                throw EvalError(EvalErrorKind::BadUniverse,
                                "universe file: unknown key '" + key + "'");
            }
        }
    } catch (const json::exception& e) {
        throw EvalError(EvalErrorKind::BadUniverse, std::string("universe file: ") + e.what());
    }
    return s;
}

// ---------------------------------------------------------------------------
// Specialisation

namespace {

int ho_arity(const Definition& d) {
    int n = 0;
    if (!d.clauses.empty())
        for (const Term& t : d.clauses.front().head.args)
            if (t.kind == TermKind::HoVar) ++n;
    return n;
}

}  // namespace

Program specialize(const Program& q, const std::vector<Abstraction>& pool) {
    std::set<std::string> ho_names;
    for (const Abstraction& a : pool) ho_names.insert(a.name());

    std::map<std::string, const Definition*> ho_defs;
    std::vector<Definition> fo_defs;
    for (const Definition& d : q.definitions) {
        if (ho_arity(d) > 0 || (ho_names.count(d.head_symbol.name) && !is_first_order(d)))
            ho_defs[d.head_symbol.name] = &d;
        else
            fo_defs.push_back(d);
    }
    if (ho_defs.empty()) return q;

    std::set<std::string> taken;
    for (const Definition& d : q.definitions) {
        taken.insert(d.head_symbol.name);
        for (const Clause& c : d.clauses)
            for (const Atom& a : c.body)
                if (!a.callee_is_var) taken.insert(a.callee);
    }

    using Key = std::pair<std::string, std::vector<std::string>>;
    std::map<Key, std::string> mangled;
    std::vector<Key> queue;

    auto mangle = [&taken](const Key& k) {
        std::string base = k.first;
        for (const std::string& b : k.second) base += "__" + b;
        std::string name = base;
        for (int c = 2; taken.count(name); ++c) name = base + "_" + std::to_string(c);
        taken.insert(name);
        return name;
    };

    // Rewrites one body atom of an already-instantiated clause: calls into a
    // higher-order definition are redirected to the mangled first-order copy
    // and the binding arguments dropped; stray predicate references decay to
    // constants; surviving higher-order variables are an error.
    auto rewrite_atom = [&](Atom& a) {
        if (a.callee_is_var)
            throw EvalError(EvalErrorKind::UnboundHoVariable,
                            "higher-order variable '" + a.callee + "' is never bound");
        if (auto it = ho_defs.find(a.callee); it != ho_defs.end()) {
            const int k = ho_arity(*it->second);
            if (static_cast<int>(a.args.size()) < k)
                throw EvalError(EvalErrorKind::UnboundHoVariable,
                                "call to '" + a.callee + "' lacks its bindings");
            Key key{a.callee, {}};
            for (std::size_t i = a.args.size() - k; i < a.args.size(); ++i) {
                const Term& t = a.args[i];
                if (t.kind != TermKind::PredRef)
                    throw EvalError(EvalErrorKind::UnboundHoVariable,
                                    "call to '" + a.callee +
                                        "' does not bind every higher-order variable to a "
                                        "predicate symbol");
                key.second.push_back(t.name);
            }
            auto [mit, inserted] = mangled.try_emplace(key);
            if (inserted) {
                mit->second = mangle(key);
                queue.push_back(key);
            }
            a.callee = mit->second;
            a.args.resize(a.args.size() - k);
        }
        for (Term& t : a.args) {
            if (t.kind == TermKind::HoVar)
                throw EvalError(EvalErrorKind::UnboundHoVariable,
                                "higher-order variable '" + t.name + "' is never bound");
            if (t.kind == TermKind::PredRef) t = Term::constant(t.name);
        }
    };

    for (Definition& d : fo_defs)
        for (Clause& c : d.clauses)
            for (Atom& a : c.body) rewrite_atom(a);

    std::vector<Definition> copies;
    for (std::size_t qi = 0; qi < queue.size(); ++qi) {
        const Key key = queue[qi];
        const Definition& src = *ho_defs.at(key.first);
        const int k = static_cast<int>(key.second.size());

        Definition copy;
        copy.head_symbol = {mangled.at(key), src.head_symbol.arity - k};
        for (const Clause& c : src.clauses) {
            std::map<std::string, std::string> bind;
            const std::size_t keep = c.head.args.size() - k;
            bool dead = false;
            for (int i = 0; i < k; ++i) {
                const Term& t = c.head.args[keep + i];
                if (t.kind != TermKind::HoVar)
                    throw EvalError(EvalErrorKind::UnboundHoVariable,
                                    "definition '" + key.first +
                                        "' does not carry its higher-order variables in the head");
                auto [bit, fresh] = bind.try_emplace(t.name, key.second[i]);
                if (!fresh && bit->second != key.second[i]) dead = true;  // repeated variable
            }
            if (dead) continue;

            Clause nc;
            nc.head.callee = copy.head_symbol.name;
            nc.head.args.assign(c.head.args.begin(), c.head.args.begin() + keep);
            for (const Atom& a : c.body) {
                Atom na = a;
                if (na.callee_is_var)
                    if (auto it = bind.find(na.callee); it != bind.end()) {
                        na.callee = it->second;
                        na.callee_is_var = false;
                    }
                for (Term& t : na.args)
                    if (t.kind == TermKind::HoVar)
                        if (auto it = bind.find(t.name); it != bind.end())
                            t = Term::pred_ref(it->second);
                rewrite_atom(na);
                nc.body.push_back(std::move(na));
            }
            copy.clauses.push_back(std::move(nc));
        }
        copies.push_back(std::move(copy));
    }

    Program out;
    out.targets = q.targets;
    out.definitions = std::move(fo_defs);
    for (Definition& d : copies) out.definitions.push_back(std::move(d));
    return out;
}

// ---------------------------------------------------------------------------
// Semi-naive least-model computation

namespace {

struct Pattern {
    bool is_var = false;
    int value = 0;  // constant id, or variable slot
};

struct CompiledAtom {
    PredicateSymbol sym;
    std::vector<Pattern> pattern;
    bool defined = false;
};

struct CompiledRule {
    PredicateSymbol head_sym;
    std::vector<Pattern> head;
    std::vector<CompiledAtom> body;
    int slots = 0;
};

using Relation = std::set<std::vector<int>>;

class Evaluator {
  public:
    Evaluator(const Program& p, const Universe& u) : u_(u) {
        names_ = u.constants();
        for (int i = 0; i < static_cast<int>(names_.size()); ++i) ids_[names_[i]] = i;
        for (const Definition& d : p.definitions) defined_.insert(d.head_symbol);
        for (const Definition& d : p.definitions)
            for (const Clause& c : d.clauses) compile(d, c);
    }

    void run(EvalStats* stats) {
        // Defined symbols that also have background facts start from them.
        for (const PredicateSymbol& s : defined_)
            if (const Relation* r = u_.facts(s)) derived_[s] = *r;

        std::size_t cumulative = count_facts();
        bool first = true;
        while (true) {
            fresh_.clear();
            full_index_.clear();
            delta_index_.clear();
            if (first) {
                for (const CompiledRule& r : rules_) evaluate(r, -1);
                first = false;
            } else {
                for (const CompiledRule& r : rules_)
                    for (int i = 0; i < static_cast<int>(r.body.size()); ++i) {
                        if (!r.body[i].defined) continue;
                        auto it = delta_.find(r.body[i].sym);
                        if (it == delta_.end() || it->second.empty()) continue;
                        evaluate(r, i);
                    }
            }
            if (stats) {
                ++stats->iterations;
                cumulative += count_fresh();
                stats->facts_per_iteration.push_back(cumulative);
            }
            if (fresh_.empty()) break;
            delta_ = std::move(fresh_);
            fresh_ = {};
            for (auto& [sym, rel] : delta_) derived_[sym].insert(rel.begin(), rel.end());
        }
        if (stats) stats->total_facts = count_facts();
    }

    RestrictedModel restrict(const std::vector<PredicateSymbol>& targets) const {
        RestrictedModel m;
        for (const PredicateSymbol& t : targets) {
            auto emit = [&](const Relation& rel) {
                for (const std::vector<int>& tuple : rel) {
                    GroundAtom g;
                    g.predicate = t.name;
                    for (int id : tuple) g.args.push_back(names_[id]);
                    m.facts.insert(std::move(g));
                }
            };
            if (auto it = derived_.find(t); it != derived_.end()) emit(it->second);
            if (const Relation* r = u_.facts(t)) emit(*r);
        }
        return m;
    }

  private:
    int intern(const std::string& name) {
        auto [it, inserted] = ids_.try_emplace(name, static_cast<int>(names_.size()));
        if (inserted) names_.push_back(name);
        return it->second;
    }

    void compile(const Definition& d, const Clause& c) {
        CompiledRule r;
        std::map<std::string, int> slot_of;
        auto pattern_of = [&](const Atom& a) {
            std::vector<Pattern> pat;
            for (const Term& t : a.args) {
                switch (t.kind) {
                    case TermKind::Constant:
                    case TermKind::PredRef:
                        pat.push_back({false, intern(t.name)});
                        break;
                    case TermKind::Var: {
                        auto [it, fresh] = slot_of.try_emplace(t.name, r.slots);
                        if (fresh) ++r.slots;
                        pat.push_back({true, it->second});
                        break;
                    }
                    case TermKind::HoVar:
                        throw EvalError(EvalErrorKind::UnboundHoVariable,
                                        "cannot evaluate higher-order variable '" + t.name + "'");
                }
            }
            return pat;
        };

        r.head_sym = d.head_symbol;
        r.head = pattern_of(c.head);
        std::vector<char> bound(64, 0);
        for (const Atom& a : c.body) {
            if (a.callee_is_var)
                throw EvalError(EvalErrorKind::UnboundHoVariable,
                                "cannot evaluate higher-order call through '" + a.callee + "'");
            CompiledAtom ca;
            ca.sym = a.callee_symbol();
            ca.pattern = pattern_of(a);
            ca.defined = defined_.count(ca.sym) > 0;
            if (!ca.defined && !u_.has_relation(ca.sym))
                throw EvalError(EvalErrorKind::UnresolvedSymbol,
                                "predicate '" + ca.sym.name + "/" + std::to_string(ca.sym.arity) +
                                    "' is neither defined nor a background relation");
            for (const Pattern& p : ca.pattern)
                if (p.is_var) {
                    if (p.value >= static_cast<int>(bound.size())) bound.resize(p.value + 1, 0);
                    bound[p.value] = 1;
                }
            r.body.push_back(std::move(ca));
        }
        for (const Pattern& p : r.head)
            if (p.is_var && (p.value >= static_cast<int>(bound.size()) || !bound[p.value]))
                throw EvalError(EvalErrorKind::UnsafeClause,
                                "head variable of '" + d.head_symbol.name +
                                    "' is not bound by the clause body");
        rules_.push_back(std::move(r));
    }

    std::size_t count_facts() const {
        std::size_t n = 0;
        for (const auto& [sym, rel] : derived_) n += rel.size();
        return n;
    }
    std::size_t count_fresh() const {
        std::size_t n = 0;
        for (const auto& [sym, rel] : fresh_) n += rel.size();
        return n;
    }

    enum class Source { Builtin, Full, Delta };

    const Relation* relation_for(const CompiledAtom& a, Source src) const {
        if (src == Source::Delta) {
            auto it = delta_.find(a.sym);
            return it == delta_.end() ? nullptr : &it->second;
        }
        if (a.defined) {
            auto it = derived_.find(a.sym);
            return it == derived_.end() ? nullptr : &it->second;
        }
        return u_.facts(a.sym);
    }

    // Tuples of `rel` grouped by their values at the masked positions.
    using Index = std::map<std::vector<int>, std::vector<const std::vector<int>*>>;

    const Index& index_for(const CompiledAtom& a, Source src, unsigned mask, const Relation& rel) {
        auto& cache = src == Source::Builtin ? builtin_index_
                      : src == Source::Full  ? full_index_
                                             : delta_index_;
        auto key = std::make_pair(a.sym, mask);
        auto it = cache.find(key);
        if (it != cache.end()) return it->second;
        Index idx;
        std::vector<int> k;
        for (const std::vector<int>& tuple : rel) {
            k.clear();
            for (std::size_t i = 0; i < tuple.size(); ++i)
                if (mask & (1u << i)) k.push_back(tuple[i]);
            idx[k].push_back(&tuple);
        }
        return cache.emplace(key, std::move(idx)).first->second;
    }

    void evaluate(const CompiledRule& r, int delta_pos) {
        env_.assign(r.slots, -1);
        join(r, 0, delta_pos);
    }

    void join(const CompiledRule& r, std::size_t i, int delta_pos) {
        if (i == r.body.size()) {
            std::vector<int> tuple;
            tuple.reserve(r.head.size());
            for (const Pattern& p : r.head) tuple.push_back(p.is_var ? env_[p.value] : p.value);
            auto it = derived_.find(r.head_sym);
            if (it != derived_.end() && it->second.count(tuple)) return;
            fresh_[r.head_sym].insert(std::move(tuple));
            return;
        }
        const CompiledAtom& a = r.body[i];
        const Source src = static_cast<int>(i) == delta_pos
                               ? Source::Delta
                               : (a.defined ? Source::Full : Source::Builtin);
        const Relation* rel = relation_for(a, src);
        if (!rel || rel->empty()) return;

        unsigned mask = 0;
        std::vector<int> key;
        for (std::size_t pos = 0; pos < a.pattern.size(); ++pos) {
            const Pattern& p = a.pattern[pos];
            const int v = p.is_var ? env_[p.value] : p.value;
            if (v != -1 && pos < 32) {
                mask |= 1u << pos;
                key.push_back(v);
            }
        }

        auto try_tuple = [&](const std::vector<int>& tuple) {
            std::vector<int> trail;
            for (std::size_t pos = 0; pos < a.pattern.size(); ++pos) {
                const Pattern& p = a.pattern[pos];
                if (!p.is_var) {
                    if (p.value != tuple[pos]) goto mismatch;
                } else if (env_[p.value] == -1) {
                    env_[p.value] = tuple[pos];
                    trail.push_back(p.value);
                } else if (env_[p.value] != tuple[pos]) {
                    goto mismatch;
                }
            }
            join(r, i + 1, delta_pos);
        mismatch:
            for (int slot : trail) env_[slot] = -1;
        };

        if (mask == 0) {
            for (const std::vector<int>& tuple : *rel) try_tuple(tuple);
        } else {
            const Index& idx = index_for(a, src, mask, *rel);
            auto bucket = idx.find(key);
            if (bucket == idx.end()) return;
            for (const std::vector<int>* tuple : bucket->second) try_tuple(*tuple);
        }
    }

    const Universe& u_;
    std::vector<std::string> names_;
    std::map<std::string, int> ids_;
    std::set<PredicateSymbol> defined_;
    std::vector<CompiledRule> rules_;

    std::map<PredicateSymbol, Relation> derived_, delta_, fresh_;
    std::map<std::pair<PredicateSymbol, unsigned>, Index> builtin_index_, full_index_, delta_index_;
    std::vector<int> env_;
};

}  // namespace

RestrictedModel restricted_model(const Program& p, const Universe& u,
                                 const std::vector<PredicateSymbol>& targets, EvalStats* stats) {
    Evaluator ev(p, u);
    ev.run(stats);
    return ev.restrict(targets);
}

// ---------------------------------------------------------------------------
// Equivalence

std::string GroundAtom::to_string() const {
    if (args.empty()) return predicate;
    std::string s = predicate + "(";
    for (std::size_t i = 0; i < args.size(); ++i) {
        if (i) s += ",";
        s += args[i];
    }
    return s + ")";
}

EquivalenceResult check_equivalence(const Program& p, const Program& q,
                                    const std::vector<Abstraction>& pool, const Universe& u,
                                    const std::vector<PredicateSymbol>& targets) {
    const Program q_fo = specialize(q, pool);

    int threads = 1;
    if (const char* env = std::getenv("HOREF_THREADS")) threads = std::max(1, std::atoi(env));

    RestrictedModel mp, mq;
    if (threads >= 2) {
        auto fut = std::async(std::launch::async,
                              [&] { return restricted_model(q_fo, u, targets, nullptr); });
        mp = restricted_model(p, u, targets, nullptr);
        mq = fut.get();
    } else {
        mp = restricted_model(p, u, targets, nullptr);
        mq = restricted_model(q_fo, u, targets, nullptr);
    }

    if (mp.facts == mq.facts) return {true, std::nullopt};

    std::vector<GroundAtom> only_p, only_q;
    std::set_difference(mp.facts.begin(), mp.facts.end(), mq.facts.begin(), mq.facts.end(),
                        std::back_inserter(only_p));
    std::set_difference(mq.facts.begin(), mq.facts.end(), mp.facts.begin(), mp.facts.end(),
                        std::back_inserter(only_q));

    Counterexample ce;
    if (!only_p.empty() && (only_q.empty() || only_p.front() < only_q.front()))
        ce = {only_p.front(), true};
    else
        ce = {only_q.front(), false};
    return {false, ce};
}

}  // namespace horef
