#include "horef/cop.hpp"

#include <algorithm>
#include <chrono>
#include <functional>
#include <map>
#include <numeric>
#include <stdexcept>

namespace horef {

int CopModel::num_r_vars() const {
    int n = 0;
    for (const auto& opts : options) n += static_cast<int>(opts.size());
    return n;
}

CopModel build_cop(const Program& p, const CandidatePool& pool, const Weights& w) {
    if (w.unabstracted < 0 || w.abstraction < 0 || w.refactored < 0 || w.ho_var < 0)
        throw std::invalid_argument("objective weights must be non-negative");

    CopModel m;
    m.weights = w;
    for (const Definition& d : p.definitions) m.def_sizes.push_back(size(d));
    m.options.resize(p.definitions.size());

    for (int ai = 0; ai < static_cast<int>(pool.abstractions.size()); ++ai) {
        const Abstraction& a = pool.abstractions[ai];
        m.abstraction_sizes.push_back(size(a.definition));
        m.ho_var_counts.push_back(a.ho_var_count);
        m.canonical_keys.push_back(a.canonical_key);
        std::vector<int> ds;
        for (const auto& [di, tuple] : a.origins) {
            if (di < 0 || di >= static_cast<int>(p.definitions.size()))
                throw std::invalid_argument("abstraction origin outside the program");
            ds.push_back(di);
            m.options[di].push_back(ai);
        }
        m.origins.push_back(std::move(ds));
    }
    return m;
}

Assignment evaluate_assignment(const CopModel& model, const std::vector<int>& choice) {
    if (static_cast<int>(choice.size()) != model.num_definitions())
        throw std::invalid_argument("choice vector size does not match the model");

    Assignment a;
    a.choice = choice;
    a.selected.assign(model.num_abstractions(), false);
    for (int di = 0; di < model.num_definitions(); ++di) {
        const int c = choice[di];
        if (c == -1) {
            a.breakdown.unabstracted_size += model.def_sizes[di];
            continue;
        }
        const auto& opts = model.options[di];
        if (std::find(opts.begin(), opts.end(), c) == opts.end())
            throw std::invalid_argument("definition " + std::to_string(di) +
                                        " cannot be refactored with abstraction " +
                                        std::to_string(c));
        a.selected[c] = true;
        a.breakdown.refactored_size += 2;
    }
    for (int ai = 0; ai < model.num_abstractions(); ++ai)
        if (a.selected[ai]) {
            a.breakdown.abstraction_size += model.abstraction_sizes[ai];
            a.breakdown.penalty += model.ho_var_counts[ai];
        }
    a.objective = a.breakdown.weighted_total(model.weights);
    return a;
}

namespace {

struct Dsu {
    std::vector<int> parent;
    explicit Dsu(int n) : parent(n) { std::iota(parent.begin(), parent.end(), 0); }
    int find(int x) {
        while (parent[x] != x) x = parent[x] = parent[parent[x]];
        return x;
    }
    // Root is the smallest member, so component order is deterministic.
    void unite(int a, int b) {
        a = find(a);
        b = find(b);
        if (a != b) parent[std::max(a, b)] = std::min(a, b);
    }
};

using Clock = std::chrono::steady_clock;

// Branch and bound over the selection variables of one connected component.
// The per-definition choice is separable once the selection is fixed, so only
// the selection is branched on; leaves where a selected abstraction ends up
// unused are skipped, which is safe because selecting it can never beat the
// same leaf without it (opening costs are non-negative and the tie-break
// prefers fewer selections).
struct ComponentSearch {
    const CopModel& m;
    const std::vector<int>& abst;  // component abstractions, ascending
    const std::vector<int>& defs;  // component definitions, ascending
    const std::optional<Clock::time_point>& deadline;
    std::function<void(long long)> on_strict_improvement;

    long long w1, refactor_cost;
    std::vector<long long> open_cost;     // by global abstraction index
    std::vector<signed char>& astate;     // scratch: 1 in, -1 out, 0 undecided
    std::vector<int>& avail;              // scratch: |A(d)| minus excluded
    std::vector<long long>& used_stamp;   // scratch: leaf id when last used
    long long leaf_id = 0;

    long long open_sum = 0, def_lb_sum = 0;
    long long nodes = 0;
    bool aborted = false;

    long long best_obj = 0;
    int best_count = 0;
    std::vector<std::string> best_keys;
    std::vector<int> best_choice;  // parallel to defs; global abstraction index or -1

    ComponentSearch(const CopModel& model, const std::vector<int>& as, const std::vector<int>& ds,
                    const std::optional<Clock::time_point>& dl, std::vector<signed char>& ast,
                    std::vector<int>& av, std::vector<long long>& us)
        : m(model), abst(as), defs(ds), deadline(dl), astate(ast), avail(av), used_stamp(us) {
        w1 = m.weights.unabstracted;
        refactor_cost = 2LL * m.weights.refactored;
        open_cost.assign(m.num_abstractions(), 0);
        for (int a : abst)
            open_cost[a] = static_cast<long long>(m.weights.abstraction) * m.abstraction_sizes[a] +
                           static_cast<long long>(m.weights.ho_var) * m.ho_var_counts[a];
        for (int d : defs) {
            avail[d] = static_cast<int>(m.options[d].size());
            def_lb_sum += def_floor(d);
        }
        // Initial incumbent: keep every definition.
        best_choice.assign(defs.size(), -1);
        for (int d : defs) best_obj += w1 * m.def_sizes[d];
    }

    long long def_floor(int d) const {
        const long long keep = w1 * m.def_sizes[d];
        return avail[d] > 0 ? std::min(keep, refactor_cost) : keep;
    }

    void run() {
        dfs(0);
        for (int d : defs) avail[d] = 0;
        for (int a : abst) astate[a] = 0;
    }

    void dfs(std::size_t i) {
        if (aborted) return;
        if ((++nodes & 1023) == 0 && deadline && Clock::now() > *deadline) {
            aborted = true;
            return;
        }
        // Ties must survive pruning so the count/key tie-break stays exact.
        if (open_sum + def_lb_sum > best_obj) return;
        if (i == abst.size()) {
            leaf();
            return;
        }
        const int ai = abst[i];

        astate[ai] = 1;
        open_sum += open_cost[ai];
        dfs(i + 1);
        open_sum -= open_cost[ai];

        astate[ai] = -1;
        long long delta = 0;
        for (int d : m.origins[ai]) {
            const long long before = def_floor(d);
            --avail[d];
            delta += def_floor(d) - before;
        }
        def_lb_sum += delta;
        dfs(i + 1);
        def_lb_sum -= delta;
        for (int d : m.origins[ai]) ++avail[d];
        astate[ai] = 0;
    }

    void leaf() {
        ++leaf_id;
        long long obj = open_sum;
        std::vector<int> choice(defs.size(), -1);
        for (std::size_t k = 0; k < defs.size(); ++k) {
            const int d = defs[k];
            const long long keep = w1 * m.def_sizes[d];
            if (refactor_cost < keep)
                for (int a : m.options[d])
                    if (astate[a] == 1) {
                        choice[k] = a;
                        break;
                    }
            if (choice[k] >= 0) {
                obj += refactor_cost;
                used_stamp[choice[k]] = leaf_id;
            } else {
                obj += keep;
            }
        }

        int count = 0;
        for (int a : abst)
            if (astate[a] == 1) {
                if (used_stamp[a] != leaf_id) return;  // dominated: selected but unused
                ++count;
            }

        if (obj > best_obj) return;
        std::vector<std::string> keys;
        if (obj == best_obj) {
            if (count > best_count) return;
            if (count == best_count) {
                keys = selected_keys();
                if (!(keys < best_keys)) return;
            }
        }
        if (obj < best_obj && on_strict_improvement) on_strict_improvement(obj);
        if (keys.empty() && count > 0) keys = selected_keys();
        best_obj = obj;
        best_count = count;
        best_keys = std::move(keys);
        best_choice = std::move(choice);
    }

    std::vector<std::string> selected_keys() const {
        std::vector<std::string> keys;
        for (int a : abst)
            if (astate[a] == 1) keys.push_back(m.canonical_keys[a]);
        std::sort(keys.begin(), keys.end());
        return keys;
    }
};

}  // namespace

Assignment solve_cop(const CopModel& model, const SolveOptions& opts) {
    const int nd = model.num_definitions();
    const int na = model.num_abstractions();

    std::optional<Clock::time_point> deadline;
    if (opts.timeout_secs)
        deadline = Clock::now() + std::chrono::duration_cast<Clock::duration>(
                                      std::chrono::duration<double>(*opts.timeout_secs));

    Dsu dsu(nd + na);
    for (int d = 0; d < nd; ++d)
        for (int a : model.options[d]) dsu.unite(d, nd + a);

    struct Component {
        std::vector<int> defs, abst;
    };
    std::map<int, Component> components;
    for (int d = 0; d < nd; ++d) components[dsu.find(d)].defs.push_back(d);
    for (int a = 0; a < na; ++a) components[dsu.find(nd + a)].abst.push_back(a);

    std::vector<int> choice(nd, -1);
    bool proved = true;
    long long nodes = 0;

    long long total = 0;
    for (int d = 0; d < nd; ++d)
        total += static_cast<long long>(model.weights.unabstracted) * model.def_sizes[d];
    std::vector<long long> trace{total};

    std::vector<signed char> astate(na, 0);
    std::vector<int> avail(nd, 0);
    std::vector<long long> used_stamp(na, 0);

    for (auto& [root, comp] : components) {
        if (comp.abst.empty()) continue;  // nothing to decide; keep is optimal
        if (deadline && Clock::now() > *deadline) {
            proved = false;
            continue;
        }
        ComponentSearch search(model, comp.abst, comp.defs, deadline, astate, avail, used_stamp);
        long long local = search.best_obj;
        search.on_strict_improvement = [&](long long obj) {
            total += obj - local;
            local = obj;
            trace.push_back(total);
        };
        search.run();
        nodes += search.nodes;
        if (search.aborted) proved = false;
        for (std::size_t k = 0; k < comp.defs.size(); ++k)
            choice[comp.defs[k]] = search.best_choice[k];
    }

    Assignment result = evaluate_assignment(model, choice);
    result.proved_optimal = proved;
    result.incumbent_trace = std::move(trace);
    result.nodes_explored = nodes;
    return result;
}

Program apply_refactoring(const Program& p, const std::vector<Abstraction>& abstractions,
                          const Assignment& assignment) {
    if (assignment.choice.size() != p.definitions.size())
        throw std::invalid_argument("assignment does not match the program");

    auto fresh_var = [](int i) -> std::string {
        if (i < 15) return std::string(1, static_cast<char>('A' + i));
        return "V" + std::to_string(i);
    };

    Program out;
    out.targets = p.targets;
    for (int ai = 0; ai < static_cast<int>(abstractions.size()); ++ai) {
        bool used = false;
        for (int c : assignment.choice) used |= c == ai;
        if (!used) continue;

        out.definitions.push_back(abstractions[ai].definition);
        for (int di = 0; di < static_cast<int>(p.definitions.size()); ++di) {
            if (assignment.choice[di] != ai) continue;
            const Definition& d = p.definitions[di];
            const InstantiationTuple* tuple = abstractions[ai].tuple_for(di);
            if (!tuple)
                throw std::invalid_argument("abstraction " + abstractions[ai].name() +
                                            " does not cover " + d.head_symbol.name);

            Clause c;
            c.head.callee = d.head_symbol.name;
            for (int i = 0; i < d.head_symbol.arity; ++i) c.head.args.push_back(Term::var(fresh_var(i)));
            Atom call;
            call.callee = abstractions[ai].name();
            call.args = c.head.args;
            for (const PredicateSymbol& b : tuple->bindings) call.args.push_back(Term::pred_ref(b.name));
            c.body.push_back(std::move(call));

            Definition nd;
            nd.head_symbol = d.head_symbol;
            nd.clauses.push_back(std::move(c));
            out.definitions.push_back(std::move(nd));
        }
    }
    for (int di = 0; di < static_cast<int>(p.definitions.size()); ++di)
        if (assignment.choice[di] == -1) out.definitions.push_back(p.definitions[di]);
    return out;
}

}  // namespace horef
