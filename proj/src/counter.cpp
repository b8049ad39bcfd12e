#include "vc/counter.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <map>

namespace vc {

TypedGraphView view_of(const UnfrozenSubgraph& us) {
    TypedGraphView v;
    v.n = int(us.vertices.size());
    v.adj.assign(v.n, {});
    v.base_id = us.vertices;
    for (const auto& e : us.edges)
        v.add_edge(us.local_index(e.u), us.local_index(e.v), e.kind);
    return v;
}

TypedGraphView view_of_component(const UnfrozenSubgraph& us, int component) {
    const auto& comp = us.components.at(component);
    TypedGraphView v;
    v.n = int(comp.size());
    v.adj.assign(v.n, {});
    v.base_id = comp;
    std::map<int, int> local;
    for (int i = 0; i < v.n; ++i) local[comp[i]] = i;
    for (const auto& e : us.edges) {
        auto iu = local.find(e.u);
        if (iu == local.end()) continue;
        v.add_edge(iu->second, local.at(e.v), e.kind);
    }
    return v;
}

namespace {

struct Part {
    SizedCount lower = SizedCount::one();
    BigCount upper = 1;
    bool complete = true;
};

Part part_product(const Part& a, const Part& b) {
    Part p;
    p.lower = a.lower * b.lower;
    p.upper = a.upper * b.upper;
    p.complete = a.complete && b.complete;
    return p;
}

struct Engine {
    const TypedGraphView& view;
    AnalyzeOptions opt;
    std::vector<Fix> state;
    std::uint64_t branches = 0, pruned = 0;
    long long exhausted = 0;
    bool budget_hit = false;

    explicit Engine(const TypedGraphView& v, const AnalyzeOptions& o)
        : view(v), opt(o), state(v.n, Fix::Free) {}

    static Fix opposite(Fix s) { return s == Fix::Covered ? Fix::Uncovered : Fix::Covered; }

    // propagate typed constraints from already-assigned queue entries;
    // every newly fixed vertex is appended to trail (and queue)
    bool propagate(std::vector<int>& queue, std::vector<int>& trail) {
        while (!queue.empty()) {
            const int v = queue.back();
            queue.pop_back();
            const Fix s = state[v];
            for (auto [w, kind] : view.adj[v]) {
                Fix need;
                if (kind == EdgeKind::Double) need = opposite(s);
                else if (s == Fix::Uncovered) need = Fix::Covered;
                else continue;
                if (state[w] == Fix::Free) {
                    state[w] = need;
                    trail.push_back(w);
                    queue.push_back(w);
                } else if (state[w] != need) {
                    return false;
                }
            }
        }
        return true;
    }

    void undo(const std::vector<int>& trail, size_t from = 0) {
        for (size_t i = from; i < trail.size(); ++i) state[trail[i]] = Fix::Free;
    }

    // closure size from fixing seed to s; -1 on contradiction
    int closure_size(int seed, Fix s, std::vector<std::pair<int, bool>>* forced = nullptr) {
        std::vector<int> queue{seed}, trail{seed};
        state[seed] = s;
        const bool ok = propagate(queue, trail);
        int size = -1;
        if (ok) {
            size = int(trail.size());
            if (forced)
                for (int v : trail) forced->emplace_back(view.base_id[v], state[v] == Fix::Covered);
        }
        undo(trail);
        return size;
    }

    std::vector<std::vector<int>> free_components(const std::vector<int>& free_set) {
        std::vector<std::vector<int>> comps;
        std::vector<char> seen(view.n, 0);
        for (int s : free_set) {
            if (seen[s] || state[s] != Fix::Free) continue;
            comps.emplace_back();
            std::vector<int> stack{s};
            seen[s] = 1;
            while (!stack.empty()) {
                const int v = stack.back();
                stack.pop_back();
                comps.back().push_back(v);
                for (auto [w, kind] : view.adj[v]) {
                    (void)kind;
                    if (state[w] == Fix::Free && !seen[w]) {
                        seen[w] = 1;
                        stack.push_back(w);
                    }
                }
            }
            std::sort(comps.back().begin(), comps.back().end());
        }
        return comps;
    }

    Part analyze_free(const std::vector<int>& free_set) {
        Part out;
        for (const auto& comp : free_components(free_set))
            out = part_product(out, solve_component(comp));
        return out;
    }

    int free_edge_count(const std::vector<int>& comp) {
        int m2 = 0;
        for (int v : comp)
            for (auto [w, kind] : view.adj[v]) {
                (void)kind;
                if (state[w] == Fix::Free) ++m2;
            }
        return m2 / 2;
    }

    Part solve_component(const std::vector<int>& comp) {
        if (free_edge_count(comp) == int(comp.size()) - 1) return tree_component(comp);
        return exhaust_component(comp);
    }

    // bound used for branches left unexplored after a budget trip: one state
    // choice per matched pair, one per unmatched vertex
    BigCount coarse_bound(const std::vector<int>& comp) {
        int pairs = 0, singles = 0;
        std::vector<char> paired(view.n, 0);
        for (int v : comp) {
            if (paired[v]) continue;
            bool found = false;
            for (auto [w, kind] : view.adj[v])
                if (kind == EdgeKind::Double && state[w] == Fix::Free && !paired[w]) {
                    paired[v] = paired[w] = 1;
                    ++pairs;
                    found = true;
                    break;
                }
            if (!found) ++singles;
        }
        return BigCount(1) << (pairs + singles);
    }

    Part tree_component(const std::vector<int>& comp) {
        // iterative post-order from the lowest-id vertex
        const int root = comp.front();
        std::vector<int> order, parent(view.n, -1), stack{root};
        std::vector<EdgeKind> parent_kind(view.n, EdgeKind::Single);
        std::vector<char> seen(view.n, 0);
        seen[root] = 1;
        while (!stack.empty()) {
            const int v = stack.back();
            stack.pop_back();
            order.push_back(v);
            for (auto [w, kind] : view.adj[v])
                if (state[w] == Fix::Free && !seen[w]) {
                    seen[w] = 1;
                    parent[w] = v;
                    parent_kind[w] = kind;
                    stack.push_back(w);
                }
        }
        std::vector<SizedCount> sp(view.n, SizedCount{0, 1}), sm(view.n, SizedCount{1, 1});
        for (auto it = order.rbegin(); it != order.rend(); ++it) {
            const int v = *it;
            if (parent[v] == -1) continue;
            const int p = parent[v];
            sp[p] *= sm[v];
            sm[p] *= parent_kind[v] == EdgeKind::Double ? sp[v] : sp[v] + sm[v];
        }
        Part out;
        out.lower = sp[root] + sm[root];
        out.upper = out.lower.count;
        return out;
    }

    int pick_vertex(const std::vector<int>& comp) {
        std::vector<int> candidates = comp;
        if (opt.strategy == ExhaustStrategy::SparsestNearTopLevel) {
            auto near_top = sparsest_near_top(comp);
            if (!near_top.empty()) candidates = std::move(near_top);
        }
        int best = -1;
        long best_total = -1;
        for (int v : candidates) {
            const int ip = closure_size(v, Fix::Uncovered);
            const int im = closure_size(v, Fix::Covered);
            const long total = (ip < 0 ? 0 : ip) + (im < 0 ? 0 : im);
            if (total > best_total ||
                (total == best_total && view.base_id[v] < view.base_id[best])) {
                best_total = total;
                best = v;
            }
        }
        return best;
    }

    // peel matched pairs Jacobi-style and return the vertices of the level
    // with the fewest pairs among the unpeelable core and the two top levels
    std::vector<int> sparsest_near_top(const std::vector<int>& comp) {
        std::vector<int> partner(view.n, -1);
        for (int v : comp)
            if (partner[v] == -1)
                for (auto [w, kind] : view.adj[v])
                    if (kind == EdgeKind::Double && state[w] == Fix::Free && partner[w] == -1) {
                        partner[v] = w;
                        partner[w] = v;
                        break;
                    }
        std::vector<std::vector<int>> rounds;
        std::vector<char> alive(view.n, 0);
        int alive_pairs = 0;
        for (int v : comp)
            if (partner[v] > v) { alive[v] = alive[partner[v]] = 1; ++alive_pairs; }
        if (alive_pairs == 0) return {};
        while (true) {
            std::vector<int> peel;
            for (int v : comp) {
                if (!alive[v] || partner[v] < v) continue;
                int external = 0;
                for (int x : {v, partner[v]})
                    for (auto [w, kind] : view.adj[x]) {
                        (void)kind;
                        if (state[w] == Fix::Free && alive[w] && w != v && w != partner[v]) ++external;
                    }
                if (external <= 1) peel.push_back(v);
            }
            if (peel.empty()) break;
            rounds.emplace_back();
            for (int v : peel) {
                alive[v] = alive[partner[v]] = 0;
                rounds.back().push_back(v);
                rounds.back().push_back(partner[v]);
            }
        }
        std::vector<std::vector<int>> tiers;
        std::vector<int> core;
        for (int v : comp)
            if (alive[v]) core.push_back(v);
        if (!core.empty()) tiers.push_back(core);
        for (auto it = rounds.rbegin(); it != rounds.rend() && tiers.size() < 3; ++it)
            tiers.push_back(*it);
        if (tiers.empty()) return {};
        return *std::min_element(tiers.begin(), tiers.end(),
                                 [](const auto& a, const auto& b) { return a.size() < b.size(); });
    }

    bool budget_charge_branch() {
        ++branches;
        if (opt.budget.max_branches <= 0 ||
            branches > std::uint64_t(opt.budget.max_branches)) {
            if (opt.budget.on_exceed == CountBudget::OnExceed::Fail)
                throw BudgetExceeded("count budget: branch limit exceeded");
            budget_hit = true;
        }
        return !budget_hit;
    }

    Part exhaust_component(const std::vector<int>& comp) {
        if (budget_hit) {
            Part p;
            p.lower = SizedCount::infeasible();
            p.lower.count = 0;
            p.upper = coarse_bound(comp);
            p.complete = false;
            return p;
        }
        ++exhausted;
        if (opt.budget.max_exhaustion_vertices <= 0 ||
            exhausted > opt.budget.max_exhaustion_vertices) {
            if (opt.budget.on_exceed == CountBudget::OnExceed::Fail)
                throw BudgetExceeded("count budget: exhaustion limit exceeded");
            budget_hit = true;
            Part p;
            p.lower = SizedCount::infeasible();
            p.lower.count = 0;
            p.upper = coarse_bound(comp);
            p.complete = false;
            return p;
        }
        const int v = pick_vertex(comp);
        Part out;
        out.lower = SizedCount::infeasible();
        out.upper = 0;
        for (Fix s : {Fix::Uncovered, Fix::Covered}) {
            if (!budget_charge_branch()) {
                out.upper += coarse_bound(comp);
                out.complete = false;
                continue;
            }
            std::vector<int> queue{v}, trail{v};
            state[v] = s;
            if (!propagate(queue, trail)) {
                ++pruned;
                undo(trail);
                continue;
            }
            int covered_fixed = 0;
            for (int x : trail)
                if (state[x] == Fix::Covered) ++covered_fixed;
            std::vector<int> remaining;
            for (int x : comp)
                if (state[x] == Fix::Free) remaining.push_back(x);
            Part sub = analyze_free(remaining);
            undo(trail);
            Part branch;
            branch.lower = SizedCount{covered_fixed, 1} * sub.lower;
            branch.upper = sub.upper;
            branch.complete = sub.complete;
            out.lower += branch.lower;
            out.upper += branch.upper;
            out.complete = out.complete && branch.complete;
        }
        return out;
    }
};

}  // namespace

AnalyzeResult analyze(const TypedGraphView& view, std::span<const std::pair<int, Fix>> units,
                      const AnalyzeOptions& opt) {
    Engine eng(view, opt);
    AnalyzeResult res;
    std::vector<int> queue, trail;
    for (auto [v, s] : units) {
        if (s == Fix::Free) continue;
        if (eng.state[v] != Fix::Free && eng.state[v] != s) {
            res.total = SizedCount::infeasible();
            res.total.count = 0;
            res.upper = 0;
            return res;
        }
        if (eng.state[v] == Fix::Free) {
            eng.state[v] = s;
            queue.push_back(v);
            trail.push_back(v);
        }
    }
    if (!eng.propagate(queue, trail)) {
        res.total = SizedCount::infeasible();
        res.total.count = 0;
        res.upper = 0;
        return res;
    }
    int covered0 = 0;
    for (int v : trail)
        if (eng.state[v] == Fix::Covered) ++covered0;
    std::vector<int> free_set;
    for (int v = 0; v < view.n; ++v)
        if (eng.state[v] == Fix::Free) free_set.push_back(v);
    const Part part = eng.analyze_free(free_set);
    res.total = SizedCount{covered0, 1} * part.lower;
    res.upper = BigCount(part.upper);
    res.complete = part.complete;
    res.branches = eng.branches;
    res.pruned = eng.pruned;
    res.exhausted_vertices = eng.exhausted;
    return res;
}

std::vector<Fix> sample_min_assignment(const TypedGraphView& view, Rng& rng) {
    Engine eng(view, AnalyzeOptions{});
    std::vector<Fix> result(view.n, Fix::Free);

    std::function<void(const std::vector<int>&)> sample_free = [&](const std::vector<int>& free_set) {
        for (const auto& comp : eng.free_components(free_set)) {
            // branch on the lowest vertex; weights from conditioned analyses
            const int v = comp.front();
            SizedCount w[2];
            Fix fixes[2] = {Fix::Uncovered, Fix::Covered};
            for (int i = 0; i < 2; ++i) {
                std::vector<int> queue{v}, trail{v};
                eng.state[v] = fixes[i];
                if (!eng.propagate(queue, trail)) {
                    w[i] = SizedCount::infeasible();
                    w[i].count = 0;
                    eng.undo(trail);
                    continue;
                }
                int covered_fixed = 0;
                for (int x : trail)
                    if (eng.state[x] == Fix::Covered) ++covered_fixed;
                std::vector<int> remaining;
                for (int x : comp)
                    if (eng.state[x] == Fix::Free) remaining.push_back(x);
                w[i] = SizedCount{covered_fixed, 1} * eng.analyze_free(remaining).lower;
                eng.undo(trail);
            }
            const SizedCount merged = w[0] + w[1];
            if (!merged.feasible()) throw std::runtime_error("sample: infeasible component");
            int choice;
            if (!w[0].feasible() || w[0].covered > merged.covered) choice = 1;
            else if (!w[1].feasible() || w[1].covered > merged.covered) choice = 0;
            else {
                const Rational r(w[0].count, merged.count);
                choice = rng.unit() < r.convert_to<double>() ? 0 : 1;
            }
            std::vector<int> queue{v}, trail{v};
            eng.state[v] = fixes[choice];
            if (!eng.propagate(queue, trail)) throw std::logic_error("sample: chosen branch contradicts");
            std::vector<int> remaining;
            for (int x : comp)
                if (eng.state[x] == Fix::Free) remaining.push_back(x);
            sample_free(remaining);
        }
    };

    std::vector<int> all(view.n);
    for (int v = 0; v < view.n; ++v) all[v] = v;
    sample_free(all);
    for (int v = 0; v < view.n; ++v) result[v] = eng.state[v];
    return result;
}

PairCount tree_count(const UnfrozenSubgraph& us, int root_base_id) {
    const int li = us.local_index(root_base_id);
    if (li < 0) throw std::invalid_argument("tree_count: root is not an unfrozen vertex");
    int ci = -1;
    for (size_t i = 0; i < us.components.size(); ++i)
        if (std::binary_search(us.components[i].begin(), us.components[i].end(), root_base_id))
            ci = int(i);
    TypedGraphView view = view_of_component(us, ci);
    if (view.edge_count() != view.n - 1)
        throw std::invalid_argument("tree_count: component has a cycle");

    int root = -1;
    for (int i = 0; i < view.n; ++i)
        if (view.base_id[i] == root_base_id) root = i;

    std::vector<int> order, parent(view.n, -1), stack{root};
    std::vector<EdgeKind> pkind(view.n, EdgeKind::Single);
    std::vector<char> seen(view.n, 0);
    seen[root] = 1;
    while (!stack.empty()) {
        const int v = stack.back();
        stack.pop_back();
        order.push_back(v);
        for (auto [w, kind] : view.adj[v])
            if (!seen[w]) {
                seen[w] = 1;
                parent[w] = v;
                pkind[w] = kind;
                stack.push_back(w);
            }
    }
    std::vector<SizedCount> sp(view.n, SizedCount{0, 1}), sm(view.n, SizedCount{1, 1});
    for (auto it = order.rbegin(); it != order.rend(); ++it) {
        const int v = *it;
        if (parent[v] == -1) continue;
        sp[parent[v]] *= sm[v];
        sm[parent[v]] *= pkind[v] == EdgeKind::Double ? sp[v] : sp[v] + sm[v];
    }
    PairCount pc;
    pc.s_plus = sp[root].count;
    pc.cov_plus = sp[root].covered;
    pc.s_minus = sm[root].count;
    pc.cov_minus = sm[root].covered;
    return pc;
}

BigCount forest_count(const UnfrozenSubgraph& us) {
    SizedCount total = SizedCount::one();
    for (size_t i = 0; i < us.components.size(); ++i) {
        const PairCount pc = tree_count(us, us.components[i].front());
        total *= pc.total();
    }
    return total.count;
}

InfluenceResult influence_range(const UnfrozenSubgraph& us, int v_base) {
    const int v = us.local_index(v_base);
    if (v < 0) throw std::invalid_argument("influence_range: vertex not unfrozen");
    TypedGraphView view = view_of(us);
    Engine eng(view, AnalyzeOptions{});
    InfluenceResult r;
    const int ip = eng.closure_size(v, Fix::Uncovered, &r.forced_plus);
    const int im = eng.closure_size(v, Fix::Covered, &r.forced_minus);
    r.plus_contradiction = ip < 0;
    r.minus_contradiction = im < 0;
    if (r.plus_contradiction) r.forced_plus.clear();
    if (r.minus_contradiction) r.forced_minus.clear();
    r.i_plus = ip < 0 ? 0 : ip;
    r.i_minus = im < 0 ? 0 : im;
    r.i_total = r.i_plus + r.i_minus;
    return r;
}

namespace {

void gate_exactness(const ReducedSolutionGraph& rsg, bool allow_unverified) {
    if (rsg.exactness == Exactness::Inexact)
        throw std::invalid_argument("count_solutions: rsg flagged inexact");
    if (rsg.exactness == Exactness::Unverified && !allow_unverified)
        throw std::invalid_argument("count_solutions: rsg unverified (pass allow_unverified to override)");
}

}  // namespace

CountOutcome count_solutions(const ReducedSolutionGraph& rsg, const CountBudget& budget,
                             ExhaustStrategy strategy, bool allow_unverified) {
    gate_exactness(rsg, allow_unverified);
    const UnfrozenSubgraph us = unfrozen_subgraph(rsg);
    const EvenCycleContraction ecc = contract_even_cycles(us);

    CountOutcome out;
    SizedCount total = SizedCount::one();
    BigCount upper = 1;
    bool complete = true;
    CountBudget remaining = budget;
    for (size_t i = 0; i < ecc.contracted.components.size(); ++i) {
        TypedGraphView view = view_of_component(ecc.contracted, int(i));
        AnalyzeOptions opt{remaining, strategy};
        const AnalyzeResult r = analyze(view, {}, opt);
        total *= r.total;
        upper *= r.upper > 0 ? r.upper : r.total.count;
        complete = complete && r.complete;
        out.branches_explored += r.branches;
        out.pruned_branches += r.pruned;
        remaining.max_branches -= (long long)r.branches;
        remaining.max_exhaustion_vertices -= r.exhausted_vertices;
    }
    int class_cover = 0;
    for (const auto& cls : ecc.classes) class_cover += int(cls.size()) / 2;
    out.contracted_classes = ecc.class_multiplier_exponent;

    out.count = total.count << ecc.class_multiplier_exponent;
    out.upper_bound = complete ? out.count : (upper << ecc.class_multiplier_exponent);
    out.exact = complete;
    out.min_cover_size =
        rsg.count_state(CoverState::NegativeBackbone) + total.covered + class_cover;
    return out;
}

CountOutcome count_solutions_conditioned(const ReducedSolutionGraph& rsg, int vertex,
                                         bool covered, const CountBudget& budget,
                                         bool allow_unverified) {
    gate_exactness(rsg, allow_unverified);
    if (rsg.state[vertex] != CoverState::Unfrozen) {
        // backbones: the condition either selects all solutions or none
        CountOutcome all = count_solutions(rsg, budget, ExhaustStrategy::MaxInfluence, true);
        const bool matches = (rsg.state[vertex] == CoverState::NegativeBackbone) == covered;
        if (!matches) {
            all.count = 0;
            all.upper_bound = 0;
        }
        return all;
    }
    const UnfrozenSubgraph us = unfrozen_subgraph(rsg);
    CountOutcome out;
    SizedCount total = SizedCount::one();
    CountBudget remaining = budget;
    for (size_t i = 0; i < us.components.size(); ++i) {
        TypedGraphView view = view_of_component(us, int(i));
        AnalyzeOptions opt{remaining, ExhaustStrategy::MaxInfluence};
        const bool has_vertex =
            std::binary_search(us.components[i].begin(), us.components[i].end(), vertex);
        AnalyzeResult r;
        if (has_vertex) {
            int lv = -1;
            for (int j = 0; j < view.n; ++j)
                if (view.base_id[j] == vertex) lv = j;
            const std::pair<int, Fix> unit{lv, covered ? Fix::Covered : Fix::Uncovered};
            r = analyze(view, std::span(&unit, 1), opt);
            // pinned component must still reach the unconditioned minimum
            const AnalyzeResult plain = analyze(view, {}, opt);
            if (!r.total.feasible() || r.total.covered > plain.total.covered) {
                r.total = SizedCount{plain.total.covered, 0};
            }
        } else {
            r = analyze(view, {}, opt);
        }
        total *= r.total;
        out.branches_explored += r.branches;
        out.pruned_branches += r.pruned;
        remaining.max_branches -= (long long)r.branches;
        remaining.max_exhaustion_vertices -= r.exhausted_vertices;
    }
    out.count = total.count;
    out.upper_bound = out.count;
    out.exact = true;
    out.min_cover_size = rsg.count_state(CoverState::NegativeBackbone) + total.covered;
    return out;
}

double entropy_density(const BigCount& count, int n) {
    if (n < 1) throw std::invalid_argument("entropy_density: n >= 1 required");
    if (count < 1) throw std::domain_error("entropy_density: count must be positive");
    const unsigned bits = boost::multiprecision::msb(count) + 1;
    const unsigned shift = bits > 62 ? bits - 62 : 0;
    const BigCount top = count >> shift;
    const double mant = top.convert_to<double>();
    return (std::log(mant) + double(shift) * std::log(2.0)) / double(n);
}

int min_cover_size(const ReducedSolutionGraph& rsg) {
    if (rsg.exactness == Exactness::Inexact)
        throw std::invalid_argument("min_cover_size: rsg flagged inexact");
    const UnfrozenSubgraph us = unfrozen_subgraph(rsg);
    int total = rsg.count_state(CoverState::NegativeBackbone);
    for (size_t i = 0; i < us.components.size(); ++i) {
        TypedGraphView view = view_of_component(us, int(i));
        total += analyze(view, {}, AnalyzeOptions{}).total.covered;
    }
    return total;
}

}  // namespace vc
