#include "vc/build.hpp"

#include <algorithm>
#include <functional>
#include <map>
#include <set>

namespace vc {

// ---------------------------------------------------------------- TauSolver

TauSolver::TauSolver(const Graph& g, int bb_comp_cap, long long bb_node_cap)
    : g_(&g), bb_comp_cap_(bb_comp_cap), bb_node_cap_(bb_node_cap),
      deg_(g.n, 0), alive_(g.n, 0) {}

void TauSolver::mask(const std::vector<char>& keep, std::span<const int> minus) {
    alive_ = keep;
    for (int v : minus) alive_[v] = 0;
    for (int v = 0; v < g_->n; ++v) {
        deg_[v] = 0;
        if (!alive_[v]) continue;
        for (int w : g_->adj[v])
            if (alive_[w]) ++deg_[v];
    }
}

int TauSolver::run_leaf_removal() {
    queue_.clear();
    for (int v = 0; v < g_->n; ++v)
        if (alive_[v] && deg_[v] <= 1) queue_.push_back(v);
    int trace = 0;
    for (size_t head = 0; head < queue_.size(); ++head) {
        const int v = queue_[head];
        if (!alive_[v]) continue;
        if (deg_[v] == 0) {
            alive_[v] = 0;
            continue;
        }
        int u = -1;
        for (int w : g_->adj[v])
            if (alive_[w]) { u = w; break; }
        ++trace;
        alive_[v] = 0;
        alive_[u] = 0;
        for (int w : g_->adj[u])
            if (alive_[w] && --deg_[w] <= 1) queue_.push_back(w);
    }
    return trace;
}

int TauSolver::bb_min_vc(const std::vector<int>& comp, bool& exact) const {
    const int nc = int(comp.size());
    std::map<int, int> local;
    for (int i = 0; i < nc; ++i) local[comp[i]] = i;
    std::vector<std::vector<int>> adj(nc);
    std::vector<std::pair<int, int>> edges;
    for (int i = 0; i < nc; ++i)
        for (int w : g_->adj[comp[i]]) {
            auto it = local.find(w);
            if (it == local.end() || it->second < i) continue;
            adj[i].push_back(it->second);
            adj[it->second].push_back(i);
            edges.emplace_back(i, it->second);
        }

    std::vector<std::uint8_t> mark(nc, 0);  // 0 free, 1 in, 2 out
    int best = nc;
    long long nodes = 0;
    auto matching_lb = [&]() {
        std::vector<char> used(nc, 0);
        int lb = 0;
        for (auto [u, v] : edges)
            if (mark[u] != 1 && mark[v] != 1 && !used[u] && !used[v]) {
                used[u] = used[v] = 1;
                ++lb;
            }
        return lb;
    };
    std::function<void(int)> rec = [&](int size) {
        if (++nodes > bb_node_cap_) { exact = false; return; }
        if (size >= best) return;
        int pv = -1, pd = -1;
        for (auto [u, v] : edges) {
            if (mark[u] == 1 || mark[v] == 1) continue;
            for (int x : {u, v}) {
                if (mark[x] != 0) continue;
                int d = 0;
                for (int w : adj[x])
                    if (mark[w] != 1) ++d;
                if (d > pd) { pd = d; pv = x; }
            }
        }
        if (pv == -1) { best = size; return; }
        if (size + matching_lb() >= best) return;
        mark[pv] = 1;
        rec(size + 1);
        mark[pv] = 0;
        std::vector<int> forced;
        bool ok = true;
        for (int w : adj[pv]) {
            if (mark[w] == 1) continue;
            if (mark[w] == 2) { ok = false; break; }
            mark[w] = 1;
            forced.push_back(w);
        }
        if (ok) {
            mark[pv] = 2;
            rec(size + int(forced.size()));
            mark[pv] = 0;
        }
        for (int w : forced) mark[w] = 0;
    };
    rec(0);
    return best;
}

TauSolver::Result TauSolver::tau(const std::vector<char>& keep, std::span<const int> minus) {
    ++queries;
    mask(keep, minus);
    Result res;
    res.size = run_leaf_removal();
    std::vector<char> seen(g_->n, 0);
    for (int s = 0; s < g_->n; ++s) {
        if (!alive_[s] || seen[s]) continue;
        std::vector<int> comp, stack{s};
        seen[s] = 1;
        bool all_deg2 = true;
        while (!stack.empty()) {
            const int v = stack.back();
            stack.pop_back();
            comp.push_back(v);
            if (deg_[v] != 2) all_deg2 = false;
            for (int w : g_->adj[v])
                if (alive_[w] && !seen[w]) { seen[w] = 1; stack.push_back(w); }
        }
        if (all_deg2) {
            res.size += (int(comp.size()) + 1) / 2;
        } else if (int(comp.size()) <= bb_comp_cap_) {
            bool exact = true;
            std::sort(comp.begin(), comp.end());
            res.size += bb_min_vc(comp, exact);
            res.exact = res.exact && exact;
        } else {
            // matching lower bound only; callers treat inexact results as a
            // signal, not a value
            res.exact = false;
            std::vector<char> used(g_->n, 0);
            int lb = 0;
            for (int v : comp)
                for (int w : g_->adj[v])
                    if (alive_[w] && !used[v] && !used[w]) {
                        used[v] = used[w] = 1;
                        ++lb;
                    }
            res.size += lb;
        }
    }
    return res;
}

TauSolver::CoreInfo TauSolver::core_info(const std::vector<char>& keep, std::span<const int> minus) {
    mask(keep, minus);
    CoreInfo info;
    info.trace_size = run_leaf_removal();
    std::vector<char> seen(g_->n, 0);
    for (int s = 0; s < g_->n; ++s) {
        if (!alive_[s] || seen[s]) continue;
        std::vector<int> comp, stack{s};
        seen[s] = 1;
        bool all_deg2 = true;
        while (!stack.empty()) {
            const int v = stack.back();
            stack.pop_back();
            comp.push_back(v);
            if (deg_[v] != 2) all_deg2 = false;
            for (int w : g_->adj[v])
                if (alive_[w] && !seen[w]) { seen[w] = 1; stack.push_back(w); }
        }
        if (all_deg2) info.cycle_cover += (int(comp.size()) + 1) / 2;
        else {
            std::sort(comp.begin(), comp.end());
            info.hard_components.push_back(std::move(comp));
        }
    }
    return info;
}

// --------------------------------------------------------- build_rsg_oracle

ReducedSolutionGraph build_rsg_oracle(const Graph& g, int bound) {
    const OracleResult res = enumerate_min_covers(g, bound);
    ReducedSolutionGraph rsg;
    rsg.base = g;
    rsg.state.resize(g.n);
    for (int v = 0; v < g.n; ++v) {
        const auto& f = res.per_vertex_cover_frequency[v];
        rsg.state[v] = f == 0   ? CoverState::PositiveBackbone
                       : f == 1 ? CoverState::NegativeBackbone
                                : CoverState::Unfrozen;
    }
    for (std::size_t e = 0; e < g.edges.size(); ++e) {
        const auto [u, v] = g.edges[e];
        if (rsg.state[u] != CoverState::Unfrozen || rsg.state[v] != CoverState::Unfrozen) continue;
        TypedEdge te;
        te.u = u;
        te.v = v;
        te.kind = res.both_covered[e] == 0 ? EdgeKind::Double : EdgeKind::Single;
        rsg.unfrozen_edges.push_back(te);
    }
    rsg.exactness = Exactness::OracleExact;
    rsg.builder = "oracle";
    return rsg;
}

// ------------------------------------------------------ build_rsg_heuristic

namespace {

constexpr int kCompCap = 200;               // unfrozen component analysis cap
constexpr long long kAnalyzeBranchCap = 20000;

struct Builder {
    const Graph& g;
    BuildReport rep;
    TauSolver tau;
    std::vector<CoverState> st;
    std::vector<char> added;
    // typed adjacency among unfrozen vertices; kinds are the raw
    // mutual-determination facts
    std::vector<std::vector<std::pair<int, EdgeKind>>> uadj;
    std::vector<int> partner;
    int k = 0;
    bool latched = false;
    bool failed = false;

    explicit Builder(const Graph& graph)
        : g(graph), tau(graph), st(graph.n, CoverState::PositiveBackbone),
          added(graph.n, 0), uadj(graph.n), partner(graph.n, -1) {}

    void fail(const std::string& why) {
        if (!failed) {
            failed = true;
            rep.construction_failed = true;
            rep.failure = why;
        }
    }

    void latch(const char* site) {
        if (!latched) {
            latched = true;
            rep.latch_site = site;
        }
    }

    // ---- unfrozen structure helpers ----

    std::vector<int> unfrozen_comp_of(std::span<const int> seeds) const {
        std::vector<int> comp;
        std::set<int> seen;
        std::vector<int> stack;
        for (int s : seeds)
            if (st[s] == CoverState::Unfrozen && seen.insert(s).second) stack.push_back(s);
        while (!stack.empty()) {
            const int v = stack.back();
            stack.pop_back();
            comp.push_back(v);
            for (auto [w, kind] : uadj[v]) {
                (void)kind;
                if (seen.insert(w).second) stack.push_back(w);
            }
        }
        std::sort(comp.begin(), comp.end());
        return comp;
    }

    TypedGraphView comp_view(const std::vector<int>& comp, std::map<int, int>& local) const {
        TypedGraphView view;
        view.n = int(comp.size());
        view.adj.assign(view.n, {});
        view.base_id = comp;
        local.clear();
        for (int i = 0; i < view.n; ++i) local[comp[i]] = i;
        for (int i = 0; i < view.n; ++i)
            for (auto [w, kind] : uadj[comp[i]]) {
                auto it = local.find(w);
                if (it == local.end() || it->second < i) continue;
                view.add_edge(i, it->second, kind);
            }
        return view;
    }

    // exact component analysis with a latch on runaway cost
    std::optional<AnalyzeResult> comp_analyze(const TypedGraphView& view,
                                              std::span<const std::pair<int, Fix>> units) {
        AnalyzeOptions opt;
        opt.budget.max_branches = kAnalyzeBranchCap;
        opt.budget.max_exhaustion_vertices = kAnalyzeBranchCap;
        opt.budget.on_exceed = CountBudget::OnExceed::Fail;
        try {
            return analyze(view, units, opt);
        } catch (const BudgetExceeded&) {
            latch("component-analysis-budget");
            return std::nullopt;
        }
    }

    // does some current minimum cover contain all of U?
    std::optional<bool> cost0(const std::vector<int>& U) {
        std::set<int> remaining(U.begin(), U.end());
        while (!remaining.empty()) {
            const int seed = *remaining.begin();
            const std::vector<int> comp = unfrozen_comp_of(std::span(&seed, 1));
            if (int(comp.size()) > kCompCap) { latch("cost0-component-cap"); return std::nullopt; }
            std::map<int, int> local;
            const TypedGraphView view = comp_view(comp, local);
            std::vector<std::pair<int, Fix>> units;
            for (int u : U)
                if (local.count(u)) {
                    units.emplace_back(local[u], Fix::Covered);
                    remaining.erase(u);
                }
            auto plain = comp_analyze(view, {});
            auto cond = comp_analyze(view, units);
            if (!plain || !cond) return std::nullopt;
            if (!cond->total.feasible() || cond->total.covered > plain->total.covered)
                return false;
        }
        return true;
    }

    // exact conditioning of the solution space on "all of U covered"
    void condition_on_covered(const std::vector<int>& U) {
        std::set<int> remaining(U.begin(), U.end());
        while (!remaining.empty() && !latched && !failed) {
            const int seed = *remaining.begin();
            const std::vector<int> comp = unfrozen_comp_of(std::span(&seed, 1));
            if (int(comp.size()) > kCompCap) { latch("conditioning-component-cap"); return; }
            std::map<int, int> local;
            const TypedGraphView view = comp_view(comp, local);
            std::vector<std::pair<int, Fix>> units;
            for (int u : U)
                if (local.count(u)) {
                    units.emplace_back(local[u], Fix::Covered);
                    remaining.erase(u);
                }
            auto plain = comp_analyze(view, {});
            auto cond = comp_analyze(view, units);
            if (!plain || !cond) return;
            if (!cond->total.feasible() || cond->total.covered > plain->total.covered) {
                fail("conditioning contradicts a cost-0 certificate");
                return;
            }
            const int target = cond->total.covered;

            // refreeze vertices forced by the conditioning
            std::vector<CoverState> next(comp.size(), CoverState::Unfrozen);
            for (size_t i = 0; i < comp.size(); ++i) {
                auto probe = [&](Fix f) {
                    auto u2 = units;
                    u2.emplace_back(int(i), f);
                    auto r = comp_analyze(view, u2);
                    return r && r->total.feasible() && r->total.covered == target;
                };
                const bool cov_ok = probe(Fix::Covered);
                const bool unc_ok = probe(Fix::Uncovered);
                if (latched) return;
                if (!cov_ok && !unc_ok) { fail("conditioning produced an empty state"); return; }
                next[i] = cov_ok && unc_ok ? CoverState::Unfrozen
                          : cov_ok        ? CoverState::NegativeBackbone
                                          : CoverState::PositiveBackbone;
            }
            for (size_t i = 0; i < comp.size(); ++i) st[comp[i]] = next[i];

            // re-derive edge kinds among survivors
            std::map<std::pair<int, int>, EdgeKind> kinds;
            for (size_t i = 0; i < comp.size(); ++i) {
                if (next[i] != CoverState::Unfrozen) continue;
                for (auto [w, kind] : uadj[comp[i]]) {
                    (void)kind;
                    if (w < comp[i] || st[w] != CoverState::Unfrozen) continue;
                    auto u2 = units;
                    u2.emplace_back(int(i), Fix::Covered);
                    u2.emplace_back(local[w], Fix::Covered);
                    auto r = comp_analyze(view, u2);
                    if (latched) return;
                    const bool both_ok = r && r->total.feasible() && r->total.covered == target;
                    kinds[{comp[i], w}] = both_ok ? EdgeKind::Single : EdgeKind::Double;
                }
            }
            rebuild_zone(comp, kinds);
        }
    }

    // drop frozen vertices from rows, apply new kinds, rematch the zone
    void rebuild_zone(const std::vector<int>& zone,
                      const std::map<std::pair<int, int>, EdgeKind>& kinds) {
        std::set<int> touched(zone.begin(), zone.end());
        for (int v : zone)
            for (auto [w, kind] : uadj[v]) {
                (void)kind;
                touched.insert(w);
            }
        for (int v : touched) {
            uadj[v].clear();
            partner[v] = -1;
        }
        for (int v : touched) {
            if (st[v] != CoverState::Unfrozen) continue;
            for (int w : g.adj[v]) {
                if (!added[w] || w < v || st[w] != CoverState::Unfrozen) continue;
                if (!touched.count(w)) continue;  // rows outside stay intact
                auto it = kinds.find({v, w});
                const EdgeKind kind = it != kinds.end() ? it->second : EdgeKind::Single;
                uadj[v].emplace_back(w, kind);
                uadj[w].emplace_back(v, kind);
            }
        }
        rematch(touched);
    }

    void rematch(const std::set<int>& zone) {
        std::vector<int> verts;
        for (int v : zone)
            if (st[v] == CoverState::Unfrozen) verts.push_back(v);
        std::map<int, int> local;
        for (size_t i = 0; i < verts.size(); ++i) local[verts[i]] = int(i);
        std::vector<std::vector<int>> dadj(verts.size());
        for (size_t i = 0; i < verts.size(); ++i)
            for (auto [w, kind] : uadj[verts[i]])
                if (kind == EdgeKind::Double && local.count(w))
                    dadj[i].push_back(local[w]);
        const std::vector<int> match = canonical_double_matching(int(verts.size()), dadj);
        for (size_t i = 0; i < verts.size(); ++i)
            partner[verts[i]] = match[i] >= 0 ? verts[match[i]] : -1;
    }

    // ---- tau-query classification ----

    std::optional<std::pair<bool, bool>> classify_tau(int v) {
        std::vector<int> minus{v};
        auto rc = tau.tau(added, minus);
        if (!rc.exact) { latch("classify-covered-query"); return std::nullopt; }
        const bool cov_ok = rc.size + 1 == k;
        for (int w : g.adj[v])
            if (added[w]) minus.push_back(w);
        auto ru = tau.tau(added, minus);
        if (!ru.exact) { latch("classify-uncovered-query"); return std::nullopt; }
        const bool unc_ok = ru.size + int(minus.size()) - 1 == k;
        if (!cov_ok && !unc_ok) { fail("classification contradiction at vertex " + std::to_string(v)); }
        return std::make_pair(cov_ok, unc_ok);
    }

    std::optional<bool> md_test(int u, int v) {
        const std::vector<int> minus{u, v};
        auto r = tau.tau(added, minus);
        if (!r.exact) { latch("md-query"); return std::nullopt; }
        return r.size + 2 > k;
    }

    // case (d): a releasing addition; k has already been advanced to k+1 and
    // w's edges are live.  Re-derives states outward from the seeds until the
    // change frontier closes, then refreshes kinds inside affected components.
    void region_reclassify(int w, const std::vector<int>& N) {
        ++rep.region_events;
        std::vector<int> queue;
        std::set<int> enqueued;
        auto push = [&](int x) {
            if (added[x] && enqueued.insert(x).second) queue.push_back(x);
        };
        push(w);
        for (int x : N) {
            push(x);
            if (st[x] == CoverState::Unfrozen)
                for (int m : unfrozen_comp_of(std::span(&x, 1))) push(m);
            if (st[x] == CoverState::PositiveBackbone)
                for (int nb : g.adj[x]) push(nb);
        }

        std::set<int> changed{w};
        std::set<int> zone;
        size_t head = 0;
        while (true) {
            // each vertex is classified once; its state in the grown graph is
            // a fixed property, so a single query settles it
            for (; head < queue.size(); ++head) {
                const int v = queue[head];
                auto cls = classify_tau(v);
                if (!cls || failed || latched) return;
                const CoverState ns = cls->first && cls->second ? CoverState::Unfrozen
                                      : cls->first              ? CoverState::NegativeBackbone
                                                                : CoverState::PositiveBackbone;
                if (v == w || st[v] != ns) {
                    const int old_partner = partner[v];
                    st[v] = ns;
                    changed.insert(v);
                    for (int nb : g.adj[v]) push(nb);
                    if (old_partner >= 0) push(old_partner);
                }
            }
            // pull whole affected components in, so intra-component effects
            // that skip over unchanged vertices are still re-derived
            zone.clear();
            std::vector<int> stack;
            auto zone_seed = [&](int v) {
                if (added[v] && st[v] == CoverState::Unfrozen && zone.insert(v).second)
                    stack.push_back(v);
            };
            for (int v : changed) zone_seed(v);
            for (int x : N) zone_seed(x);
            zone_seed(w);
            while (!stack.empty()) {
                const int v = stack.back();
                stack.pop_back();
                for (int nb : g.adj[v])
                    if (added[nb] && st[nb] == CoverState::Unfrozen && zone.insert(nb).second)
                        stack.push_back(nb);
            }
            bool grew = false;
            for (int v : zone)
                if (!enqueued.count(v)) {
                    push(v);
                    grew = true;
                }
            if (!grew) break;
        }

        std::map<std::pair<int, int>, EdgeKind> kinds;
        for (int v : zone) {
            if (st[v] != CoverState::Unfrozen) continue;
            for (int nb : g.adj[v]) {
                if (!added[nb] || nb < v || st[nb] != CoverState::Unfrozen) continue;
                if (!zone.count(nb)) continue;
                auto md = md_test(v, nb);
                if (!md) return;
                kinds[{v, nb}] = *md ? EdgeKind::Double : EdgeKind::Single;
            }
        }
        std::vector<int> zone_list(zone.begin(), zone.end());
        for (int v : changed) zone_list.push_back(v);
        std::sort(zone_list.begin(), zone_list.end());
        zone_list.erase(std::unique(zone_list.begin(), zone_list.end()), zone_list.end());
        rebuild_zone(zone_list, kinds);
    }

    // ---- the incremental loop ----

    int added_degree(int v) const {
        int d = 0;
        for (int w : g.adj[v])
            if (added[w]) ++d;
        return d;
    }

    void add_vertex(int w) {
        std::vector<int> N, P, U;
        for (int x : g.adj[w])
            if (added[x]) {
                N.push_back(x);
                if (st[x] == CoverState::PositiveBackbone) P.push_back(x);
                else if (st[x] == CoverState::Unfrozen) U.push_back(x);
            }

        if (P.empty() && U.empty()) {  // rule (a)
            st[w] = CoverState::PositiveBackbone;
            added[w] = 1;
            return;
        }

        if (P.empty()) {
            auto c0 = cost0(U);
            if (!c0) { added[w] = 1; return; }
            if (*c0) {
                st[w] = CoverState::PositiveBackbone;
                added[w] = 1;
                condition_on_covered(U);
                return;
            }
            auto r = tau.tau(added, N);
            if (!r.exact) { latch("mincov-query"); added[w] = 1; return; }
            const int mincov = int(N.size()) + r.size;
            added[w] = 1;
            ++k;
            if (mincov >= k + 1) {  // no (k+1)-cover contains N
                st[w] = CoverState::NegativeBackbone;
                return;
            }
            st[w] = CoverState::Unfrozen;
            region_reclassify(w, N);
            return;
        }

        if (P.size() == 1 && added_degree(P[0]) == 0) {  // rule (b), isolated positive
            auto c0 = cost0(U);
            if (!c0) { added[w] = 1; return; }
            added[w] = 1;
            ++k;
            if (!*c0) {
                st[w] = CoverState::NegativeBackbone;
                return;
            }
            const int p = P[0];
            st[w] = CoverState::Unfrozen;
            st[p] = CoverState::Unfrozen;
            partner[w] = p;
            partner[p] = w;
            uadj[w].emplace_back(p, EdgeKind::Double);
            uadj[p].emplace_back(w, EdgeKind::Double);
            for (int u : U) {
                uadj[w].emplace_back(u, EdgeKind::Single);
                uadj[u].emplace_back(w, EdgeKind::Single);
            }
            return;
        }

        const bool all_isolated =
            std::all_of(P.begin(), P.end(), [&](int p) { return added_degree(p) == 0; });
        if (P.size() >= 2 && all_isolated) {  // rule (c), covering costs >= 2 extra
            st[w] = CoverState::NegativeBackbone;
            added[w] = 1;
            ++k;
            return;
        }

        // positive neighbors with edges: releasing risk, discriminate by size
        auto r = tau.tau(added, N);
        if (!r.exact) { latch("mincov-query-positive"); added[w] = 1; return; }
        const int mincov = int(N.size()) + r.size;
        added[w] = 1;
        ++k;
        if (mincov >= k + 1) {
            st[w] = CoverState::NegativeBackbone;
            return;
        }
        st[w] = CoverState::Unfrozen;
        region_reclassify(w, N);
    }

    // ---- batch selection mode (hard leaf-removal cores) ----

    void batch_selection() {
        rep.latched = true;
        std::fill(st.begin(), st.end(), CoverState::PositiveBackbone);
        std::fill(added.begin(), added.end(), 1);
        for (auto& row : uadj) row.clear();
        std::fill(partner.begin(), partner.end(), -1);

        std::vector<int> deleted;
        while (true) {
            auto info = tau.core_info(added, deleted);
            if (info.hard_components.empty()) break;
            int pick = -1, pick_deg = -1;
            std::set<int> del_set(deleted.begin(), deleted.end());
            for (const auto& comp : info.hard_components)
                for (int v : comp) {
                    int d = 0;
                    for (int w : g.adj[v])
                        if (!del_set.count(w)) ++d;
                    if (d > pick_deg) { pick_deg = d; pick = v; }
                }
            deleted.push_back(pick);
        }
        rep.selections = int(deleted.size());
        auto rbase = tau.tau(added, deleted);
        if (!rbase.exact) rep.degraded = true;  // cannot happen: hard cores were selected away
        const int tau_base = rbase.size;
        k = int(deleted.size()) + tau_base;

        std::set<int> del_set(deleted.begin(), deleted.end());
        for (int v : deleted) st[v] = CoverState::NegativeBackbone;

        for (int v = 0; v < g.n; ++v) {
            if (del_set.count(v)) continue;
            std::vector<int> minus = deleted;
            minus.push_back(v);
            auto rc = tau.tau(added, minus);
            int nb_count = 0;
            for (int w : g.adj[v])
                if (!del_set.count(w)) { minus.push_back(w); ++nb_count; }
            auto ru = tau.tau(added, minus);
            if (!rc.exact || !ru.exact) {
                rep.degraded = true;
                st[v] = CoverState::NegativeBackbone;  // conservative fallback
                continue;
            }
            const bool cov_ok = rc.size + 1 == tau_base;
            const bool unc_ok = ru.size + nb_count == tau_base;
            if (!cov_ok && !unc_ok) {
                rep.degraded = true;
                st[v] = CoverState::NegativeBackbone;
                continue;
            }
            st[v] = cov_ok && unc_ok ? CoverState::Unfrozen
                    : cov_ok         ? CoverState::NegativeBackbone
                                     : CoverState::PositiveBackbone;
        }

        for (auto [u, v] : g.edges) {
            if (st[u] != CoverState::Unfrozen || st[v] != CoverState::Unfrozen) continue;
            std::vector<int> minus = deleted;
            minus.push_back(u);
            minus.push_back(v);
            auto r = tau.tau(added, minus);
            const bool md = !r.exact ? false : r.size + 2 > tau_base;
            if (!r.exact) rep.degraded = true;
            uadj[u].emplace_back(v, md ? EdgeKind::Double : EdgeKind::Single);
            uadj[v].emplace_back(u, md ? EdgeKind::Double : EdgeKind::Single);
        }
        std::set<int> everything;
        for (int v = 0; v < g.n; ++v)
            if (st[v] == CoverState::Unfrozen) everything.insert(v);
        rematch(everything);
    }

    ReducedSolutionGraph finish() {
        ReducedSolutionGraph rsg;
        rsg.base = g;
        rsg.state = st;
        for (int v = 0; v < g.n; ++v)
            for (auto [w, kind] : uadj[v])
                if (w > v) rsg.unfrozen_edges.push_back(TypedEdge{v, w, kind});
        std::sort(rsg.unfrozen_edges.begin(), rsg.unfrozen_edges.end(),
                  [](const TypedEdge& a, const TypedEdge& b) {
                      return std::tie(a.u, a.v) < std::tie(b.u, b.v);
                  });
        rsg.exactness = failed ? Exactness::Inexact : Exactness::Unverified;
        rsg.builder = rep.latched ? "heuristic-selection" : "heuristic-incremental";
        rep.tau_queries = tau.queries;
        return rsg;
    }

    void run() {
        for (int w = 0; w < g.n && !failed; ++w) {
            if (latched) break;
            add_vertex(w);
        }
        if (latched && !failed) batch_selection();
    }
};

}  // namespace

ReducedSolutionGraph build_rsg_heuristic(const Graph& g, BuildReport* report) {
    Builder b(g);
    b.run();
    ReducedSolutionGraph rsg = b.finish();
    if (report) *report = b.rep;
    return rsg;
}

// ----------------------------------------------------------------- verify

bool VerificationReport::all_ran_passed() const {
    for (const auto& c : checks)
        if (c.ran && !c.passed) return false;
    return true;
}

const CheckResult* VerificationReport::find(const std::string& name) const {
    for (const auto& c : checks)
        if (c.name == name) return &c;
    return nullptr;
}

namespace {

CheckResult make_check(const std::string& name, bool hard) {
    CheckResult c;
    c.name = name;
    c.hard = hard;
    return c;
}

}  // namespace

VerificationReport verify_rsg(const Graph& g, const ReducedSolutionGraph& rsg,
                              const VerifyOptions& opt) {
    VerificationReport report;
    auto& checks = report.checks;

    // structural checks
    {
        CheckResult c = make_check("structure/edges", true);
        c.ran = true;
        c.passed = int(rsg.state.size()) == g.n;
        std::set<std::pair<int, int>> typed;
        for (const auto& e : rsg.unfrozen_edges) {
            typed.insert({e.u, e.v});
            if (!g.has_edge(e.u, e.v) || rsg.state[e.u] != CoverState::Unfrozen ||
                rsg.state[e.v] != CoverState::Unfrozen) {
                c.passed = false;
                c.detail = "typed edge outside the unfrozen base edges";
            }
        }
        for (auto [u, v] : g.edges)
            if (rsg.state[u] == CoverState::Unfrozen && rsg.state[v] == CoverState::Unfrozen &&
                !typed.count({u, v})) {
                c.passed = false;
                c.detail = "unfrozen base edge missing a typed entry";
            }
        checks.push_back(c);
    }
    {
        CheckResult c = make_check("structure/backbone-adjacency", true);
        c.ran = true;
        c.passed = true;
        for (auto [u, v] : g.edges) {
            const bool upos = rsg.state[u] == CoverState::PositiveBackbone;
            const bool vpos = rsg.state[v] == CoverState::PositiveBackbone;
            if ((upos && rsg.state[v] != CoverState::NegativeBackbone) ||
                (vpos && rsg.state[u] != CoverState::NegativeBackbone)) {
                c.passed = false;
                c.detail = "positive backbone with a non-negative neighbor at edge (" +
                           std::to_string(u) + "," + std::to_string(v) + ")";
                break;
            }
        }
        checks.push_back(c);
    }
    {
        // converse of fact 1; selection-style subspace expressions may violate
        // it, which caps them at Unverified rather than condemning them
        CheckResult c = make_check("structure/fact1-converse", false);
        c.ran = true;
        c.passed = true;
        for (int v = 0; v < g.n; ++v) {
            bool all_neg = true;
            for (int w : g.adj[v])
                if (rsg.state[w] != CoverState::NegativeBackbone) { all_neg = false; break; }
            if (all_neg && rsg.state[v] != CoverState::PositiveBackbone) {
                c.passed = false;
                c.detail = "vertex " + std::to_string(v) +
                           " has only negative neighbors but is not a positive backbone";
                break;
            }
        }
        checks.push_back(c);
    }

    UnfrozenSubgraph us;
    bool us_ok = true;
    try {
        us = unfrozen_subgraph(rsg);
    } catch (const std::exception& e) {
        us_ok = false;
        CheckResult c = make_check("structure/unfrozen-view", true);
        c.ran = true;
        c.passed = false;
        c.detail = e.what();
        checks.push_back(c);
    }
    {
        CheckResult c = make_check("structure/double-matching", false);
        if (us_ok) {
            c.ran = true;
            c.passed = us.fully_matched;
            if (!c.passed) c.detail = "some unfrozen vertex has no mutual-determination partner";
        }
        checks.push_back(c);
    }

    // implied size vs an independent anchor
    int implied = -1;
    if (us_ok) {
        try {
            implied = min_cover_size(rsg);
        } catch (const std::exception&) {
            us_ok = false;
        }
    }
    report.implied_size = implied;
    {
        CheckResult c = make_check("size/anchor", true);
        if (us_ok && g.n <= opt.oracle_bound) {
            const OracleResult oracle = enumerate_min_covers(g, opt.oracle_bound);
            c.ran = true;
            report.anchor = "oracle";
            report.anchor_size = oracle.min_size;
            c.passed = implied == oracle.min_size;
            if (!c.passed)
                c.detail = "implied " + std::to_string(implied) + " vs oracle " +
                           std::to_string(oracle.min_size);
        } else if (us_ok) {
            const LeafRemovalResult lr = leaf_removal(g);
            bool cycles_only = true;
            int cycle_cover = 0;
            std::vector<int> comp_of(lr.core.n, -1);
            for (int s = 0; s < lr.core.n && cycles_only; ++s) {
                if (comp_of[s] != -1) continue;
                std::vector<int> stack{s}, comp;
                comp_of[s] = s;
                bool deg2 = true;
                while (!stack.empty()) {
                    int v = stack.back();
                    stack.pop_back();
                    comp.push_back(v);
                    if (lr.core.degree(v) != 2) deg2 = false;
                    for (int w : lr.core.adj[v])
                        if (comp_of[w] == -1) { comp_of[w] = s; stack.push_back(w); }
                }
                if (!deg2) cycles_only = false;
                else cycle_cover += (int(comp.size()) + 1) / 2;
            }
            if (cycles_only) {
                c.ran = true;
                report.anchor = "leaf_removal";
                report.anchor_size = int(lr.removal_trace.size()) + cycle_cover;
                c.passed = implied == report.anchor_size;
                if (!c.passed)
                    c.detail = "implied " + std::to_string(implied) + " vs leaf-removal " +
                               std::to_string(report.anchor_size);
            } else {
                c.detail = "no anchor: hard leaf-removal core and n > oracle bound";
            }
        }
        checks.push_back(c);
    }

    // decode soundness: sampled consistent assignments are covers of the
    // implied size
    {
        CheckResult c = make_check("decode/sample", true);
        if (us_ok) {
            c.ran = true;
            c.passed = true;
            const TypedGraphView view = view_of(us);
            Rng rng(opt.seed);
            std::vector<char> covered(g.n, 0);
            for (int v = 0; v < g.n; ++v)
                covered[v] = rsg.state[v] == CoverState::NegativeBackbone;
            for (int s = 0; s < opt.decode_samples && c.passed; ++s) {
                std::vector<char> cov = covered;
                try {
                    const std::vector<Fix> a = sample_min_assignment(view, rng);
                    for (int i = 0; i < view.n; ++i) cov[view.base_id[i]] = a[i] == Fix::Covered;
                } catch (const std::exception& e) {
                    c.passed = false;
                    c.detail = std::string("decode failed: ") + e.what();
                    break;
                }
                int size = 0;
                for (int v = 0; v < g.n; ++v) size += cov[v];
                if (size != implied) {
                    c.passed = false;
                    c.detail = "decoded size " + std::to_string(size) + " vs implied " +
                               std::to_string(implied);
                }
                for (auto [u, v] : g.edges)
                    if (!cov[u] && !cov[v]) {
                        c.passed = false;
                        c.detail = "decoded assignment misses edge (" + std::to_string(u) + "," +
                                   std::to_string(v) + ")";
                    }
            }
        }
        checks.push_back(c);
    }

    // full classification comparison against the oracle when it is in reach
    {
        CheckResult c = make_check("oracle/classification", true);
        if (us_ok && g.n <= opt.oracle_bound) {
            const OracleResult oracle = enumerate_min_covers(g, opt.oracle_bound);
            c.ran = true;
            c.passed = true;
            for (int v = 0; v < g.n && c.passed; ++v) {
                const auto& f = oracle.per_vertex_cover_frequency[v];
                const CoverState want = f == 0   ? CoverState::PositiveBackbone
                                        : f == 1 ? CoverState::NegativeBackbone
                                                 : CoverState::Unfrozen;
                if (rsg.state[v] != want) {
                    c.passed = false;
                    c.detail = "state mismatch at vertex " + std::to_string(v);
                }
            }
            const auto mds = oracle_mutual_determinations(g, oracle);
            std::set<std::pair<int, int>> md_set(mds.begin(), mds.end());
            for (const auto& e : rsg.unfrozen_edges) {
                const bool want_double = md_set.count({e.u, e.v}) > 0;
                if ((e.kind == EdgeKind::Double) != want_double) {
                    c.passed = false;
                    c.detail = "edge kind mismatch at (" + std::to_string(e.u) + "," +
                               std::to_string(e.v) + ")";
                }
            }
        }
        checks.push_back(c);
    }

    // verdict
    bool hard_fail = false, soft_fail = false, anchor_ok = false, oracle_ok = false;
    for (const auto& c : checks) {
        if (c.ran && !c.passed) (c.hard ? hard_fail : soft_fail) = true;
        if (c.name == "size/anchor" && c.ran && c.passed) anchor_ok = true;
        if (c.name == "oracle/classification" && c.ran && c.passed) oracle_ok = true;
    }
    if (hard_fail) report.exactness = Exactness::Inexact;
    else if (oracle_ok)
        // a full classification match outranks the soft structural hints
        report.exactness =
            rsg.exactness == Exactness::OracleExact ? Exactness::OracleExact : Exactness::Verified;
    else if (soft_fail) report.exactness = Exactness::Unverified;
    else if (anchor_ok) report.exactness = Exactness::Verified;
    else report.exactness = Exactness::Unverified;
    return report;
}

}  // namespace vc
