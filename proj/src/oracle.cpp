#include "vc/oracle.hpp"

#include <algorithm>
#include <cstdint>
#include <map>
#include <numeric>

namespace vc {

namespace {

// one connected component, local ids
struct CompGraph {
    int n = 0;
    std::vector<std::vector<int>> adj;
    std::vector<std::pair<int, int>> edges;
    std::vector<int> to_base;
};

enum class Mark : std::uint8_t { Free, In, Out };

struct CompOracle {
    const CompGraph& g;
    std::vector<Mark> mark;
    int best = 0;

    // counting phase tallies
    unsigned long long count = 0;
    std::vector<unsigned long long> covered_count;
    std::vector<unsigned long long> both_count;  // per edge
    std::vector<std::vector<int>> covers;        // capped
    std::size_t list_cap = 0;
    bool list_ok = true;

    explicit CompOracle(const CompGraph& graph) : g(graph), mark(graph.n, Mark::Free) {}

    int greedy_matching_lb() {
        std::vector<char> used(g.n, 0);
        int lb = 0;
        for (auto [u, v] : g.edges)
            if (mark[u] != Mark::In && mark[v] != Mark::In && !used[u] && !used[v]) {
                used[u] = used[v] = 1;
                ++lb;
            }
        return lb;
    }

    // picks a free vertex on an uncovered edge, max residual degree, low id
    int pick() {
        int best_v = -1, best_deg = -1;
        for (auto [u, v] : g.edges) {
            if (mark[u] == Mark::In || mark[v] == Mark::In) continue;
            for (int x : {u, v}) {
                if (mark[x] != Mark::Free) continue;
                int deg = 0;
                for (int w : g.adj[x])
                    if (mark[w] != Mark::In) ++deg;
                if (deg > best_deg) {
                    best_deg = deg;
                    best_v = x;
                }
            }
        }
        return best_v;
    }

    bool edges_all_covered() {
        for (auto [u, v] : g.edges)
            if (mark[u] != Mark::In && mark[v] != Mark::In) return false;
        return true;
    }

    void search_min(int size) {
        if (size >= best) return;
        if (edges_all_covered()) {
            best = size;
            return;
        }
        if (size + greedy_matching_lb() >= best) return;
        const int v = pick();
        // v covered
        mark[v] = Mark::In;
        search_min(size + 1);
        mark[v] = Mark::Free;
        // v uncovered: all free neighbors forced in; uncovered neighbor pairs prune
        std::vector<int> forced;
        bool ok = true;
        for (int w : g.adj[v]) {
            if (mark[w] == Mark::In) continue;
            if (mark[w] == Mark::Out) { ok = false; break; }
            mark[w] = Mark::In;
            forced.push_back(w);
        }
        if (ok) {
            mark[v] = Mark::Out;
            search_min(size + int(forced.size()));
            mark[v] = Mark::Free;
        }
        for (int w : forced) mark[w] = Mark::Free;
    }

    void record_leaf(int size) {
        if (size != best) return;
        ++count;
        std::vector<int> cov;
        for (int v = 0; v < g.n; ++v)
            if (mark[v] == Mark::In) {
                ++covered_count[v];
                cov.push_back(v);
            }
        for (size_t e = 0; e < g.edges.size(); ++e)
            if (mark[g.edges[e].first] == Mark::In && mark[g.edges[e].second] == Mark::In)
                ++both_count[e];
        if (list_ok && covers.size() < list_cap) covers.push_back(std::move(cov));
        else list_ok = false;
    }

    void search_count(int size) {
        if (size > best) return;
        if (edges_all_covered()) {
            record_leaf(size);
            return;
        }
        if (size + greedy_matching_lb() > best) return;
        const int v = pick();
        mark[v] = Mark::In;
        search_count(size + 1);
        mark[v] = Mark::Free;
        std::vector<int> forced;
        bool ok = true;
        for (int w : g.adj[v]) {
            if (mark[w] == Mark::In) continue;
            if (mark[w] == Mark::Out) { ok = false; break; }
            mark[w] = Mark::In;
            forced.push_back(w);
        }
        if (ok) {
            mark[v] = Mark::Out;
            search_count(size + int(forced.size()));
            mark[v] = Mark::Free;
        }
        for (int w : forced) mark[w] = Mark::Free;
    }

    void run(std::size_t cap) {
        list_cap = cap;
        covered_count.assign(g.n, 0);
        both_count.assign(g.edges.size(), 0);
        best = g.n;
        search_min(0);
        std::fill(mark.begin(), mark.end(), Mark::Free);
        search_count(0);
    }
};

std::vector<CompGraph> split_components(const Graph& g) {
    std::vector<int> comp(g.n, -1);
    std::vector<CompGraph> out;
    for (int s = 0; s < g.n; ++s) {
        if (comp[s] != -1) continue;
        const int id = int(out.size());
        out.emplace_back();
        std::vector<int> stack{s}, members;
        comp[s] = id;
        while (!stack.empty()) {
            const int v = stack.back();
            stack.pop_back();
            members.push_back(v);
            for (int w : g.adj[v])
                if (comp[w] == -1) { comp[w] = id; stack.push_back(w); }
        }
        std::sort(members.begin(), members.end());
        CompGraph& cg = out.back();
        cg.n = int(members.size());
        cg.to_base = members;
        cg.adj.assign(cg.n, {});
        std::map<int, int> local;
        for (int i = 0; i < cg.n; ++i) local[members[i]] = i;
        for (auto [u, v] : g.edges) {
            if (comp[u] != id) continue;
            const int lu = local[u], lv = local[v];
            cg.edges.emplace_back(lu, lv);
            cg.adj[lu].push_back(lv);
            cg.adj[lv].push_back(lu);
        }
    }
    return out;
}

}  // namespace

OracleResult enumerate_min_covers(const Graph& g, int bound, std::size_t list_cap) {
    if (g.n > bound)
        throw OracleBoundExceeded("oracle bound exceeded: n=" + std::to_string(g.n) +
                                  " > bound=" + std::to_string(bound));
    OracleResult res;
    res.per_vertex_cover_frequency.assign(g.n, Rational(0));
    res.both_covered.assign(g.edges.size(), BigCount(0));
    res.count = 1;
    res.min_size = 0;

    const auto comps = split_components(g);
    std::vector<CompOracle> solved;
    solved.reserve(comps.size());
    for (const auto& cg : comps) {
        solved.emplace_back(cg);
        solved.back().run(list_cap);
        res.min_size += solved.back().best;
        res.count *= BigCount(solved.back().count);
    }

    // frequencies factorize over components
    std::map<std::pair<int, int>, std::size_t> edge_index;
    for (std::size_t e = 0; e < g.edges.size(); ++e) edge_index[g.edges[e]] = e;
    for (std::size_t ci = 0; ci < comps.size(); ++ci) {
        const auto& cg = comps[ci];
        const auto& so = solved[ci];
        const BigCount other = res.count / BigCount(so.count);
        for (int v = 0; v < cg.n; ++v)
            res.per_vertex_cover_frequency[cg.to_base[v]] =
                Rational(BigCount(so.covered_count[v]), BigCount(so.count));
        for (std::size_t e = 0; e < cg.edges.size(); ++e) {
            auto key = std::make_pair(cg.to_base[cg.edges[e].first], cg.to_base[cg.edges[e].second]);
            if (key.first > key.second) std::swap(key.first, key.second);
            res.both_covered[edge_index.at(key)] = BigCount(so.both_count[e]) * other;
        }
    }

    // explicit list: cross product of component lists while under the cap
    bool listable = res.count <= BigCount(std::uint64_t(list_cap));
    for (const auto& so : solved)
        if (!so.list_ok) listable = false;
    if (listable) {
        std::vector<std::vector<int>> acc{{}};
        for (std::size_t ci = 0; ci < comps.size(); ++ci) {
            std::vector<std::vector<int>> next;
            for (const auto& partial : acc)
                for (const auto& cov : solved[ci].covers) {
                    auto item = partial;
                    for (int v : cov) item.push_back(comps[ci].to_base[v]);
                    next.push_back(std::move(item));
                }
            acc = std::move(next);
        }
        for (auto& cov : acc) std::sort(cov.begin(), cov.end());
        std::sort(acc.begin(), acc.end());
        res.covers = std::move(acc);
    }
    return res;
}

OracleResult enumerate_min_covers_bruteforce(const Graph& g, int bound, std::size_t list_cap) {
    if (g.n > bound)
        throw OracleBoundExceeded("bruteforce oracle bound exceeded: n=" + std::to_string(g.n));
    OracleResult res;
    res.per_vertex_cover_frequency.assign(g.n, Rational(0));
    res.both_covered.assign(g.edges.size(), BigCount(0));

    const std::uint64_t total = std::uint64_t(1) << g.n;
    auto is_cover = [&](std::uint64_t mask) {
        for (auto [u, v] : g.edges)
            if (!((mask >> u) & 1) && !((mask >> v) & 1)) return false;
        return true;
    };
    int best = g.n;
    for (std::uint64_t mask = 0; mask < total; ++mask)
        if (is_cover(mask)) best = std::min(best, __builtin_popcountll(mask));
    res.min_size = best;

    unsigned long long count = 0;
    std::vector<unsigned long long> covered(g.n, 0), both(g.edges.size(), 0);
    std::vector<std::vector<int>> list;
    bool list_ok = true;
    for (std::uint64_t mask = 0; mask < total; ++mask) {
        if (__builtin_popcountll(mask) != res.min_size || !is_cover(mask)) continue;
        ++count;
        std::vector<int> cov;
        for (int v = 0; v < g.n; ++v)
            if ((mask >> v) & 1) {
                ++covered[v];
                cov.push_back(v);
            }
        for (std::size_t e = 0; e < g.edges.size(); ++e)
            if (((mask >> g.edges[e].first) & 1) && ((mask >> g.edges[e].second) & 1)) ++both[e];
        if (list_ok && list.size() < list_cap) list.push_back(std::move(cov));
        else list_ok = false;
    }
    res.count = BigCount(count);
    for (int v = 0; v < g.n; ++v)
        res.per_vertex_cover_frequency[v] = Rational(BigCount(covered[v]), BigCount(count));
    for (std::size_t e = 0; e < g.edges.size(); ++e) res.both_covered[e] = BigCount(both[e]);
    if (list_ok) res.covers = std::move(list);
    return res;
}

std::vector<std::pair<int, int>> oracle_mutual_determinations(const Graph& g,
                                                              const OracleResult& res) {
    std::vector<std::pair<int, int>> out;
    for (std::size_t e = 0; e < g.edges.size(); ++e) {
        const auto [u, v] = g.edges[e];
        const auto& fu = res.per_vertex_cover_frequency[u];
        const auto& fv = res.per_vertex_cover_frequency[v];
        const bool u_unfrozen = fu != 0 && fu != 1;
        const bool v_unfrozen = fv != 0 && fv != 1;
        if (u_unfrozen && v_unfrozen && res.both_covered[e] == 0) out.emplace_back(u, v);
    }
    return out;
}

}  // namespace vc
