#include "vc/rsg.hpp"

#include <algorithm>
#include <functional>
#include <map>
#include <stdexcept>

#include "json.hpp"

namespace vc {

std::string to_string(CoverState s) {
    switch (s) {
        case CoverState::PositiveBackbone: return "positive";
        case CoverState::NegativeBackbone: return "negative";
        case CoverState::Unfrozen: return "unfrozen";
    }
    return "?";
}

std::string to_string(Exactness e) {
    switch (e) {
        case Exactness::OracleExact: return "oracle_exact";
        case Exactness::Verified: return "verified";
        case Exactness::Unverified: return "unverified";
        case Exactness::Inexact: return "inexact";
    }
    return "?";
}

std::optional<Exactness> exactness_from_string(const std::string& s) {
    if (s == "oracle_exact") return Exactness::OracleExact;
    if (s == "verified") return Exactness::Verified;
    if (s == "unverified") return Exactness::Unverified;
    if (s == "inexact") return Exactness::Inexact;
    return std::nullopt;
}

int ReducedSolutionGraph::count_state(CoverState s) const {
    return static_cast<int>(std::count(state.begin(), state.end(), s));
}

LeafRemovalResult leaf_removal(const Graph& g) {
    LeafRemovalResult res;
    std::vector<int> deg(g.n);
    std::vector<char> active(g.n, 1);
    std::vector<int> queue;
    queue.reserve(g.n);
    for (int v = 0; v < g.n; ++v) {
        deg[v] = g.degree(v);
        if (deg[v] <= 1) queue.push_back(v);
    }
    auto drop = [&](int v) {
        active[v] = 0;
        for (int w : g.adj[v])
            if (active[w] && --deg[w] <= 1) queue.push_back(w);
    };
    for (size_t head = 0; head < queue.size(); ++head) {
        const int v = queue[head];
        if (!active[v]) continue;
        if (deg[v] == 0) {
            res.isolated.push_back(v);
            active[v] = 0;
            continue;
        }
        int u = -1;
        for (int w : g.adj[v])
            if (active[w]) { u = w; break; }
        res.removal_trace.emplace_back(v, u);
        active[v] = 0;  // leaf leaves first so u's cascade skips it
        drop(u);
    }
    for (int v = 0; v < g.n; ++v)
        if (active[v]) res.core_vertices.push_back(v);
    std::vector<int> local(g.n, -1);
    for (size_t i = 0; i < res.core_vertices.size(); ++i) local[res.core_vertices[i]] = int(i);
    std::vector<std::pair<int, int>> core_edges;
    for (auto [u, v] : g.edges)
        if (active[u] && active[v]) core_edges.emplace_back(local[u], local[v]);
    res.core = Graph::from_edges(int(res.core_vertices.size()), std::move(core_edges));
    return res;
}

// Greedy by lowest index, then augmenting paths, so perfect matchings are
// found whenever they exist.  Odd double-cycles (impossible on exact inputs)
// stay unmatched.
std::vector<int> canonical_double_matching(int nv, const std::vector<std::vector<int>>& dadj) {
    std::vector<int> match(nv, -1);
    for (int v = 0; v < nv; ++v) {
        if (match[v] != -1) continue;
        for (int w : dadj[v])
            if (match[w] == -1) { match[v] = w; match[w] = v; break; }
    }
    // augment from leftover vertices (alternating DFS)
    std::vector<char> visited(nv, 0);
    std::function<bool(int)> augment = [&](int v) -> bool {
        for (int w : dadj[v]) {
            if (visited[w]) continue;
            visited[w] = 1;
            if (match[w] == -1 || augment(match[w])) {
                match[v] = w;
                match[w] = v;
                return true;
            }
        }
        return false;
    };
    for (int v = 0; v < nv; ++v) {
        if (match[v] != -1) continue;
        std::fill(visited.begin(), visited.end(), 0);
        visited[v] = 1;
        augment(v);
    }
    return match;
}

int UnfrozenSubgraph::local_index(int base_id) const {
    auto it = std::lower_bound(vertices.begin(), vertices.end(), base_id);
    if (it == vertices.end() || *it != base_id) return -1;
    return int(it - vertices.begin());
}

UnfrozenSubgraph unfrozen_subgraph(const ReducedSolutionGraph& rsg) {
    if (rsg.exactness == Exactness::Inexact)
        throw std::invalid_argument("unfrozen_subgraph: rsg flagged inexact");
    UnfrozenSubgraph us;
    for (int v = 0; v < rsg.base.n; ++v)
        if (rsg.state[v] == CoverState::Unfrozen) us.vertices.push_back(v);
    us.edges = rsg.unfrozen_edges;
    std::sort(us.edges.begin(), us.edges.end(), [](const TypedEdge& a, const TypedEdge& b) {
        return std::tie(a.u, a.v) < std::tie(b.u, b.v);
    });

    const int nv = int(us.vertices.size());
    std::vector<std::vector<int>> adj(nv), dadj(nv);
    for (const auto& e : us.edges) {
        const int lu = us.local_index(e.u), lv = us.local_index(e.v);
        if (lu < 0 || lv < 0)
            throw std::invalid_argument("unfrozen_subgraph: typed edge touches frozen vertex");
        adj[lu].push_back(lv);
        adj[lv].push_back(lu);
        if (e.kind == EdgeKind::Double) {
            dadj[lu].push_back(lv);
            dadj[lv].push_back(lu);
        }
    }

    us.partner = canonical_double_matching(nv, dadj);
    us.fully_matched = nv > 0 ? std::all_of(us.partner.begin(), us.partner.end(),
                                            [](int p) { return p >= 0; })
                              : true;

    std::vector<int> comp(nv, -1);
    for (int s = 0; s < nv; ++s) {
        if (comp[s] != -1) continue;
        const int id = int(us.components.size());
        us.components.emplace_back();
        std::vector<int> stack{s};
        comp[s] = id;
        while (!stack.empty()) {
            const int v = stack.back();
            stack.pop_back();
            us.components[id].push_back(us.vertices[v]);
            for (int w : adj[v])
                if (comp[w] == -1) { comp[w] = id; stack.push_back(w); }
        }
        std::sort(us.components[id].begin(), us.components[id].end());
    }
    return us;
}

LevelDecomposition levels(const UnfrozenSubgraph& us) {
    const int nv = int(us.vertices.size());
    LevelDecomposition ld;
    ld.level.assign(nv, -1);
    ld.core.assign(nv, true);

    // pair list over matched vertices; everything else stays core
    std::vector<int> pair_of(nv, -1);
    std::vector<std::pair<int, int>> pairs;  // local indices, first < second
    for (int v = 0; v < nv; ++v) {
        const int p = us.partner[v];
        if (p > v) {
            pair_of[v] = pair_of[p] = int(pairs.size());
            pairs.emplace_back(v, p);
        }
    }
    // non-matching typed edges act as single connections between pairs
    std::vector<std::vector<int>> links(pairs.size());  // other endpoint, local id
    auto add_link = [&](int lu, int lv) {
        if (pair_of[lu] >= 0) links[pair_of[lu]].push_back(lv);
        if (pair_of[lv] >= 0) links[pair_of[lv]].push_back(lu);
    };
    for (const auto& e : us.edges) {
        const int lu = us.local_index(e.u), lv = us.local_index(e.v);
        if (us.partner[lu] == lv) continue;  // the matched double edge itself
        add_link(lu, lv);
    }

    std::vector<char> alive(pairs.size(), 1);
    std::vector<char> vertex_alive(nv, 1);
    int round = 0;
    while (true) {
        std::vector<int> peel;
        for (size_t p = 0; p < pairs.size(); ++p) {
            if (!alive[p]) continue;
            int external = 0;
            for (int lv : links[p])
                if (vertex_alive[lv]) ++external;
            if (external <= 1) peel.push_back(int(p));
        }
        if (peel.empty()) break;
        if (ld.levels.size() <= size_t(round)) ld.levels.emplace_back();
        for (int p : peel) {
            alive[p] = 0;
            auto [a, b] = pairs[p];
            vertex_alive[a] = vertex_alive[b] = 0;
            ld.level[a] = ld.level[b] = round;
            ld.core[a] = ld.core[b] = false;
            ld.levels[round].emplace_back(us.vertices[a], us.vertices[b]);
        }
        ++round;
    }
    return ld;
}

EvenCycleContraction contract_even_cycles(const UnfrozenSubgraph& us) {
    const int nv = int(us.vertices.size());
    EvenCycleContraction out;
    out.class_of.assign(nv, -1);

    std::vector<int> deg(nv, 0);
    for (const auto& e : us.edges) {
        ++deg[us.local_index(e.u)];
        ++deg[us.local_index(e.v)];
    }

    std::vector<char> contracted_away(nv, 0);
    for (const auto& comp : us.components) {
        // component qualifies when it is a single cycle carried by the
        // matching: every vertex degree 2, matched inside, |E| == |V|, even
        bool ok = comp.size() >= 4 && comp.size() % 2 == 0;
        int edge_count = 0;
        for (int base : comp) {
            const int lv = us.local_index(base);
            if (deg[lv] != 2 || us.partner[lv] < 0) { ok = false; break; }
            edge_count += deg[lv];
        }
        if (!ok || edge_count != int(comp.size()) * 2) continue;

        // alternate cover states around the cycle; state A leaves the lowest
        // vertex uncovered
        const int cls = int(out.classes.size());
        out.classes.emplace_back();
        std::vector<std::pair<int, bool>>& members = out.classes.back();

        std::map<int, std::vector<int>> nb;
        for (const auto& e : us.edges) {
            if (!std::binary_search(comp.begin(), comp.end(), e.u)) continue;
            nb[e.u].push_back(e.v);
            nb[e.v].push_back(e.u);
        }
        const int start = comp.front();
        int prev = -1, cur = start;
        bool covered = false;  // lowest vertex uncovered in state A
        do {
            members.emplace_back(cur, covered);
            out.class_of[us.local_index(cur)] = cls;
            contracted_away[us.local_index(cur)] = 1;
            int next = nb[cur][0] == prev ? nb[cur][1] : nb[cur][0];
            prev = cur;
            cur = next;
            covered = !covered;
        } while (cur != start);
        std::sort(members.begin(), members.end());
        ++out.class_multiplier_exponent;
    }

    // rebuild the contracted view without the cycle components
    UnfrozenSubgraph& c = out.contracted;
    for (int v = 0; v < nv; ++v)
        if (!contracted_away[v]) c.vertices.push_back(us.vertices[v]);
    for (const auto& e : us.edges) {
        if (contracted_away[us.local_index(e.u)]) continue;
        c.edges.push_back(e);
    }
    c.partner.assign(c.vertices.size(), -1);
    for (size_t i = 0; i < c.vertices.size(); ++i) {
        const int old = us.local_index(c.vertices[i]);
        if (us.partner[old] >= 0) {
            const int pb = us.vertices[us.partner[old]];
            c.partner[i] = c.local_index(pb);
        }
    }
    c.fully_matched = c.vertices.empty() ||
                      std::all_of(c.partner.begin(), c.partner.end(), [](int p) { return p >= 0; });
    for (const auto& comp : us.components)
        if (!comp.empty() && !contracted_away[us.local_index(comp.front())])
            c.components.push_back(comp);
    return out;
}

std::string rsg_to_json(const ReducedSolutionGraph& rsg) {
    nlohmann::json j;
    j["n"] = rsg.base.n;
    j["edges"] = nlohmann::json::array();
    for (auto [u, v] : rsg.base.edges) j["edges"].push_back({u, v});
    std::string states;
    states.reserve(rsg.base.n);
    for (auto s : rsg.state)
        states.push_back(s == CoverState::PositiveBackbone ? '+'
                         : s == CoverState::NegativeBackbone ? '-' : '0');
    j["state"] = states;
    j["unfrozen_edges"] = nlohmann::json::array();
    for (const auto& e : rsg.unfrozen_edges)
        j["unfrozen_edges"].push_back({e.u, e.v, e.kind == EdgeKind::Double ? "D" : "S"});
    j["exactness"] = to_string(rsg.exactness);
    j["provenance"] = {{"builder", rsg.builder}, {"seed", rsg.seed}};
    return j.dump(2);
}

ReducedSolutionGraph rsg_from_json(const std::string& text) {
    const auto j = nlohmann::json::parse(text);
    ReducedSolutionGraph rsg;
    std::vector<std::pair<int, int>> edges;
    for (const auto& e : j.at("edges")) edges.emplace_back(e.at(0).get<int>(), e.at(1).get<int>());
    rsg.base = Graph::from_edges(j.at("n").get<int>(), std::move(edges));
    const std::string states = j.at("state").get<std::string>();
    if (int(states.size()) != rsg.base.n) throw std::invalid_argument("rsg json: state length mismatch");
    for (char ch : states) {
        if (ch == '+') rsg.state.push_back(CoverState::PositiveBackbone);
        else if (ch == '-') rsg.state.push_back(CoverState::NegativeBackbone);
        else if (ch == '0') rsg.state.push_back(CoverState::Unfrozen);
        else throw std::invalid_argument("rsg json: bad state char");
    }
    for (const auto& e : j.at("unfrozen_edges")) {
        TypedEdge te;
        te.u = e.at(0).get<int>();
        te.v = e.at(1).get<int>();
        if (te.u > te.v) std::swap(te.u, te.v);
        const std::string kind = e.at(2).get<std::string>();
        te.kind = kind == "D" ? EdgeKind::Double : EdgeKind::Single;
        rsg.unfrozen_edges.push_back(te);
    }
    const auto ex = exactness_from_string(j.at("exactness").get<std::string>());
    if (!ex) throw std::invalid_argument("rsg json: bad exactness tag");
    rsg.exactness = *ex;
    if (j.contains("provenance")) {
        rsg.builder = j["provenance"].value("builder", "");
        rsg.seed = j["provenance"].value("seed", std::uint64_t{0});
    }
    return rsg;
}

}  // namespace vc
