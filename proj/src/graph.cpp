#include "vc/graph.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <unordered_set>

namespace vc {

Graph Graph::from_edges(int n, std::vector<std::pair<int, int>> edges) {
    if (n < 0) throw std::invalid_argument("negative vertex count");
    for (auto& [u, v] : edges) {
        if (u == v) throw std::invalid_argument("self-loop");
        if (u < 0 || v < 0 || u >= n || v >= n) throw std::invalid_argument("vertex id out of range");
        if (u > v) std::swap(u, v);
    }
    std::sort(edges.begin(), edges.end());
    if (std::adjacent_find(edges.begin(), edges.end()) != edges.end())
        throw std::invalid_argument("duplicate edge");

    Graph g;
    g.n = n;
    g.edges = std::move(edges);
    g.adj.assign(n, {});
    for (auto [u, v] : g.edges) {
        g.adj[u].push_back(v);
        g.adj[v].push_back(u);
    }
    for (auto& a : g.adj) std::sort(a.begin(), a.end());
    return g;
}

bool Graph::has_edge(int u, int v) const {
    if (u > v) std::swap(u, v);
    return std::binary_search(edges.begin(), edges.end(), std::make_pair(u, v));
}

std::uint64_t Rng::below(std::uint64_t n) {
    if (n == 0) throw std::invalid_argument("Rng::below(0)");
    const std::uint64_t limit = UINT64_MAX - UINT64_MAX % n;
    std::uint64_t x;
    do { x = word(); } while (x >= limit);
    return x % n;
}

std::uint64_t derive_seed(std::uint64_t base, std::uint64_t index) {
    std::uint64_t z = base + 0x9e3779b97f4a7c15ULL * (index + 1);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

Graph gen_er(const GenSpec& spec) {
    if (spec.n < 1) throw std::invalid_argument("gen_er: n >= 1 required");
    if (spec.c < 0) throw std::invalid_argument("gen_er: c >= 0 required");
    if (spec.n > 1 && spec.c > spec.n - 1)
        throw std::invalid_argument("gen_er: c > n-1 would need edge probability > 1");

    const double p = spec.n > 1 ? spec.c / (spec.n - 1) : 0.0;
    Rng rng(spec.seed);
    std::vector<std::pair<int, int>> edges;
    if (p >= 1.0) {
        for (int u = 0; u < spec.n; ++u)
            for (int v = u + 1; v < spec.n; ++v) edges.emplace_back(u, v);
        return Graph::from_edges(spec.n, std::move(edges));
    }
    // Integer threshold keeps the Bernoulli draws float-free and portable.
    const auto threshold =
        static_cast<std::uint64_t>(std::llroundl(static_cast<long double>(p) * 18446744073709551616.0L));
    for (int u = 0; u < spec.n; ++u)
        for (int v = u + 1; v < spec.n; ++v)
            if (rng.chance(threshold)) edges.emplace_back(u, v);
    return Graph::from_edges(spec.n, std::move(edges));
}

Graph gen_scale_free(const GenSpec& spec) {
    if (spec.n < 2) throw std::invalid_argument("gen_scale_free: n >= 2 required");
    if (spec.gamma < 2.0) throw std::invalid_argument("gen_scale_free: gamma >= 2 required");

    const int k_min = 1;
    const int k_max = std::max(k_min, static_cast<int>(std::floor(std::sqrt(double(spec.n)))));
    std::vector<double> cdf(k_max - k_min + 1);
    double acc = 0.0;
    for (int k = k_min; k <= k_max; ++k) {
        acc += std::pow(double(k), -spec.gamma);
        cdf[k - k_min] = acc;
    }
    for (auto& x : cdf) x /= acc;

    Rng rng(spec.seed);
    std::vector<int> deg(spec.n);
    long long total = 0;
    for (int v = 0; v < spec.n; ++v) {
        const double u = rng.unit();
        const int k = k_min + int(std::lower_bound(cdf.begin(), cdf.end(), u) - cdf.begin());
        deg[v] = std::min(k, k_max);
        total += deg[v];
    }
    if (total % 2 != 0) {
        // parity fix: lower the first reducible degree, else raise the first
        bool fixed = false;
        for (int v = 0; v < spec.n && !fixed; ++v)
            if (deg[v] > k_min) { --deg[v]; fixed = true; }
        if (!fixed) ++deg[0];
    }

    std::vector<int> stubs;
    stubs.reserve(size_t(total));
    for (int v = 0; v < spec.n; ++v) stubs.insert(stubs.end(), deg[v], v);
    // Fisher-Yates with the portable rng
    for (size_t i = stubs.size(); i > 1; --i) {
        const size_t j = size_t(rng.below(i));
        std::swap(stubs[i - 1], stubs[j]);
    }

    // erased configuration model: self-loops and repeated pairs are dropped
    std::vector<std::pair<int, int>> edges;
    for (size_t i = 0; i + 1 < stubs.size(); i += 2) {
        int u = stubs[i], v = stubs[i + 1];
        if (u == v) continue;
        if (u > v) std::swap(u, v);
        edges.emplace_back(u, v);
    }
    std::sort(edges.begin(), edges.end());
    edges.erase(std::unique(edges.begin(), edges.end()), edges.end());
    return Graph::from_edges(spec.n, std::move(edges));
}

Graph generate(const GenSpec& spec) {
    return spec.kind == GenSpec::Kind::ErdosRenyi ? gen_er(spec) : gen_scale_free(spec);
}

namespace {

[[noreturn]] void fail(ParseError::Kind kind, int line, const std::string& what) {
    throw ParseError(kind, line, "line " + std::to_string(line) + ": " + what);
}

}  // namespace

Graph parse_edge_list(const std::string& text) {
    std::istringstream in(text);
    std::string row;
    int line = 0;
    long long n = -1, m = -1;
    std::vector<std::pair<int, int>> edges;
    std::unordered_set<std::uint64_t> seen;
    while (std::getline(in, row)) {
        ++line;
        std::istringstream ls(row);
        std::string a, b, extra;
        if (!(ls >> a)) continue;  // blank line
        if (!(ls >> b) || (ls >> extra))
            fail(ParseError::Kind::Malformed, line, "expected two whitespace-separated integers");
        long long x, y;
        try {
            size_t pa = 0, pb = 0;
            x = std::stoll(a, &pa);
            y = std::stoll(b, &pb);
            if (pa != a.size() || pb != b.size()) throw std::invalid_argument("");
        } catch (...) {
            fail(ParseError::Kind::Malformed, line, "expected two whitespace-separated integers");
            return {};  // unreachable
        }
        if (n < 0) {
            n = x; m = y;
            if (n < 0 || m < 0) fail(ParseError::Kind::Malformed, line, "negative header");
            continue;
        }
        if (x == y) fail(ParseError::Kind::SelfLoop, line, "self-loop at vertex " + std::to_string(x));
        if (x < 0 || y < 0 || x >= n || y >= n)
            fail(ParseError::Kind::VertexOutOfRange, line,
                 "vertex id out of range [0, " + std::to_string(n) + ")");
        int u = int(std::min(x, y)), v = int(std::max(x, y));
        if (!seen.insert((std::uint64_t(u) << 32) | std::uint64_t(v)).second)
            fail(ParseError::Kind::DuplicateEdge, line, "duplicate edge");
        edges.emplace_back(u, v);
    }
    if (n < 0) fail(ParseError::Kind::Malformed, 1, "missing \"n m\" header");
    if (static_cast<long long>(edges.size()) != m)
        fail(ParseError::Kind::Malformed, line,
             "header promised " + std::to_string(m) + " edges, found " + std::to_string(edges.size()));
    return Graph::from_edges(int(n), std::move(edges));
}

std::string serialize_edge_list(const Graph& g) {
    std::ostringstream out;
    out << g.n << ' ' << g.m() << '\n';
    for (auto [u, v] : g.edges) out << u << ' ' << v << '\n';
    return out.str();
}

Graph parse_dimacs(const std::string& text) {
    std::istringstream in(text);
    std::string row;
    int line = 0;
    long long n = -1, m = -1;
    std::vector<std::pair<int, int>> edges;
    std::unordered_set<std::uint64_t> seen;
    while (std::getline(in, row)) {
        ++line;
        std::istringstream ls(row);
        std::string tag;
        if (!(ls >> tag)) continue;
        if (tag == "c") continue;
        if (tag == "p") {
            std::string kind;
            if (!(ls >> kind >> n >> m) || kind != "edge")
                fail(ParseError::Kind::Malformed, line, "expected \"p edge n m\"");
            continue;
        }
        if (tag == "e") {
            long long x, y;
            if (!(ls >> x >> y)) fail(ParseError::Kind::Malformed, line, "expected \"e u v\"");
            if (n < 0) fail(ParseError::Kind::Malformed, line, "edge before problem line");
            if (x == y) fail(ParseError::Kind::SelfLoop, line, "self-loop at vertex " + std::to_string(x));
            if (x < 1 || y < 1 || x > n || y > n)
                fail(ParseError::Kind::VertexOutOfRange, line, "vertex id out of range [1, n]");
            int u = int(std::min(x, y)) - 1, v = int(std::max(x, y)) - 1;
            if (!seen.insert((std::uint64_t(u) << 32) | std::uint64_t(v)).second)
                fail(ParseError::Kind::DuplicateEdge, line, "duplicate edge");
            edges.emplace_back(u, v);
            continue;
        }
        fail(ParseError::Kind::Malformed, line, "unknown line tag \"" + tag + "\"");
    }
    if (n < 0) fail(ParseError::Kind::Malformed, 1, "missing problem line");
    return Graph::from_edges(int(n), std::move(edges));
}

Graph parse_graph_auto(const std::string& text) {
    for (char ch : text) {
        if (ch == ' ' || ch == '\t' || ch == '\n' || ch == '\r') continue;
        if (ch == 'p' || ch == 'c' || ch == 'e') return parse_dimacs(text);
        break;
    }
    return parse_edge_list(text);
}

}  // namespace vc
