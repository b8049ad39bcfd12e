#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <set>

#include "vc/graph.hpp"

using namespace vc;

namespace {

bool graph_invariants_hold(const Graph& g) {
    std::set<std::pair<int, int>> seen;
    for (auto [u, v] : g.edges) {
        if (u == v) return false;
        if (u < 0 || v < 0 || u >= g.n || v >= g.n || u >= v) return false;
        if (!seen.insert({u, v}).second) return false;
    }
    // adjacency symmetric and consistent with the edge set
    std::size_t adj_total = 0;
    for (int v = 0; v < g.n; ++v) adj_total += g.adj[v].size();
    if (adj_total != 2 * g.edges.size()) return false;
    for (auto [u, v] : g.edges)
        if (!g.has_edge(u, v) || !g.has_edge(v, u)) return false;
    return true;
}

}  // namespace

TEST_CASE("gen_er trivial cases") {
    const Graph empty = gen_er(GenSpec::erdos_renyi(4, 0.0, 7));
    CHECK(empty.n == 4);
    CHECK(empty.m() == 0);

    const Graph k3 = gen_er(GenSpec::erdos_renyi(3, 2.0, 7));
    CHECK(k3.m() == 3);  // p = 1 forces all edges

    CHECK_THROWS(gen_er(GenSpec::erdos_renyi(4, 3.5, 7)));  // c > n-1
}

TEST_CASE("generator determinism") {
    for (int trial = 0; trial < 50; ++trial) {
        const auto spec = GenSpec::erdos_renyi(60, 1.7, 1000 + trial);
        CHECK(gen_er(spec) == gen_er(spec));
        const auto sf = GenSpec::scale_free(60, 2.5, 2000 + trial);
        CHECK(gen_scale_free(sf) == gen_scale_free(sf));
    }
}

TEST_CASE("gen_er mean degree concentrates (pooled over 100 seeds)") {
    double total_deg = 0;
    const int n = 5000, seeds = 100;
    for (int s = 0; s < seeds; ++s) {
        const Graph g = gen_er(GenSpec::erdos_renyi(n, 2.0, derive_seed(42, s)));
        total_deg += 2.0 * g.m() / n;
    }
    const double mean = total_deg / seeds;
    CHECK(mean > 1.94);
    CHECK(mean < 2.06);
}

TEST_CASE("gen_er degree histogram matches Poisson (chi-square p > 0.001)") {
    // pooled over instances; the regularized upper incomplete gamma gives the
    // chi-square tail probability
    auto gamma_q = [](double a, double x) {
        if (x < a + 1.0) {
            double sum = 1.0 / a, term = sum;
            for (int i = 1; i < 500; ++i) {
                term *= x / (a + i);
                sum += term;
                if (term < sum * 1e-15) break;
            }
            return 1.0 - sum * std::exp(-x + a * std::log(x) - std::lgamma(a));
        }
        double b = x + 1 - a, c = 1e300, d = 1 / b, h = d;
        for (int i = 1; i < 500; ++i) {
            const double an = -i * (i - a);
            b += 2;
            d = an * d + b;
            if (std::fabs(d) < 1e-300) d = 1e-300;
            c = b + an / c;
            if (std::fabs(c) < 1e-300) c = 1e-300;
            d = 1 / d;
            const double del = d * c;
            h *= del;
            if (std::fabs(del - 1) < 1e-15) break;
        }
        return std::exp(-x + a * std::log(x) - std::lgamma(a)) * h;
    };

    const int n = 5000, instances = 30;
    for (double c : {1.0, 2.0, 3.0}) {
        std::vector<long long> hist(40, 0);
        long long total = 0;
        for (int s = 0; s < instances; ++s) {
            const Graph g = gen_er(GenSpec::erdos_renyi(n, c, derive_seed(99, s)));
            for (int v = 0; v < n; ++v) {
                const int d = std::min(g.degree(v), 39);
                ++hist[d];
                ++total;
            }
        }
        // expected Poisson counts, tail pooled into the last used bin
        double chi2 = 0;
        int dof = -1;
        double pk = std::exp(-c);
        double tail = 1.0;
        for (int kk = 0; kk < 39; ++kk) {
            const double expect = pk * total;
            if (expect >= 5.0) {
                chi2 += (hist[kk] - expect) * (hist[kk] - expect) / expect;
                ++dof;
            }
            tail -= pk;
            pk *= c / (kk + 1);
        }
        const double p = gamma_q(dof / 2.0, chi2 / 2.0);
        INFO("c=", c, " chi2=", chi2, " dof=", dof, " p=", p);
        CHECK(p > 0.001);
    }
}

TEST_CASE("scale-free generator") {
    SUBCASE("n=2 gives the only two simple graphs") {
        const Graph g = gen_scale_free(GenSpec::scale_free(2, 3.0, 5));
        CHECK(g.n == 2);
        CHECK(g.m() <= 1);
    }
    SUBCASE("invariants hold across random specs") {
        for (int t = 0; t < 30; ++t) {
            const Graph g = gen_scale_free(GenSpec::scale_free(200 + 37 * t, 2.0 + 0.05 * t, t));
            CHECK(graph_invariants_hold(g));
        }
    }
    SUBCASE("log-log degree slope near -gamma") {
        // pooled histogram over a few instances, fit over the low-k range
        const double gamma = 2.5;
        std::vector<long long> hist(101, 0);
        for (int s = 0; s < 10; ++s) {
            const Graph g = gen_scale_free(GenSpec::scale_free(10000, gamma, derive_seed(7, s)));
            for (int v = 0; v < g.n; ++v)
                if (g.degree(v) >= 1 && g.degree(v) <= 100) ++hist[g.degree(v)];
        }
        double sx = 0, sy = 0, sxx = 0, sxy = 0;
        int pts = 0;
        for (int kk = 1; kk <= 20; ++kk) {
            if (hist[kk] < 20) continue;
            const double x = std::log(double(kk)), y = std::log(double(hist[kk]));
            sx += x;
            sy += y;
            sxx += x * x;
            sxy += x * y;
            ++pts;
        }
        REQUIRE(pts >= 5);
        const double slope = (pts * sxy - sx * sy) / (pts * sxx - sx * sx);
        INFO("fitted slope ", slope);
        CHECK(std::fabs(slope + gamma) < 0.3);
    }
}

TEST_CASE("random er graphs satisfy invariants") {
    for (int t = 0; t < 200; ++t) {
        Rng rng(derive_seed(5150, t));
        const int n = 2 + int(rng.below(60));
        const double c = rng.unit() * std::min(4.0, double(n - 1));
        const Graph g = gen_er(GenSpec::erdos_renyi(n, c, derive_seed(17, t)));
        CHECK(graph_invariants_hold(g));
    }
}

TEST_CASE("edge list round trip and errors") {
    const Graph p3 = parse_edge_list("3 2\n0 1\n1 2\n");
    CHECK(p3.n == 3);
    CHECK(p3.edges == std::vector<std::pair<int, int>>{{0, 1}, {1, 2}});

    CHECK_THROWS_AS(parse_edge_list("2 1\n0 0\n"), ParseError);
    try {
        parse_edge_list("2 1\n0 0\n");
    } catch (const ParseError& e) {
        CHECK(e.kind == ParseError::Kind::SelfLoop);
        CHECK(e.line == 2);
    }
    try {
        parse_edge_list("2 1\n0 5\n");
    } catch (const ParseError& e) {
        CHECK(e.kind == ParseError::Kind::VertexOutOfRange);
    }
    try {
        parse_edge_list("3 2\n0 1\n1 0\n");
    } catch (const ParseError& e) {
        CHECK(e.kind == ParseError::Kind::DuplicateEdge);
    }
    try {
        parse_edge_list("3 1\n0 x\n");
    } catch (const ParseError& e) {
        CHECK(e.kind == ParseError::Kind::Malformed);
    }

    const Graph k3 = gen_er(GenSpec::erdos_renyi(3, 2.0, 1));
    CHECK(parse_edge_list(serialize_edge_list(k3)) == k3);

    for (int t = 0; t < 100; ++t) {
        const int n = 2 + t % 40;
        const Graph g = gen_er(GenSpec::erdos_renyi(n, std::min(1.5, double(n - 1)), derive_seed(3, t)));
        CHECK(parse_edge_list(serialize_edge_list(g)) == g);
    }
}

TEST_CASE("dimacs reader") {
    const Graph g = parse_dimacs("c comment\np edge 3 2\ne 1 2\ne 2 3\n");
    CHECK(g.n == 3);
    CHECK(g.edges == std::vector<std::pair<int, int>>{{0, 1}, {1, 2}});
    CHECK(parse_graph_auto("p edge 2 1\ne 1 2\n").m() == 1);
    CHECK(parse_graph_auto("2 1\n0 1\n").m() == 1);
}

TEST_CASE("isolated vertices survive the header") {
    const Graph g = parse_edge_list("5 1\n2 3\n");
    CHECK(g.n == 5);
    CHECK(g.degree(0) == 0);
}
