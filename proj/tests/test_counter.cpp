#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <fstream>
#include <sstream>

#include "vc/build.hpp"
#include "vc/counter.hpp"
#include "vc/graph.hpp"
#include "vc/oracle.hpp"

using namespace vc;

namespace {

Graph path(int n) {
    std::vector<std::pair<int, int>> e;
    for (int i = 0; i + 1 < n; ++i) e.emplace_back(i, i + 1);
    return Graph::from_edges(n, std::move(e));
}

Graph cycle(int n) {
    std::vector<std::pair<int, int>> e;
    for (int i = 0; i < n; ++i) e.emplace_back(i, (i + 1) % n);
    return Graph::from_edges(n, std::move(e));
}

Graph load_fixture(const char* name) {
    for (const char* prefix : {"tests/fixtures/", "../tests/fixtures/", "../../tests/fixtures/",
                               "fixtures/", "/root/proj/tests/fixtures/"}) {
        std::ifstream in(std::string(prefix) + name);
        if (!in) continue;
        std::stringstream ss;
        ss << in.rdbuf();
        return parse_edge_list(ss.str());
    }
    throw std::runtime_error(std::string("fixture not found: ") + name);
}

// hand oracle for the chain example: two pairs with a single edge between,
// enumerated over the four pair orientations
int chain_pair_count_by_hand() {
    int count = 0;
    for (int a = 0; a < 2; ++a)
        for (int c = 0; c < 2; ++c) {
            const bool b_unc = a == 1;  // b opposite of a
            const bool c_unc = c == 0;
            if (b_unc && c_unc) continue;  // single edge with both uncovered
            ++count;
        }
    return count;
}

}  // namespace

TEST_CASE("tree_count on an isolated double pair") {
    const UnfrozenSubgraph us = unfrozen_subgraph(build_rsg_oracle(Graph::from_edges(2, {{0, 1}})));
    const PairCount pc = tree_count(us, 0);
    CHECK(pc.s_plus == 1);
    CHECK(pc.s_minus == 1);
    const SizedCount total = pc.total();
    CHECK(total.count == 2);
    CHECK(total.covered == 1);
}

TEST_CASE("tree_count on the two-pair chain equals the hand enumeration") {
    // a=b -single- c=d realized by P4
    const UnfrozenSubgraph us = unfrozen_subgraph(build_rsg_oracle(path(4)));
    const PairCount pc = tree_count(us, 0);
    CHECK(pc.total().count == chain_pair_count_by_hand());
    CHECK(pc.total().count == 3);
    // p_cover(a) = s_minus / total = 1/3 at the root
    CHECK(pc.s_minus == 1);
    CHECK(pc.s_plus == 2);
}

TEST_CASE("tree_count total is root-choice invariant") {
    for (int t = 0; t < 400; ++t) {
        Rng rng(derive_seed(808, t));
        const int n = 3 + int(rng.below(12));
        const Graph g = gen_er(
            GenSpec::erdos_renyi(n, std::min(2.5, double(n - 1)) * rng.unit(), derive_seed(31, t)));
        const ReducedSolutionGraph rsg = build_rsg_oracle(g);
        const UnfrozenSubgraph us = unfrozen_subgraph(rsg);
        for (const auto& comp : us.components) {
            const int edges_inside = [&] {
                int cnt = 0;
                for (const auto& e : us.edges)
                    if (std::binary_search(comp.begin(), comp.end(), e.u)) ++cnt;
                return cnt;
            }();
            if (edges_inside != int(comp.size()) - 1) continue;  // cyclic component
            const SizedCount a = tree_count(us, comp.front()).total();
            const SizedCount b = tree_count(us, comp[rng.below(comp.size())]).total();
            CHECK(a.count == b.count);
            CHECK(a.covered == b.covered);
        }
    }
}

TEST_CASE("forest_count: empty forest and component products") {
    const UnfrozenSubgraph empty = unfrozen_subgraph(build_rsg_oracle(path(3)));
    CHECK(forest_count(empty) == 1);

    // 2 * 3 * 3 from one pair and two chains
    std::vector<std::pair<int, int>> e;
    auto add_path = [&](int base, int len) {
        for (int i = 0; i + 1 < len; ++i) e.emplace_back(base + i, base + i + 1);
    };
    add_path(0, 2);
    add_path(2, 4);
    add_path(6, 4);
    const Graph g = Graph::from_edges(10, std::move(e));
    const UnfrozenSubgraph us = unfrozen_subgraph(build_rsg_oracle(g));
    CHECK(forest_count(us) == 18);

    CHECK_THROWS(forest_count(unfrozen_subgraph(build_rsg_oracle(cycle(4)))));
}

TEST_CASE("influence_range conventions") {
    // isolated pair: both closures fix the pair; the seed counts in both
    const UnfrozenSubgraph pair =
        unfrozen_subgraph(build_rsg_oracle(Graph::from_edges(2, {{0, 1}})));
    const InfluenceResult r = influence_range(pair, 0);
    CHECK(r.i_plus == 2);
    CHECK(r.i_minus == 2);
    CHECK(r.i_total == 4);
    CHECK(!r.plus_contradiction);

    // chain a=b-c=d, seed b uncovered fixes all four
    const UnfrozenSubgraph chain = unfrozen_subgraph(build_rsg_oracle(path(4)));
    const InfluenceResult rb = influence_range(chain, 1);
    CHECK(rb.i_plus == 4);
    CHECK(rb.i_minus == 2);
    CHECK(rb.i_total == 6);
    // the uncovered branch forces a covered, c covered, d uncovered
    bool a_covered = false, c_covered = false, d_uncovered = false;
    for (auto [v, cov] : rb.forced_plus) {
        if (v == 0) a_covered = cov;
        if (v == 2) c_covered = cov;
        if (v == 3) d_uncovered = !cov;
    }
    CHECK(a_covered);
    CHECK(c_covered);
    CHECK(d_uncovered);
}

TEST_CASE("influence_range contradiction branch counts zero") {
    // pairs a=b and c=d with singles b-c and b-d: fixing a covered forces b
    // uncovered, then c and d covered, clashing with the c=d determination
    ReducedSolutionGraph rsg;
    rsg.base = Graph::from_edges(4, {{0, 1}, {1, 2}, {1, 3}, {2, 3}});
    rsg.state.assign(4, CoverState::Unfrozen);
    rsg.unfrozen_edges = {TypedEdge{0, 1, EdgeKind::Double}, TypedEdge{1, 2, EdgeKind::Single},
                          TypedEdge{1, 3, EdgeKind::Single}, TypedEdge{2, 3, EdgeKind::Double}};
    rsg.exactness = Exactness::Unverified;
    const UnfrozenSubgraph us = unfrozen_subgraph(rsg);
    const InfluenceResult r = influence_range(us, 0);
    CHECK(r.minus_contradiction);
    CHECK(r.i_minus == 0);
    CHECK(r.forced_minus.empty());
    CHECK(!r.plus_contradiction);
}

TEST_CASE("count_solutions: K3 via the oracle classification") {
    const CountOutcome out = count_solutions(build_rsg_oracle(cycle(3)));
    CHECK(out.count == 3);
    CHECK(out.min_cover_size == 2);
    CHECK(out.exact);
}

TEST_CASE("count_solutions: committed fixture counts 19 = 18 + 1") {
    const Graph g = load_fixture("fig4.edges");
    REQUIRE(g.n == 14);
    const ReducedSolutionGraph rsg = build_rsg_oracle(g);
    const OracleResult oracle = enumerate_min_covers(g);
    CHECK(oracle.count == 19);

    const CountOutcome total = count_solutions(rsg);
    CHECK(total.count == 19);
    CHECK(total.min_cover_size == oracle.min_size);

    // branch decomposition at the hub vertex
    const CountOutcome covered = count_solutions_conditioned(rsg, 8, true);
    const CountOutcome uncovered = count_solutions_conditioned(rsg, 8, false);
    CHECK(covered.count == 18);
    CHECK(uncovered.count == 1);

    // the hub-covered branch splits into three unfrozen components
    ReducedSolutionGraph cond = rsg;
    cond.state[8] = CoverState::NegativeBackbone;
    std::erase_if(cond.unfrozen_edges,
                  [](const TypedEdge& e) { return e.u == 8 || e.v == 8; });
    const UnfrozenSubgraph us = unfrozen_subgraph(cond);
    CHECK(us.components.size() == 3);
}

TEST_CASE("count_solutions equals the oracle on random small graphs") {
    int checked = 0;
    for (int t = 0; t < 400; ++t) {
        Rng rng(derive_seed(909, t));
        const int n = 4 + int(rng.below(11));
        const double c = rng.unit() * std::min(3.2, double(n - 1));
        const Graph g = gen_er(GenSpec::erdos_renyi(n, c, derive_seed(37, t)));
        const ReducedSolutionGraph rsg = build_rsg_oracle(g);
        const OracleResult oracle = enumerate_min_covers(g);
        const CountOutcome out = count_solutions(rsg);
        CHECK(out.count == oracle.count);
        CHECK(out.min_cover_size == oracle.min_size);
        ++checked;
    }
    CHECK(checked == 400);
}

TEST_CASE("branch completeness: conditioned counts split the total") {
    for (int t = 0; t < 150; ++t) {
        Rng rng(derive_seed(1010, t));
        const int n = 4 + int(rng.below(9));
        const Graph g = gen_er(
            GenSpec::erdos_renyi(n, rng.unit() * std::min(2.8, double(n - 1)), derive_seed(41, t)));
        const ReducedSolutionGraph rsg = build_rsg_oracle(g);
        const CountOutcome total = count_solutions(rsg);
        for (int v = 0; v < n; ++v) {
            if (rsg.state[v] != CoverState::Unfrozen) continue;
            const CountOutcome a = count_solutions_conditioned(rsg, v, true);
            const CountOutcome b = count_solutions_conditioned(rsg, v, false);
            CHECK(a.count + b.count == total.count);
            break;  // one vertex per instance keeps the suite fast
        }
    }
}

TEST_CASE("component multiplicativity under disjoint union") {
    for (int t = 0; t < 150; ++t) {
        Rng rng(derive_seed(1111, t));
        const int n1 = 3 + int(rng.below(7)), n2 = 3 + int(rng.below(7));
        const Graph g1 = gen_er(
            GenSpec::erdos_renyi(n1, rng.unit() * std::min(2.5, double(n1 - 1)), derive_seed(43, t)));
        const Graph g2 = gen_er(
            GenSpec::erdos_renyi(n2, rng.unit() * std::min(2.5, double(n2 - 1)), derive_seed(47, t)));
        std::vector<std::pair<int, int>> edges = g1.edges;
        for (auto [u, v] : g2.edges) edges.emplace_back(u + n1, v + n1);
        const Graph u = Graph::from_edges(n1 + n2, std::move(edges));
        const BigCount prod =
            count_solutions(build_rsg_oracle(g1)).count * count_solutions(build_rsg_oracle(g2)).count;
        CHECK(count_solutions(build_rsg_oracle(u)).count == prod);
    }
}

TEST_CASE("strategies agree and budgets are monotone") {
    for (int t = 0; t < 100; ++t) {
        Rng rng(derive_seed(1212, t));
        const int n = 6 + int(rng.below(9));
        const Graph g = gen_er(
            GenSpec::erdos_renyi(n, rng.unit() * std::min(3.2, double(n - 1)), derive_seed(53, t)));
        const ReducedSolutionGraph rsg = build_rsg_oracle(g);
        const CountOutcome a = count_solutions(rsg, CountBudget{}, ExhaustStrategy::MaxInfluence);
        const CountOutcome b =
            count_solutions(rsg, CountBudget{}, ExhaustStrategy::SparsestNearTopLevel);
        CHECK(a.count == b.count);
        CountBudget big;
        big.max_branches *= 4;
        const CountOutcome c = count_solutions(rsg, big);
        CHECK(c.count == a.count);
    }
}

TEST_CASE("budget exhaustion: fail mode throws, bound mode brackets") {
    const Graph g = gen_er(GenSpec::erdos_renyi(24, 3.0, 91));
    const ReducedSolutionGraph rsg = build_rsg_oracle(g);
    const BigCount exact = count_solutions(rsg).count;

    CountBudget tiny;
    tiny.max_branches = 2;
    CHECK_THROWS_AS(count_solutions(rsg, tiny), BudgetExceeded);

    tiny.on_exceed = CountBudget::OnExceed::ReturnBounds;
    const CountOutcome res = count_solutions(rsg, tiny);
    if (!res.exact) {
        CHECK(res.count <= exact);
        CHECK(res.upper_bound >= exact);
    }
}

TEST_CASE("entropy density") {
    CHECK(entropy_density(BigCount(1), 10) == doctest::Approx(0.0));
    BigCount big = BigCount(1) << 100;
    CHECK(entropy_density(big, 100) == doctest::Approx(std::log(2.0)).epsilon(1e-12));
    CHECK(entropy_density(BigCount(19), 14) == doctest::Approx(std::log(19.0) / 14).epsilon(1e-12));
    CHECK_THROWS(entropy_density(BigCount(0), 5));
}

TEST_CASE("min_cover_size examples") {
    CHECK(min_cover_size(build_rsg_oracle(path(3))) == 1);
    CHECK(min_cover_size(build_rsg_oracle(Graph::from_edges(2, {{0, 1}}))) == 1);
    CHECK(min_cover_size(build_rsg_oracle(cycle(4))) == 2);
}

TEST_CASE("decode soundness via sampling") {
    for (int t = 0; t < 120; ++t) {
        Rng rng(derive_seed(1313, t));
        const int n = 4 + int(rng.below(10));
        const Graph g = gen_er(
            GenSpec::erdos_renyi(n, rng.unit() * std::min(3.0, double(n - 1)), derive_seed(59, t)));
        const ReducedSolutionGraph rsg = build_rsg_oracle(g);
        const UnfrozenSubgraph us = unfrozen_subgraph(rsg);
        const TypedGraphView view = view_of(us);
        const int expect = min_cover_size(rsg);
        for (int s = 0; s < 8; ++s) {
            const std::vector<Fix> a = sample_min_assignment(view, rng);
            std::vector<char> cov(g.n, 0);
            for (int v = 0; v < g.n; ++v) cov[v] = rsg.state[v] == CoverState::NegativeBackbone;
            for (int i = 0; i < view.n; ++i) cov[view.base_id[i]] = a[i] == Fix::Covered;
            int size = 0;
            for (int v = 0; v < g.n; ++v) size += cov[v];
            CHECK(size == expect);
            for (auto [u, v] : g.edges) CHECK((cov[u] || cov[v]));
        }
    }
}
