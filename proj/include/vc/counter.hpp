// Solution-number counting on typed unfrozen subgraphs: tree and forest
// recursions, influence-range propagation, and cycle-breaking exhaustion on
// the maximal-influence vertex.  Counts are carried in a (covered-size,
// count) algebra so classifications that lack a perfect double matching
// (exact reduced solution graphs of cored graphs) still count correctly; on
// matched inputs it reduces to the plain product/sum recursion.
#pragma once

#include <cstdint>
#include <span>
#include <stdexcept>
#include <vector>

#include "vc/graph.hpp"
#include "vc/rsg.hpp"
#include "vc/types.hpp"

namespace vc {

struct TypedGraphView {
    int n = 0;
    std::vector<std::vector<std::pair<int, EdgeKind>>> adj;  // local ids
    std::vector<int> base_id;                                // local -> base

    void init(int nv) {
        n = nv;
        adj.assign(nv, {});
        base_id.resize(nv);
        for (int i = 0; i < nv; ++i) base_id[i] = i;
    }
    void add_edge(int u, int v, EdgeKind k) {
        adj[u].emplace_back(v, k);
        adj[v].emplace_back(u, k);
    }
    int edge_count() const {
        size_t s = 0;
        for (const auto& a : adj) s += a.size();
        return int(s / 2);
    }
};

TypedGraphView view_of(const UnfrozenSubgraph& us);
TypedGraphView view_of_component(const UnfrozenSubgraph& us, int component);

enum class Fix : std::uint8_t { Free, Covered, Uncovered };

struct CountBudget {
    long long max_exhaustion_vertices = 100000;
    long long max_branches = 1000000;
    enum class OnExceed { Fail, ReturnBounds } on_exceed = OnExceed::Fail;
};

class BudgetExceeded : public std::runtime_error {
  public:
    explicit BudgetExceeded(const std::string& what) : std::runtime_error(what) {}
};

enum class ExhaustStrategy { MaxInfluence, SparsestNearTopLevel };

struct AnalyzeOptions {
    CountBudget budget;
    ExhaustStrategy strategy = ExhaustStrategy::MaxInfluence;
};

struct AnalyzeResult {
    SizedCount total = SizedCount::one();  // min covered total and count at it
    bool complete = true;                  // false when the budget tripped
    BigCount upper = 0;                    // valid upper bound when !complete
    std::uint64_t branches = 0;
    std::uint64_t pruned = 0;
    long long exhausted_vertices = 0;
};

// Core engine: exact min-covered count over assignments of `view` consistent
// with the typed constraints (Double: opposite, Single: not both uncovered)
// and the given unit fixes.
AnalyzeResult analyze(const TypedGraphView& view,
                      std::span<const std::pair<int, Fix>> units,
                      const AnalyzeOptions& opt = {});

// Uniform-ish sample among minimum consistent assignments (exact support,
// approximate weights for huge counts).  Throws if infeasible.
std::vector<Fix> sample_min_assignment(const TypedGraphView& view, Rng& rng);

struct PairCount {
    BigCount s_plus = 1, s_minus = 1;   // counts at the branch-minimal covered size
    int cov_plus = 0, cov_minus = 0;    // covered totals behind those counts
    SizedCount total() const {
        return SizedCount{cov_plus, s_plus} + SizedCount{cov_minus, s_minus};
    }
};

// Rooted tree recursion over one component; throws on cyclic components.
PairCount tree_count(const UnfrozenSubgraph& us, int root_base_id);

// Product over tree components; empty forest counts one. Throws on cycles.
BigCount forest_count(const UnfrozenSubgraph& us);

struct InfluenceResult {
    int i_plus = 0, i_minus = 0, i_total = 0;  // seed counted in both branches
    bool plus_contradiction = false, minus_contradiction = false;
    std::vector<std::pair<int, bool>> forced_plus;   // (base id, covered)
    std::vector<std::pair<int, bool>> forced_minus;
};

InfluenceResult influence_range(const UnfrozenSubgraph& us, int v_base);

struct CountOutcome {
    BigCount count = 0;
    BigCount upper_bound = 0;   // == count when exact
    bool exact = true;
    int min_cover_size = 0;     // implied by the reduced solution graph
    std::uint64_t branches_explored = 0;
    std::uint64_t pruned_branches = 0;
    int contracted_classes = 0;
};

CountOutcome count_solutions(const ReducedSolutionGraph& rsg,
                             const CountBudget& budget = {},
                             ExhaustStrategy strategy = ExhaustStrategy::MaxInfluence,
                             bool allow_unverified = false);

// Count with one vertex pinned; shares the per-component decomposition with
// count_solutions (only the pinned vertex's component is re-analyzed).
CountOutcome count_solutions_conditioned(const ReducedSolutionGraph& rsg, int vertex,
                                         bool covered, const CountBudget& budget = {},
                                         bool allow_unverified = false);

// Natural-log entropy per vertex from the exact big integer.
double entropy_density(const BigCount& count, int n);

int min_cover_size(const ReducedSolutionGraph& rsg);

}  // namespace vc
