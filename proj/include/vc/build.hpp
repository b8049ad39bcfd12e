// Reduced-solution-graph construction and verification.
//
// build_rsg_heuristic adds vertices one at a time.  Rule-table cases whose
// exactness is provable from the current classification are applied directly;
// everything else (releasing, odd-cycle environments) goes through a regional
// re-classification driven by cover-size queries on the partly built graph.
// Graphs that develop a hard leaf-removal core fall back to a deterministic
// covered-backbone selection pass, which yields a solution-subspace
// expression in the spirit of the original evolution algorithm.  Heuristic
// output is always Unverified until verify_rsg has run.
#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "vc/counter.hpp"
#include "vc/graph.hpp"
#include "vc/oracle.hpp"
#include "vc/rsg.hpp"

namespace vc {

// Exact minimum-cover sizes of masked induced subgraphs: leaf removal, plus
// cycle cores, plus capped branch-and-bound on small hard cores.
class TauSolver {
  public:
    explicit TauSolver(const Graph& g, int bb_comp_cap = 120, long long bb_node_cap = 20000);

    struct Result {
        int size = 0;
        bool exact = true;
    };
    // tau of the induced subgraph on {v : keep[v]} \ minus
    Result tau(const std::vector<char>& keep, std::span<const int> minus);

    struct CoreInfo {
        int trace_size = 0;             // leaves matched into the cover
        int cycle_cover = 0;            // exact cover demand of cycle components
        std::vector<std::vector<int>> hard_components;  // base ids
    };
    CoreInfo core_info(const std::vector<char>& keep, std::span<const int> minus);

    long long queries = 0;

  private:
    const Graph* g_;
    int bb_comp_cap_;
    long long bb_node_cap_;
    std::vector<int> deg_;
    std::vector<char> alive_;
    std::vector<int> queue_;

    void mask(const std::vector<char>& keep, std::span<const int> minus);
    int run_leaf_removal();
    int bb_min_vc(const std::vector<int>& comp, bool& exact) const;
};

struct BuildReport {
    bool construction_failed = false;
    std::string failure;
    bool latched = false;       // batch selection mode was engaged
    std::string latch_site;
    bool degraded = false;      // some classification fell back to a constructive cover
    int selections = 0;
    long long tau_queries = 0;
    int region_events = 0;      // case (d) regional re-classifications
};

ReducedSolutionGraph build_rsg_oracle(const Graph& g, int bound = kDefaultOracleBound);

ReducedSolutionGraph build_rsg_heuristic(const Graph& g, BuildReport* report = nullptr);

struct CheckResult {
    std::string name;
    bool ran = false;
    bool passed = false;
    bool hard = true;   // hard failures force Inexact; soft ones cap at Unverified
    std::string detail;
};

struct VerificationReport {
    std::vector<CheckResult> checks;
    Exactness exactness = Exactness::Unverified;
    std::string anchor = "none";  // "oracle" | "leaf_removal" | "none"
    int implied_size = -1;
    int anchor_size = -1;

    bool all_ran_passed() const;
    const CheckResult* find(const std::string& name) const;
};

struct VerifyOptions {
    int decode_samples = 64;
    int oracle_bound = kDefaultOracleBound;
    std::uint64_t seed = 0x5eedULL;
};

VerificationReport verify_rsg(const Graph& g, const ReducedSolutionGraph& rsg,
                              const VerifyOptions& opt = {});

}  // namespace vc
