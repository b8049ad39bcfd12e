// Reduced solution graph structures: cover-state classification, typed
// unfrozen edges, leaf removal, leaf-removal levels, even-cycle contraction.
#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "vc/graph.hpp"

namespace vc {

enum class CoverState : std::uint8_t {
    PositiveBackbone,  // uncovered (+1) in every minimum cover
    NegativeBackbone,  // covered (-1) in every minimum cover
    Unfrozen,          // both values occur
};

enum class EdgeKind : std::uint8_t { Double, Single };

enum class Exactness : std::uint8_t { OracleExact, Verified, Unverified, Inexact };

std::string to_string(CoverState s);
std::string to_string(Exactness e);
std::optional<Exactness> exactness_from_string(const std::string& s);

struct TypedEdge {
    int u = 0, v = 0;           // u < v, base vertex ids
    EdgeKind kind = EdgeKind::Single;
    bool operator==(const TypedEdge&) const = default;
};

struct ReducedSolutionGraph {
    Graph base;
    std::vector<CoverState> state;          // per vertex
    std::vector<TypedEdge> unfrozen_edges;  // raw kinds; every base edge between unfrozen vertices
    Exactness exactness = Exactness::Unverified;
    std::string builder;                    // provenance
    std::uint64_t seed = 0;

    int count_state(CoverState s) const;
};

// Normalized view of the unfrozen part.  `partner` carries the canonical
// Double matching (lowest-index alternation on over-saturated structures such
// as fully mutual-determined even cycles); raw kinds stay in `edges`.
struct UnfrozenSubgraph {
    std::vector<int> vertices;              // sorted base ids
    std::vector<TypedEdge> edges;           // raw kinds, base ids
    std::vector<int> partner;               // aligned with vertices; -1 when unmatched
    std::vector<std::vector<int>> components;  // base ids, each sorted; sorted by first vertex
    bool fully_matched = false;

    int local_index(int base_id) const;     // -1 if not unfrozen
};

UnfrozenSubgraph unfrozen_subgraph(const ReducedSolutionGraph& rsg);

// Greedy lowest-index matching plus augmentation over a double-edge adjacency;
// -1 entries stay unmatched (possible only on classifications without a
// perfect mutual-determination matching).
std::vector<int> canonical_double_matching(int n, const std::vector<std::vector<int>>& double_adj);

struct LeafRemovalResult {
    std::vector<std::pair<int, int>> removal_trace;  // (leaf, neighbor-into-cover)
    std::vector<int> isolated;
    Graph core;                    // induced residual, original ids kept via core_vertices
    std::vector<int> core_vertices;
    // cover-size lower bound |removal_trace|; equality when core is empty
};

LeafRemovalResult leaf_removal(const Graph& g);

struct LevelDecomposition {
    std::vector<int> level;           // per unfrozen vertex (aligned with us.vertices); -1 in core
    std::vector<std::vector<std::pair<int, int>>> levels;  // per level: matched pairs (base ids)
    std::vector<bool> core;           // per unfrozen vertex
};

LevelDecomposition levels(const UnfrozenSubgraph& us);

struct EvenCycleContraction {
    UnfrozenSubgraph contracted;
    // class id per unfrozen vertex of the input (-1 when kept);
    // classes list the cycle vertices with their state-A fix (true = covered)
    std::vector<int> class_of;
    std::vector<std::vector<std::pair<int, bool>>> classes;
    int class_multiplier_exponent = 0;   // solution count gains 2^exponent
};

EvenCycleContraction contract_even_cycles(const UnfrozenSubgraph& us);

std::string rsg_to_json(const ReducedSolutionGraph& rsg);
ReducedSolutionGraph rsg_from_json(const std::string& text);

}  // namespace vc
