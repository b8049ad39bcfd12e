// Brute-force ground truth: every exactness claim in the repo is anchored on
// this module, so it keeps two independent paths (branch-and-bound and raw
// subset enumeration) that cross-validate each other in the tests.
#pragma once

#include <optional>
#include <stdexcept>
#include <vector>

#include "vc/graph.hpp"
#include "vc/types.hpp"

namespace vc {

class OracleBoundExceeded : public std::runtime_error {
  public:
    explicit OracleBoundExceeded(const std::string& what) : std::runtime_error(what) {}
};

struct OracleResult {
    int min_size = 0;
    BigCount count = 0;
    std::vector<Rational> per_vertex_cover_frequency;
    // aligned with g.edges: number of minimum covers containing both endpoints
    std::vector<BigCount> both_covered;
    // explicit list, capped; absent when count exceeds the cap
    std::optional<std::vector<std::vector<int>>> covers;
};

inline constexpr int kDefaultOracleBound = 24;
inline constexpr std::size_t kDefaultCoverListCap = 4096;

// Branch-and-bound with component decomposition; exact sizes, counts,
// frequencies, and per-edge co-coverage tallies.
OracleResult enumerate_min_covers(const Graph& g, int bound = kDefaultOracleBound,
                                  std::size_t list_cap = kDefaultCoverListCap);

// Independent oracle path: raw subset enumeration (2^n masks).
OracleResult enumerate_min_covers_bruteforce(const Graph& g, int bound = 20,
                                             std::size_t list_cap = kDefaultCoverListCap);

// Adjacent unfrozen pairs whose values are perfectly anti-correlated over all
// minimum covers (never both covered).
std::vector<std::pair<int, int>> oracle_mutual_determinations(const Graph& g,
                                                              const OracleResult& res);

}  // namespace vc
