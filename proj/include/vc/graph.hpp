// Undirected simple graphs, seeded generators for the two ensembles, and
// edge-list / DIMACS file formats.
#pragma once

#include <cstdint>
#include <random>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace vc {

struct Graph {
    int n = 0;
    std::vector<std::pair<int, int>> edges;   // u < v, sorted, unique
    std::vector<std::vector<int>> adj;        // sorted neighbor lists

    static Graph from_edges(int n, std::vector<std::pair<int, int>> edges);

    int m() const { return static_cast<int>(edges.size()); }
    int degree(int v) const { return static_cast<int>(adj[v].size()); }
    bool has_edge(int u, int v) const;

    bool operator==(const Graph& o) const { return n == o.n && edges == o.edges; }
};

struct GenSpec {
    enum class Kind { ErdosRenyi, ScaleFree };
    Kind kind = Kind::ErdosRenyi;
    int n = 0;
    double c = 0.0;       // mean degree (ErdosRenyi)
    double gamma = 2.5;   // exponent (ScaleFree)
    std::uint64_t seed = 0;

    static GenSpec erdos_renyi(int n, double c, std::uint64_t seed) {
        return {Kind::ErdosRenyi, n, c, 0.0, seed};
    }
    static GenSpec scale_free(int n, double gamma, std::uint64_t seed) {
        return {Kind::ScaleFree, n, 0.0, gamma, seed};
    }
};

// All randomness flows through mt19937_64 (bit-exact per the standard); the
// integer helpers below avoid std::*_distribution, whose outputs vary across
// standard library implementations.
class Rng {
  public:
    explicit Rng(std::uint64_t seed) : eng_(seed) {}
    std::uint64_t word() { return eng_(); }
    // uniform in [0, n), n >= 1, by rejection
    std::uint64_t below(std::uint64_t n);
    double unit() { return static_cast<double>(word() >> 11) * 0x1.0p-53; }
    // true with probability threshold / 2^64
    bool chance(std::uint64_t threshold) { return word() < threshold; }

  private:
    std::mt19937_64 eng_;
};

// Independent per-instance stream for ensemble runs (splitmix64 mix).
std::uint64_t derive_seed(std::uint64_t base, std::uint64_t index);

Graph gen_er(const GenSpec& spec);
Graph gen_scale_free(const GenSpec& spec);
Graph generate(const GenSpec& spec);

class ParseError : public std::runtime_error {
  public:
    enum class Kind { Malformed, VertexOutOfRange, DuplicateEdge, SelfLoop };
    ParseError(Kind kind, int line, const std::string& msg)
        : std::runtime_error(msg), kind(kind), line(line) {}
    Kind kind;
    int line;
};

// "n m" header then one "u v" pair per line, 0-indexed.
Graph parse_edge_list(const std::string& text);
std::string serialize_edge_list(const Graph& g);

// DIMACS-like: "p edge n m" and "e u v" lines, 1-indexed.
Graph parse_dimacs(const std::string& text);

// Dispatches on the first token ("p"/"c" selects DIMACS).
Graph parse_graph_auto(const std::string& text);

}  // namespace vc
