#pragma once

#include <cstdint>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "voltpath/graph.hpp"
#include "voltpath/solve.hpp"

namespace voltpath::testkit {

/// Seeded random source with platform-independent bounded draws.
class Rng {
  public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    std::uint64_t next() { return engine_(); }

    /// Uniform in [0, bound), bound > 0; modulo-rejection keeps it unbiased.
    std::uint64_t below(std::uint64_t bound);

    /// Uniform in [lo, hi] inclusive.
    std::int64_t uniform(std::int64_t lo, std::int64_t hi);

    bool chance(double p) { return below(1u << 20) < p * (1u << 20); }

  private:
    std::mt19937_64 engine_;
};

/// Recipe for a random instance that is free of negative cycles by
/// construction: pick a potential p, pick reduced costs r >= 0, and set each
/// arc cost to r + p(tail) - p(head). Every cycle then sums to >= 0.
struct GeneratorSpec {
    std::uint32_t n = 0;
    std::uint32_t m = 0;
    std::int64_t capacity = 0;
    std::int64_t potential_range = 0;    // p(v) drawn from [-range, range]
    std::int64_t reduced_cost_range = 0; // r drawn from [0, range]
    std::uint64_t seed = 0;
    bool allow_parallel = true;
};

struct GeneratedInstance {
    Graph graph;
    Potential potential; // certified valid for `graph`
};

/// Deterministic for a fixed spec; costs end up preprocessed into
/// [-capacity, capacity]. Throws std::invalid_argument on infeasible specs.
GeneratedInstance generate(const GeneratorSpec& spec);

/// Exact minimum energetic cost over all simple source-target paths, +inf if
/// none is traversable. Exponential enumeration; limited to 12 vertices.
/// Matches the solvers whenever the graph has no traversable negative cycle.
EnergyValue oracle_min_energetic(const Graph& g, std::int64_t capacity, VertexId source,
                                 VertexId target);

/// Smallest initial charge b with which the target is reachable, found by
/// binary search over b (feasibility is monotone: starting with more charge
/// keeps every prefix of a witness path traversable). +inf if even a full
/// battery fails. Limited to 12 vertices.
EnergyValue oracle_min_initial(const Graph& g, std::int64_t capacity, VertexId source,
                               VertexId target);

/// Exhaustively checks whether one outgoing arc can be fixed per vertex so
/// that every vertex that can reach `target` does so along a minimum
/// energetic path through its chosen arcs.
bool admits_target_tree(const Graph& g, std::int64_t capacity, VertexId target);

/// A small instance on which no single choice of per-vertex successor arcs
/// realizes all minimum energetic paths into the target, although each
/// single-source problem has a perfectly good tree.
struct TargetTreeWitness {
    Graph graph;
    std::int64_t capacity = 0;
    VertexId target = 0;
    std::vector<EnergyValue> optimum; // per-source minimum into target
    std::vector<std::string> log;     // what was verified
};

/// Verifies and returns the stored witness instance (4 vertices); nullopt if
/// max_n is too small to admit one.
std::optional<TargetTreeWitness> find_no_target_tree_witness(std::uint32_t max_n);

} // namespace voltpath::testkit
