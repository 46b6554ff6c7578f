#pragma once

#include <optional>

#include "voltpath/solve.hpp"
#include "voltpath/testkit.hpp"

namespace voltpath::tests {

// Raw random instance with integer costs in [-B, B]; self-loops and parallel
// arcs allowed. Rejected (nullopt) when it contains a negative cycle, so the
// accepted stream has no traversable negative cycle either.
inline std::optional<Graph> random_cycle_free_graph(testkit::Rng& rng, std::uint32_t n,
                                                    std::uint32_t m, std::int64_t capacity) {
    std::vector<Arc> arcs;
    arcs.reserve(m);
    for (std::uint32_t i = 0; i < m; ++i) {
        auto u = static_cast<VertexId>(rng.below(n));
        auto v = static_cast<VertexId>(rng.below(n));
        arcs.push_back({u, v, rng.uniform(-capacity, capacity)});
    }
    Graph g(n, std::move(arcs));
    if (!std::holds_alternative<Potential>(compute_potential(g))) return std::nullopt;
    return g;
}

} // namespace voltpath::tests
