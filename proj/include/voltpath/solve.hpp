#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "voltpath/energy.hpp"
#include "voltpath/graph.hpp"

namespace voltpath {

/// How a vertex was reached: the preceding vertex and the arc taken from it.
struct Predecessor {
    VertexId vertex;
    ArcId arc;

    friend bool operator==(const Predecessor&, const Predecessor&) = default;
};

/// Per-vertex output of a single-source solve. depletion[v] is the energetic
/// cost from the source (+inf if unreachable), parent encodes a tree of
/// minimum energetic paths rooted at the source, scans counts how often each
/// vertex was scanned (diagnostics; at most 1 for the label-setting solver).
struct SolveResult {
    VertexId source = 0;
    std::vector<EnergyValue> depletion;
    std::vector<std::optional<Predecessor>> parent;
    std::vector<std::uint32_t> scans;
};

/// Witness for a reachable negative cycle: arcs forming a closed walk whose
/// costs sum to total_cost < 0.
struct NegativeCycleReport {
    std::vector<ArcId> arcs;
    std::int64_t total_cost = 0;
};

template <typename T>
using OrNegativeCycle = std::variant<T, NegativeCycleReport>;

using SolveOutcome = OrNegativeCycle<SolveResult>;

/// Per-vertex integers p with c(uv) - p(u) + p(v) >= 0 on every arc; the
/// constructor rejects anything else. Such a function exists iff the graph
/// has no negative cycle.
class Potential {
  public:
    Potential(const Graph& g, std::vector<std::int64_t> values);

    std::int64_t operator[](VertexId v) const { return values_[v]; }
    std::span<const std::int64_t> values() const { return values_; }

    /// First arc violating validity for g, if any.
    static std::optional<ArcId> first_violation(const Graph& g,
                                                std::span<const std::int64_t> values);

  private:
    std::vector<std::int64_t> values_;
};

enum class Algorithm { BellmanFord, Dijkstra, Auto };

/// Label-correcting single-source solve from a fully charged battery.
/// FIFO-queue passes relax arcs under the clamped addition; a relaxation
/// still firing once every simple path length is exhausted yields a
/// NegativeCycleReport instead of a result.
SolveOutcome energetic_bellman_ford(const Graph& g, std::int64_t capacity, VertexId source);

/// Label-setting single-source solve from a fully charged battery. Heap keys
/// are depletion[v] + p(v); with a valid potential each vertex is scanned at
/// most once. Throws std::invalid_argument if p is not valid for g.
SolveResult energetic_dijkstra(const Graph& g, const Potential& p, std::int64_t capacity,
                               VertexId source);

/// Plain shortest-path distances from `source` (no battery, +inf where
/// unreachable), or a negative cycle reachable from it. Used for potentials
/// and as a lower-bound oracle.
OrNegativeCycle<std::vector<EnergyValue>> standard_bellman_ford(const Graph& g, VertexId source);

/// Valid potential from standard distances off a virtual super-source with a
/// zero-cost arc to every vertex, or the negative cycle that prevents one.
OrNegativeCycle<Potential> compute_potential(const Graph& g);

/// Certifies a solve: true iff depletion[source] = 0, every finite label
/// replays exactly along the parent tree, and no arc can improve any label.
/// A passing result is exactly the set of minimum energetic costs.
bool verify_fixpoint(const Graph& g, std::int64_t capacity, const SolveResult& result);

/// Like verify_fixpoint but reports what failed.
std::optional<std::string> find_fixpoint_violation(const Graph& g, std::int64_t capacity,
                                                   const SolveResult& result);

/// Minimum energetic costs from `source` with initial charge cfg.initial():
/// solved through a virtual pre-source arc of cost B-b, labels shifted back
/// by B-b. Labels may be negative when the journey nets charge.
SolveOutcome single_source(const Graph& g, const BatteryConfig& cfg, VertexId source,
                           Algorithm algorithm = Algorithm::Auto);

/// One potential computation plus one label-setting solve per source.
/// max_threads = 0 uses the hardware concurrency.
OrNegativeCycle<std::vector<SolveResult>> all_pairs(const Graph& g, std::int64_t capacity,
                                                    unsigned max_threads = 0);

/// Minimum initial charge at every vertex sufficient to reach `target`:
/// one single-source solve from `target` on the reversed graph.
OrNegativeCycle<std::vector<EnergyValue>> min_initial_charge(const Graph& g,
                                                             std::int64_t capacity,
                                                             VertexId target);

/// Maximum final charge at every vertex starting fully charged at `source`;
/// -inf where travel is impossible.
OrNegativeCycle<std::vector<EnergyValue>> max_final_charge(const Graph& g, std::int64_t capacity,
                                                           VertexId source);

/// Parent-tree path from the solve's source to v, if v is reachable.
std::optional<Path> tree_path(const SolveResult& result, VertexId v);

} // namespace voltpath
