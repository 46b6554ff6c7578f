#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "voltpath/energy.hpp"

namespace voltpath {

using VertexId = std::uint32_t;
using ArcId = std::uint32_t;

struct Arc {
    VertexId tail;
    VertexId head;
    std::int64_t cost;

    friend bool operator==(const Arc&, const Arc&) = default;
};

/// Immutable directed multigraph. Arc ids are positions in the construction
/// order; out_arcs(u) lists them per tail in ascending id order.
class Graph {
  public:
    Graph() = default;
    Graph(VertexId num_vertices, std::vector<Arc> arcs);

    VertexId num_vertices() const { return num_vertices_; }
    std::size_t num_arcs() const { return arcs_.size(); }

    const Arc& arc(ArcId id) const { return arcs_[id]; }
    std::span<const Arc> arcs() const { return arcs_; }
    std::span<const ArcId> out_arcs(VertexId u) const {
        return std::span<const ArcId>(out_arc_ids_).subspan(first_out_[u],
                                                            first_out_[u + 1] - first_out_[u]);
    }

    friend bool operator==(const Graph& a, const Graph& b) {
        return a.num_vertices_ == b.num_vertices_ && a.arcs_ == b.arcs_;
    }

  private:
    VertexId num_vertices_ = 0;
    std::vector<Arc> arcs_;
    std::vector<std::uint32_t> first_out_; // size n+1
    std::vector<ArcId> out_arc_ids_;       // arc ids grouped by tail
};

/// A directed path: the start vertex plus the arc chosen at each step.
/// Recording arc ids keeps parallel arcs apart; the vertex sequence follows
/// from the arcs. An empty arc list is the trivial path at `origin`.
struct Path {
    VertexId origin = 0;
    std::vector<ArcId> arcs;
};

/// True iff consecutive recorded arcs join up and start at `origin`.
bool is_path(const Graph& g, const Path& p);

/// Battery depletion after traversing the path starting fully charged:
/// the left-to-right clamped fold of the arc costs. +inf iff the path is
/// not traversable on a full battery.
EnergyValue path_energetic_cost(const Graph& g, const Path& p, std::int64_t capacity);

/// Minimum initial charge with which the path is traversable, or +inf if no
/// charge <= capacity suffices: the right-to-left clamped fold.
EnergyValue path_initial_charge(const Graph& g, const Path& p, std::int64_t capacity);

/// Restrict arc costs to [-capacity, capacity]: arcs costing more than the
/// capacity can never be traversed and are dropped; costs below -capacity
/// charge a full battery just the same and are raised to -capacity. Energetic
/// costs between all vertex pairs are unchanged. Throws on a negative-cost
/// self-loop, which is a negative cycle.
Graph preprocess_costs(const Graph& g, std::int64_t capacity);

/// Same vertices, every arc flipped, costs and arc ids retained.
Graph reversed(const Graph& g);

} // namespace voltpath
