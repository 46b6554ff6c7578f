#include "voltpath/graph.hpp"

#include <stdexcept>
#include <string>
#include <utility>

namespace voltpath {

Graph::Graph(VertexId num_vertices, std::vector<Arc> arcs)
    : num_vertices_(num_vertices), arcs_(std::move(arcs)) {
    for (std::size_t i = 0; i < arcs_.size(); ++i) {
        if (arcs_[i].tail >= num_vertices_ || arcs_[i].head >= num_vertices_)
            throw std::invalid_argument("arc " + std::to_string(i) +
                                        " references a vertex outside 0.." +
                                        std::to_string(num_vertices_) + "-1");
    }
    // Counting sort by tail, stable in arc id.
    first_out_.assign(static_cast<std::size_t>(num_vertices_) + 1, 0);
    for (const Arc& a : arcs_) ++first_out_[a.tail + 1];
    for (VertexId u = 0; u < num_vertices_; ++u) first_out_[u + 1] += first_out_[u];
    out_arc_ids_.resize(arcs_.size());
    std::vector<std::uint32_t> next(first_out_.begin(), first_out_.end() - 1);
    for (ArcId id = 0; id < arcs_.size(); ++id) out_arc_ids_[next[arcs_[id].tail]++] = id;
}

bool is_path(const Graph& g, const Path& p) {
    if (p.origin >= g.num_vertices()) return false;
    VertexId at = p.origin;
    for (ArcId id : p.arcs) {
        if (id >= g.num_arcs() || g.arc(id).tail != at) return false;
        at = g.arc(id).head;
    }
    return true;
}

EnergyValue path_energetic_cost(const Graph& g, const Path& p, std::int64_t capacity) {
    validate_capacity(capacity);
    EnergyValue acc = EnergyValue::finite(0);
    for (ArcId id : p.arcs)
        acc = clamped_add(acc, EnergyValue::finite(g.arc(id).cost), capacity);
    return acc;
}

EnergyValue path_initial_charge(const Graph& g, const Path& p, std::int64_t capacity) {
    validate_capacity(capacity);
    EnergyValue acc = EnergyValue::finite(0);
    for (auto it = p.arcs.rbegin(); it != p.arcs.rend(); ++it)
        acc = clamped_add(EnergyValue::finite(g.arc(*it).cost), acc, capacity);
    return acc;
}

Graph preprocess_costs(const Graph& g, std::int64_t capacity) {
    validate_capacity(capacity);
    std::vector<Arc> kept;
    kept.reserve(g.num_arcs());
    for (ArcId id = 0; id < g.num_arcs(); ++id) {
        Arc a = g.arc(id);
        if (a.tail == a.head && a.cost < 0)
            throw std::invalid_argument("arc " + std::to_string(id) +
                                        " is a negative-cost self-loop (a negative cycle)");
        if (a.cost > capacity) continue;
        if (a.cost < -capacity) a.cost = -capacity;
        kept.push_back(a);
    }
    return Graph(g.num_vertices(), std::move(kept));
}

Graph reversed(const Graph& g) {
    std::vector<Arc> arcs;
    arcs.reserve(g.num_arcs());
    for (const Arc& a : g.arcs()) arcs.push_back({a.head, a.tail, a.cost});
    return Graph(g.num_vertices(), std::move(arcs));
}

} // namespace voltpath
