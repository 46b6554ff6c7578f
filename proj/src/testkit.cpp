#include "voltpath/testkit.hpp"

#include <algorithm>
#include <stdexcept>
#include <unordered_set>
#include <utility>

namespace voltpath::testkit {

namespace {

constexpr std::uint32_t kOracleVertexLimit = 12;

void require_oracle_size(const Graph& g) {
    if (g.num_vertices() > kOracleVertexLimit)
        throw std::invalid_argument("oracle instances are limited to 12 vertices");
}

void require_vertex(const Graph& g, VertexId v, const char* what) {
    if (v >= g.num_vertices()) throw std::invalid_argument(std::string(what) + " out of range");
}

} // namespace

std::uint64_t Rng::below(std::uint64_t bound) {
    if (bound == 0) throw std::invalid_argument("Rng::below(0)");
    std::uint64_t threshold = (0 - bound) % bound;
    for (;;) {
        std::uint64_t r = engine_();
        if (r >= threshold) return r % bound;
    }
}

std::int64_t Rng::uniform(std::int64_t lo, std::int64_t hi) {
    if (lo > hi) throw std::invalid_argument("Rng::uniform: empty range");
    std::uint64_t span = static_cast<std::uint64_t>(hi) - static_cast<std::uint64_t>(lo) + 1;
    if (span == 0) throw std::invalid_argument("Rng::uniform: full-width range unsupported");
    return static_cast<std::int64_t>(static_cast<std::uint64_t>(lo) + below(span));
}

GeneratedInstance generate(const GeneratorSpec& spec) {
    validate_capacity(spec.capacity);
    if (spec.potential_range < 0 || spec.reduced_cost_range < 0)
        throw std::invalid_argument("generator ranges must be non-negative");
    if (spec.m > 0 && spec.n < 2)
        throw std::invalid_argument("arcs need at least two vertices (no self-loops generated)");
    const std::uint64_t max_simple =
        static_cast<std::uint64_t>(spec.n) * (spec.n > 0 ? spec.n - 1 : 0);
    if (!spec.allow_parallel && spec.m > max_simple)
        throw std::invalid_argument("too many arcs for a simple graph");

    Rng rng(spec.seed);
    std::vector<std::int64_t> potential(spec.n);
    for (auto& p : potential) p = rng.uniform(-spec.potential_range, spec.potential_range);

    std::unordered_set<std::uint64_t> used;
    std::vector<Arc> arcs;
    arcs.reserve(spec.m);
    for (std::uint32_t i = 0; i < spec.m; ++i) {
        VertexId u, v;
        for (;;) {
            u = static_cast<VertexId>(rng.below(spec.n));
            v = static_cast<VertexId>(rng.below(spec.n - 1));
            if (v >= u) ++v;
            if (spec.allow_parallel) break;
            std::uint64_t key = static_cast<std::uint64_t>(u) * spec.n + v;
            if (used.insert(key).second) break;
        }
        std::int64_t reduced = rng.uniform(0, spec.reduced_cost_range);
        arcs.push_back({u, v, reduced + potential[u] - potential[v]});
    }

    Graph graph = preprocess_costs(Graph(spec.n, std::move(arcs)), spec.capacity);
    Potential certified(graph, std::move(potential));
    return GeneratedInstance{std::move(graph), std::move(certified)};
}

EnergyValue oracle_min_energetic(const Graph& g, std::int64_t capacity, VertexId source,
                                 VertexId target) {
    validate_capacity(capacity);
    require_oracle_size(g);
    require_vertex(g, source, "source");
    require_vertex(g, target, "target");
    if (source == target) return EnergyValue::finite(0); // the only simple path is empty

    EnergyValue best = EnergyValue::pos_inf();
    std::vector<bool> visited(g.num_vertices(), false);
    visited[source] = true;
    auto dfs = [&](auto&& self, VertexId v, EnergyValue acc) -> void {
        for (ArcId id : g.out_arcs(v)) {
            const Arc& a = g.arc(id);
            EnergyValue cand = clamped_add(acc, EnergyValue::finite(a.cost), capacity);
            if (cand.is_pos_inf()) continue; // +inf absorbs every extension
            if (a.head == target) {
                best = std::min(best, cand);
            } else if (!visited[a.head]) {
                visited[a.head] = true;
                self(self, a.head, cand);
                visited[a.head] = false;
            }
        }
    };
    dfs(dfs, source, EnergyValue::finite(0));
    return best;
}

EnergyValue oracle_min_initial(const Graph& g, std::int64_t capacity, VertexId source,
                               VertexId target) {
    validate_capacity(capacity);
    require_oracle_size(g);
    require_vertex(g, source, "source");
    require_vertex(g, target, "target");

    auto feasible = [&](std::int64_t charge) {
        auto out = single_source(g, BatteryConfig(capacity, charge), source,
                                 Algorithm::BellmanFord);
        if (std::holds_alternative<NegativeCycleReport>(out))
            throw std::invalid_argument("oracle requires a graph without negative cycles");
        return std::get<SolveResult>(out).depletion[target].is_finite();
    };
    if (!feasible(capacity)) return EnergyValue::pos_inf();
    std::int64_t lo = 0, hi = capacity;
    while (lo < hi) {
        std::int64_t mid = lo + (hi - lo) / 2;
        if (feasible(mid))
            hi = mid;
        else
            lo = mid + 1;
    }
    return EnergyValue::finite(lo);
}

bool admits_target_tree(const Graph& g, std::int64_t capacity, VertexId target) {
    require_oracle_size(g);
    require_vertex(g, target, "target");
    const std::uint32_t n = g.num_vertices();

    std::vector<EnergyValue> optimum(n);
    for (VertexId u = 0; u < n; ++u) optimum[u] = oracle_min_energetic(g, capacity, u, target);

    std::vector<VertexId> routed; // vertices that must be routed into target
    for (VertexId u = 0; u < n; ++u)
        if (u != target && optimum[u].is_finite()) routed.push_back(u);
    if (routed.empty()) return true;

    double combinations = 1;
    for (VertexId u : routed) combinations *= static_cast<double>(g.out_arcs(u).size());
    if (combinations > 1e7)
        throw std::invalid_argument("target-tree search space too large");

    std::vector<ArcId> choice(n, 0); // chosen out-arc per routed vertex
    auto realizes_optimum = [&](VertexId start) {
        EnergyValue acc = EnergyValue::finite(0);
        VertexId at = start;
        for (std::uint32_t steps = 0; steps <= n; ++steps) {
            if (at == target) return acc == optimum[start];
            if (!optimum[at].is_finite()) return false; // no assignment here
            ArcId id = choice[at];
            acc = clamped_add(acc, EnergyValue::finite(g.arc(id).cost), capacity);
            at = g.arc(id).head;
        }
        return false; // looped
    };
    auto search = [&](auto&& self, std::size_t i) -> bool {
        if (i == routed.size()) {
            for (VertexId u : routed)
                if (!realizes_optimum(u)) return false;
            return true;
        }
        for (ArcId id : g.out_arcs(routed[i])) {
            choice[routed[i]] = id;
            if (self(self, i + 1)) return true;
        }
        return false;
    };
    return search(search, 0);
}

std::optional<TargetTreeWitness> find_no_target_tree_witness(std::uint32_t max_n) {
    if (max_n < 4) return std::nullopt;

    // Mountain-pass instance: from a the battery arrives at b empty, so the
    // direct arc bt is unusable and only the recharging detour b->c->t works;
    // from b itself the direct arc is the unique optimum.
    constexpr std::int64_t kCapacity = 3;
    const VertexId a = 0, b = 1, c = 2, t = 3;
    Graph graph(4, {{a, b, 3}, {b, t, 1}, {b, c, -2}, {c, t, 2}});

    TargetTreeWitness witness{graph, kCapacity, t, {}, {}};
    for (VertexId u = 0; u < graph.num_vertices(); ++u)
        witness.optimum.push_back(oracle_min_energetic(graph, kCapacity, u, t));

    if (admits_target_tree(graph, kCapacity, t))
        throw std::logic_error("stored witness unexpectedly admits a target tree");
    witness.log.push_back("no per-vertex successor assignment realizes all optima into vertex " +
                          std::to_string(t + 1));
    for (VertexId s = 0; s < graph.num_vertices(); ++s) {
        auto out = energetic_bellman_ford(graph, kCapacity, s);
        const auto& solved = std::get<SolveResult>(out);
        if (!verify_fixpoint(graph, kCapacity, solved))
            throw std::logic_error("stored witness lacks a single-source tree");
        for (VertexId v = 0; v < graph.num_vertices(); ++v)
            if (solved.depletion[v] != oracle_min_energetic(graph, kCapacity, s, v))
                throw std::logic_error("stored witness solve disagrees with the oracle");
        witness.log.push_back("source " + std::to_string(s + 1) +
                              " has a verified tree of minimum paths");
    }
    return witness;
}

} // namespace voltpath::testkit
