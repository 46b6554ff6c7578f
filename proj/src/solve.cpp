#include "voltpath/solve.hpp"

#include <algorithm>
#include <atomic>
#include <deque>
#include <exception>
#include <limits>
#include <mutex>
#include <thread>
#include <utility>

#include "voltpath/heap.hpp"

namespace voltpath {

namespace {

constexpr ArcId kVirtualArc = std::numeric_limits<ArcId>::max();
constexpr std::uint32_t kQueueSentinel = std::numeric_limits<std::uint32_t>::max();

// Single extra arc hung off a virtual source vertex (id = num_vertices).
struct VirtualSourceArc {
    VertexId attach;
    std::int64_t cost;
};

template <typename Relax>
void for_each_out_arc(const Graph& g, const std::optional<VirtualSourceArc>& virt, VertexId u,
                      Relax&& relax) {
    if (virt && u == g.num_vertices()) {
        relax(virt->attach, virt->cost, kVirtualArc);
        return;
    }
    for (ArcId id : g.out_arcs(u)) {
        const Arc& a = g.arc(id);
        relax(a.head, a.cost, id);
    }
}

std::int64_t saturate_to_int64(__int128 v) {
    if (v > std::numeric_limits<std::int64_t>::max()) return std::numeric_limits<std::int64_t>::max();
    if (v < std::numeric_limits<std::int64_t>::min()) return std::numeric_limits<std::int64_t>::min();
    return static_cast<std::int64_t>(v);
}

NegativeCycleReport make_cycle_report(const Graph& g, std::vector<ArcId> arcs) {
    __int128 total = 0;
    for (std::size_t i = 0; i < arcs.size(); ++i) {
        if (arcs[i] >= g.num_arcs()) throw std::logic_error("cycle report references a virtual arc");
        const Arc& cur = g.arc(arcs[i]);
        const Arc& next = g.arc(arcs[(i + 1) % arcs.size()]);
        if (cur.head != next.tail) throw std::logic_error("cycle report arcs do not chain");
        total += cur.cost;
    }
    if (arcs.empty() || total >= 0) throw std::logic_error("cycle report is not a negative cycle");
    return NegativeCycleReport{std::move(arcs), saturate_to_int64(total)};
}

// Walk parent links from `start`; the first repeated vertex closes a cycle.
// Returns the cycle's arcs in forward (arc-direction) order, or empty if the
// chain ends at a root first.
std::vector<ArcId> extract_parent_cycle(const std::vector<std::optional<Predecessor>>& parent,
                                        VertexId start) {
    const std::size_t n = parent.size();
    std::vector<std::int64_t> seen_at(n, -1);
    std::vector<ArcId> walk_arcs;
    VertexId x = start;
    for (std::size_t step = 0; step <= n + 1; ++step) {
        if (seen_at[x] >= 0) {
            std::vector<ArcId> cycle(walk_arcs.begin() + seen_at[x], walk_arcs.end());
            std::reverse(cycle.begin(), cycle.end());
            return cycle;
        }
        seen_at[x] = static_cast<std::int64_t>(walk_arcs.size());
        if (!parent[x]) return {};
        walk_arcs.push_back(parent[x]->arc);
        x = parent[x]->vertex;
    }
    throw std::logic_error("parent walk neither cycled nor reached a root");
}

// Linear scan of the whole parent forest for any cycle.
std::optional<std::vector<ArcId>> find_any_parent_cycle(
    const std::vector<std::optional<Predecessor>>& parent) {
    const std::size_t n = parent.size();
    std::vector<std::uint8_t> state(n, 0); // 0 fresh, 1 on current walk, 2 done
    std::vector<VertexId> chain;
    for (VertexId v = 0; v < n; ++v) {
        if (state[v] != 0) continue;
        chain.clear();
        VertexId x = v;
        while (state[x] == 0) {
            state[x] = 1;
            chain.push_back(x);
            if (!parent[x]) break;
            x = parent[x]->vertex;
        }
        if (state[x] == 1 && parent[x]) {
            // x is on the current walk and has a parent: closed loop.
            std::vector<ArcId> cycle;
            VertexId y = x;
            do {
                cycle.push_back(parent[y]->arc);
                y = parent[y]->vertex;
            } while (y != x);
            std::reverse(cycle.begin(), cycle.end());
            return cycle;
        }
        for (VertexId c : chain) state[c] = 2;
    }
    return std::nullopt;
}

struct CoreSolve {
    std::vector<EnergyValue> depletion;
    std::vector<std::optional<Predecessor>> parent;
    std::vector<std::uint32_t> scans;
};

// FIFO-queue label correction under the clamped addition. Pass k+1 scans the
// vertices enqueued during pass k; once passes 0..N-2 are done every simple
// path has been accounted for, so an improvement at pass >= N-1 certifies a
// reachable negative cycle, extracted by walking the parent links.
std::variant<CoreSolve, NegativeCycleReport> run_bellman_ford(
    const Graph& g, std::int64_t capacity, VertexId source,
    const std::optional<VirtualSourceArc>& virt) {
    const std::uint32_t n = g.num_vertices() + (virt ? 1 : 0);
    CoreSolve r{std::vector<EnergyValue>(n, EnergyValue::pos_inf()),
                std::vector<std::optional<Predecessor>>(n), std::vector<std::uint32_t>(n, 0)};
    r.depletion[source] = EnergyValue::finite(0);

    std::deque<std::uint32_t> queue;
    std::vector<std::uint8_t> in_queue(n, 0);
    queue.push_back(source);
    in_queue[source] = 1;
    queue.push_back(kQueueSentinel);
    std::uint64_t pass = 0;

    std::optional<VertexId> overrun; // vertex improved past the pass bound
    while (!queue.empty() && !overrun) {
        std::uint32_t u = queue.front();
        queue.pop_front();
        if (u == kQueueSentinel) {
            if (queue.empty()) break;
            ++pass;
            queue.push_back(kQueueSentinel);
            continue;
        }
        in_queue[u] = 0;
        ++r.scans[u];
        for_each_out_arc(g, virt, u, [&](VertexId head, std::int64_t cost, ArcId id) {
            if (overrun) return;
            EnergyValue cand = clamped_add(r.depletion[u], EnergyValue::finite(cost), capacity);
            if (cand < r.depletion[head]) {
                r.depletion[head] = cand;
                r.parent[head] = Predecessor{u, id};
                if (pass >= n - 1) {
                    overrun = head;
                    return;
                }
                if (!in_queue[head]) {
                    queue.push_back(head);
                    in_queue[head] = 1;
                }
            }
        });
    }

    if (overrun) {
        std::vector<ArcId> cycle = extract_parent_cycle(r.parent, *overrun);
        if (cycle.empty()) throw std::logic_error("pass overrun without a parent cycle");
        return make_cycle_report(g, std::move(cycle));
    }
    // The clamp at 0 can absorb a negative cycle's gain before the pass bound
    // trips; such a cycle still shows up as a loop in the parent links.
    if (auto cycle = find_any_parent_cycle(r.parent)) return make_cycle_report(g, std::move(*cycle));
    return r;
}

// Label setting with heap keys depletion + potential. Callers guarantee the
// potential is valid, which makes every scan final.
CoreSolve run_dijkstra(const Graph& g, std::int64_t capacity, VertexId source,
                       std::span<const std::int64_t> potential,
                       const std::optional<VirtualSourceArc>& virt) {
    const std::uint32_t n = g.num_vertices() + (virt ? 1 : 0);
    CoreSolve r{std::vector<EnergyValue>(n, EnergyValue::pos_inf()),
                std::vector<std::optional<Predecessor>>(n), std::vector<std::uint32_t>(n, 0)};
    r.depletion[source] = EnergyValue::finite(0);

    IndexedMinHeap<__int128> heap(n);
    std::vector<std::uint8_t> finalized(n, 0);
    heap.insert(source, static_cast<__int128>(potential[source]));
    while (!heap.empty()) {
        std::uint32_t u = heap.delete_min();
        finalized[u] = 1;
        ++r.scans[u];
        for_each_out_arc(g, virt, u, [&](VertexId head, std::int64_t cost, ArcId id) {
            EnergyValue cand = clamped_add(r.depletion[u], EnergyValue::finite(cost), capacity);
            if (cand < r.depletion[head]) {
                if (finalized[head])
                    throw std::logic_error("scanned vertex improved; potential is not valid");
                r.depletion[head] = cand;
                r.parent[head] = Predecessor{u, id};
                __int128 key = static_cast<__int128>(cand.value()) + potential[head];
                if (heap.contains(head))
                    heap.decrease_key(head, key);
                else
                    heap.insert(head, key);
            }
        });
    }
    return r;
}

// Standard Bellman-Ford (plain +) with the same queue/pass scheme. Labels are
// kept in 128 bits: they are sums of at most n arc costs, so nothing the
// capacity validation admits can overflow them. When `super_source` is set a
// virtual vertex with zero-cost arcs to every vertex is the source.
std::variant<std::vector<__int128>, NegativeCycleReport> run_standard_bf(const Graph& g,
                                                                         VertexId source,
                                                                         bool super_source) {
    const std::uint32_t n = g.num_vertices() + (super_source ? 1 : 0);
    if (super_source) source = g.num_vertices();
    constexpr __int128 kUnreached = (static_cast<__int128>(1) << 126);
    std::vector<__int128> dist(n, kUnreached);
    std::vector<std::optional<Predecessor>> parent(n);
    dist[source] = 0;

    std::deque<std::uint32_t> queue;
    std::vector<std::uint8_t> in_queue(n, 0);
    queue.push_back(source);
    in_queue[source] = 1;
    queue.push_back(kQueueSentinel);
    std::uint64_t pass = 0;

    std::optional<VertexId> overrun;
    auto relax = [&](VertexId u, VertexId head, std::int64_t cost, ArcId id) {
        if (overrun) return;
        __int128 cand = dist[u] + cost;
        if (cand < dist[head]) {
            dist[head] = cand;
            parent[head] = Predecessor{u, id};
            if (pass >= n - 1) {
                overrun = head;
                return;
            }
            if (!in_queue[head]) {
                queue.push_back(head);
                in_queue[head] = 1;
            }
        }
    };
    while (!queue.empty() && !overrun) {
        std::uint32_t u = queue.front();
        queue.pop_front();
        if (u == kQueueSentinel) {
            if (queue.empty()) break;
            ++pass;
            queue.push_back(kQueueSentinel);
            continue;
        }
        in_queue[u] = 0;
        if (super_source && u == source) {
            for (VertexId v = 0; v < g.num_vertices(); ++v) relax(u, v, 0, kVirtualArc);
        } else {
            for (ArcId id : g.out_arcs(u)) relax(u, g.arc(id).head, g.arc(id).cost, id);
        }
    }

    if (overrun) {
        std::vector<ArcId> cycle = extract_parent_cycle(parent, *overrun);
        if (cycle.empty()) throw std::logic_error("pass overrun without a parent cycle");
        return make_cycle_report(g, std::move(cycle));
    }
    return dist;
}

SolveResult to_public(CoreSolve&& core, VertexId source) {
    return SolveResult{source, std::move(core.depletion), std::move(core.parent),
                       std::move(core.scans)};
}

// Drop the virtual source row and shift labels back into the b-initial frame.
SolveResult strip_virtual(CoreSolve&& core, VertexId source, std::int64_t offset) {
    std::size_t n = core.depletion.size() - 1;
    core.depletion.resize(n);
    core.parent.resize(n);
    core.scans.resize(n);
    for (auto& d : core.depletion)
        if (d.is_finite()) d = EnergyValue::finite(d.value() - offset);
    core.parent[source].reset(); // was the virtual arc
    return to_public(std::move(core), source);
}

bool has_negative_cost(const Graph& g) {
    for (const Arc& a : g.arcs())
        if (a.cost < 0) return true;
    return false;
}

void require_vertex(const Graph& g, VertexId v, const char* what) {
    if (v >= g.num_vertices()) throw std::invalid_argument(std::string(what) + " out of range");
}

} // namespace

Potential::Potential(const Graph& g, std::vector<std::int64_t> values) : values_(std::move(values)) {
    if (values_.size() != g.num_vertices())
        throw std::invalid_argument("potential size does not match vertex count");
    if (auto bad = first_violation(g, values_))
        throw std::invalid_argument("potential is not valid: arc " + std::to_string(*bad) +
                                    " has negative reduced cost");
}

std::optional<ArcId> Potential::first_violation(const Graph& g,
                                                std::span<const std::int64_t> values) {
    for (ArcId id = 0; id < g.num_arcs(); ++id) {
        const Arc& a = g.arc(id);
        __int128 reduced =
            static_cast<__int128>(a.cost) - values[a.tail] + values[a.head];
        if (reduced < 0) return id;
    }
    return std::nullopt;
}

SolveOutcome energetic_bellman_ford(const Graph& g, std::int64_t capacity, VertexId source) {
    validate_capacity(capacity);
    require_vertex(g, source, "source");
    auto out = run_bellman_ford(g, capacity, source, std::nullopt);
    if (auto* report = std::get_if<NegativeCycleReport>(&out)) return std::move(*report);
    return to_public(std::move(std::get<CoreSolve>(out)), source);
}

SolveResult energetic_dijkstra(const Graph& g, const Potential& p, std::int64_t capacity,
                               VertexId source) {
    validate_capacity(capacity);
    require_vertex(g, source, "source");
    if (p.values().size() != g.num_vertices())
        throw std::invalid_argument("potential size does not match vertex count");
    if (auto bad = Potential::first_violation(g, p.values()))
        throw std::invalid_argument("potential is not valid for this graph: arc " +
                                    std::to_string(*bad));
    return to_public(run_dijkstra(g, capacity, source, p.values(), std::nullopt), source);
}

OrNegativeCycle<std::vector<EnergyValue>> standard_bellman_ford(const Graph& g, VertexId source) {
    require_vertex(g, source, "source");
    auto out = run_standard_bf(g, source, false);
    if (auto* report = std::get_if<NegativeCycleReport>(&out)) return std::move(*report);
    const auto& dist = std::get<std::vector<__int128>>(out);
    constexpr __int128 kUnreached = (static_cast<__int128>(1) << 126);
    std::vector<EnergyValue> result(g.num_vertices(), EnergyValue::pos_inf());
    for (VertexId v = 0; v < g.num_vertices(); ++v)
        if (dist[v] != kUnreached) result[v] = EnergyValue::finite(saturate_to_int64(dist[v]));
    return result;
}

OrNegativeCycle<Potential> compute_potential(const Graph& g) {
    auto out = run_standard_bf(g, 0, true);
    if (auto* report = std::get_if<NegativeCycleReport>(&out)) return std::move(*report);
    const auto& dist = std::get<std::vector<__int128>>(out);
    std::vector<std::int64_t> values(g.num_vertices());
    for (VertexId v = 0; v < g.num_vertices(); ++v) {
        __int128 p = -dist[v]; // distances from the super-source are <= 0
        if (p > std::numeric_limits<std::int64_t>::max())
            throw std::overflow_error("potential exceeds 64 bits; arc costs too large");
        values[v] = static_cast<std::int64_t>(p);
    }
    return Potential(g, std::move(values));
}

std::optional<std::string> find_fixpoint_violation(const Graph& g, std::int64_t capacity,
                                                   const SolveResult& result) {
    validate_capacity(capacity);
    const std::uint32_t n = g.num_vertices();
    if (result.depletion.size() != n || result.parent.size() != n)
        return "result shape does not match the graph";
    if (result.source >= n) return "source out of range";
    if (result.depletion[result.source] != EnergyValue::finite(0))
        return "source label is not 0";

    for (VertexId v = 0; v < n; ++v) {
        const EnergyValue d = result.depletion[v];
        if (d.is_neg_inf()) return "label of vertex " + std::to_string(v) + " is -inf";
        const bool expect_parent = d.is_finite() && v != result.source;
        if (result.parent[v].has_value() != expect_parent)
            return "vertex " + std::to_string(v) +
                   (expect_parent ? " has no path witness" : " must not have a predecessor");
        if (!expect_parent) continue;
        const Predecessor& pre = *result.parent[v];
        if (pre.arc >= g.num_arcs() || g.arc(pre.arc).head != v || g.arc(pre.arc).tail != pre.vertex)
            return "predecessor arc of vertex " + std::to_string(v) + " is inconsistent";
    }

    // Replay every tree path: fold(v) = fold(parent) (+)_B arc cost.
    std::vector<EnergyValue> replay(n, EnergyValue::pos_inf());
    std::vector<std::uint8_t> state(n, 0); // 0 fresh, 1 on walk, 2 replayed
    replay[result.source] = EnergyValue::finite(0);
    state[result.source] = 2;
    std::vector<VertexId> chain;
    for (VertexId v = 0; v < n; ++v) {
        if (!result.depletion[v].is_finite() || state[v] != 0) continue;
        chain.clear();
        VertexId x = v;
        while (state[x] == 0) {
            state[x] = 1;
            chain.push_back(x);
            x = result.parent[x]->vertex;
            if (!result.depletion[x].is_finite())
                return "predecessor of vertex " + std::to_string(chain.back()) + " is unreachable";
        }
        if (state[x] == 1) return "predecessor links contain a cycle";
        for (auto it = chain.rbegin(); it != chain.rend(); ++it) {
            const Predecessor& pre = *result.parent[*it];
            replay[*it] = clamped_add(replay[pre.vertex],
                                      EnergyValue::finite(g.arc(pre.arc).cost), capacity);
            state[*it] = 2;
        }
    }
    for (VertexId v = 0; v < n; ++v)
        if (result.depletion[v].is_finite() && replay[v] != result.depletion[v])
            return "label of vertex " + std::to_string(v) + " does not replay along its tree path";

    for (ArcId id = 0; id < g.num_arcs(); ++id) {
        const Arc& a = g.arc(id);
        EnergyValue relaxed =
            clamped_add(result.depletion[a.tail], EnergyValue::finite(a.cost), capacity);
        if (result.depletion[a.head] > relaxed)
            return "arc " + std::to_string(id) + " can still improve vertex " +
                   std::to_string(a.head);
    }
    return std::nullopt;
}

bool verify_fixpoint(const Graph& g, std::int64_t capacity, const SolveResult& result) {
    return !find_fixpoint_violation(g, capacity, result).has_value();
}

SolveOutcome single_source(const Graph& g, const BatteryConfig& cfg, VertexId source,
                           Algorithm algorithm) {
    require_vertex(g, source, "source");
    const std::int64_t capacity = cfg.capacity();
    const std::int64_t offset = capacity - cfg.initial();
    std::optional<VirtualSourceArc> virt;
    VertexId solve_source = source;
    if (offset > 0) {
        virt = VirtualSourceArc{source, offset};
        solve_source = g.num_vertices();
    }

    // Auto: label setting, with the potential computed only when needed.
    if (algorithm == Algorithm::Auto) algorithm = Algorithm::Dijkstra;

    if (algorithm == Algorithm::BellmanFord) {
        auto out = run_bellman_ford(g, capacity, solve_source, virt);
        if (auto* report = std::get_if<NegativeCycleReport>(&out)) return std::move(*report);
        auto core = std::move(std::get<CoreSolve>(out));
        return virt ? strip_virtual(std::move(core), source, offset)
                    : to_public(std::move(core), source);
    }

    // Label-setting route: derive a potential, then one heap-ordered solve.
    std::vector<std::int64_t> values;
    if (has_negative_cost(g)) {
        auto pot = compute_potential(g);
        if (auto* report = std::get_if<NegativeCycleReport>(&pot)) return std::move(*report);
        auto span = std::get<Potential>(pot).values();
        values.assign(span.begin(), span.end());
    } else {
        values.assign(g.num_vertices(), 0);
    }
    if (virt) {
        // p(s') = p(source) + offset keeps the virtual arc's reduced cost 0
        __int128 lifted = static_cast<__int128>(values[source]) + offset;
        if (lifted > std::numeric_limits<std::int64_t>::max())
            throw std::overflow_error("potential exceeds 64 bits; arc costs too large");
        values.push_back(static_cast<std::int64_t>(lifted));
    }
    auto core = run_dijkstra(g, capacity, solve_source, values, virt);
    return virt ? strip_virtual(std::move(core), source, offset)
                : to_public(std::move(core), source);
}

OrNegativeCycle<std::vector<SolveResult>> all_pairs(const Graph& g, std::int64_t capacity,
                                                    unsigned max_threads) {
    validate_capacity(capacity);
    const std::uint32_t n = g.num_vertices();
    auto pot = compute_potential(g);
    if (auto* report = std::get_if<NegativeCycleReport>(&pot)) return std::move(*report);
    const Potential& potential = std::get<Potential>(pot);

    std::vector<SolveResult> results(n);
    if (n == 0) return results;
    unsigned workers = max_threads ? max_threads : std::thread::hardware_concurrency();
    workers = std::max(1u, std::min<unsigned>(workers, n));

    std::atomic<std::uint32_t> next{0};
    std::exception_ptr failure;
    std::mutex failure_mutex;
    auto body = [&] {
        try {
            for (;;) {
                std::uint32_t s = next.fetch_add(1);
                if (s >= n) break;
                results[s] =
                    to_public(run_dijkstra(g, capacity, s, potential.values(), std::nullopt), s);
            }
        } catch (...) {
            std::lock_guard<std::mutex> lock(failure_mutex);
            if (!failure) failure = std::current_exception();
        }
    };
    if (workers == 1) {
        body();
    } else {
        std::vector<std::thread> pool;
        pool.reserve(workers);
        for (unsigned i = 0; i < workers; ++i) pool.emplace_back(body);
        for (auto& t : pool) t.join();
    }
    if (failure) std::rethrow_exception(failure);
    return results;
}

OrNegativeCycle<std::vector<EnergyValue>> min_initial_charge(const Graph& g, std::int64_t capacity,
                                                             VertexId target) {
    require_vertex(g, target, "target");
    auto out = single_source(reversed(g), BatteryConfig::full(capacity), target, Algorithm::Auto);
    if (auto* report = std::get_if<NegativeCycleReport>(&out)) {
        // Arc ids are shared with g; the walk order flips back.
        std::reverse(report->arcs.begin(), report->arcs.end());
        return make_cycle_report(g, std::move(report->arcs));
    }
    return std::move(std::get<SolveResult>(out).depletion);
}

OrNegativeCycle<std::vector<EnergyValue>> max_final_charge(const Graph& g, std::int64_t capacity,
                                                           VertexId source) {
    auto out = single_source(g, BatteryConfig::full(capacity), source, Algorithm::Auto);
    if (auto* report = std::get_if<NegativeCycleReport>(&out)) return std::move(*report);
    const auto& d = std::get<SolveResult>(out).depletion;
    std::vector<EnergyValue> charge(d.size(), EnergyValue::neg_inf());
    for (std::size_t v = 0; v < d.size(); ++v)
        if (d[v].is_finite()) charge[v] = EnergyValue::finite(capacity - d[v].value());
    return charge;
}

std::optional<Path> tree_path(const SolveResult& result, VertexId v) {
    if (v >= result.depletion.size() || !result.depletion[v].is_finite()) return std::nullopt;
    Path path{result.source, {}};
    std::size_t guard = result.depletion.size();
    VertexId x = v;
    while (x != result.source) {
        if (!result.parent[x] || path.arcs.size() > guard) return std::nullopt;
        path.arcs.push_back(result.parent[x]->arc);
        x = result.parent[x]->vertex;
    }
    std::reverse(path.arcs.begin(), path.arcs.end());
    return path;
}

} // namespace voltpath
