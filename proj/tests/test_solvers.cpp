#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>

#include "support.hpp"
#include "voltpath/heap.hpp"
#include "voltpath/solve.hpp"
#include "voltpath/testkit.hpp"

using namespace voltpath;
namespace tk = voltpath::testkit;

namespace {

EnergyValue fin(std::int64_t v) { return EnergyValue::finite(v); }
const EnergyValue kInf = EnergyValue::pos_inf();

const SolveResult& solved(const SolveOutcome& out) {
    REQUIRE(std::holds_alternative<SolveResult>(out));
    return std::get<SolveResult>(out);
}

// Mountain pass from the problem statement: climb then an equal descent.
Graph mountain_pass() { return Graph(3, {{0, 1, 3}, {1, 2, -3}}); }

void check_cycle_report(const Graph& g, const NegativeCycleReport& report) {
    REQUIRE(!report.arcs.empty());
    std::int64_t total = 0;
    for (std::size_t i = 0; i < report.arcs.size(); ++i) {
        const Arc& cur = g.arc(report.arcs[i]);
        const Arc& next = g.arc(report.arcs[(i + 1) % report.arcs.size()]);
        CHECK(cur.head == next.tail);
        total += cur.cost;
    }
    CHECK(total == report.total_cost);
    CHECK(total < 0);
}

} // namespace

TEST_CASE("indexed heap orders by key then id") {
    IndexedMinHeap<__int128> heap(6);
    for (std::uint32_t id : {3u, 1u, 5u, 0u}) heap.insert(id, 7);
    heap.insert(2, 9);
    heap.decrease_key(2, 1);
    CHECK(heap.delete_min() == 2);
    CHECK(heap.delete_min() == 0);
    CHECK(heap.delete_min() == 1);
    CHECK(heap.contains(5));
    CHECK(heap.delete_min() == 3);
    CHECK(heap.delete_min() == 5);
    CHECK(heap.empty());
}

TEST_CASE("label correction on hand instances") {
    SUBCASE("single arc") {
        Graph g(2, {{0, 1, 5}});
        auto r = solved(energetic_bellman_ford(g, 10, 0));
        CHECK(r.depletion[1] == fin(5));
        CHECK(r.parent[1] == Predecessor{0, 0});
        CHECK_FALSE(r.parent[0].has_value());
    }
    SUBCASE("mountain pass costs nothing overall") {
        auto r = solved(energetic_bellman_ford(mountain_pass(), 3, 0));
        CHECK(r.depletion[2] == fin(0));
        CHECK(r.depletion[1] == fin(3));
    }
    SUBCASE("all routes blocked by the capacity") {
        // direct arc costs 4 > B, detour needs 2 (+) 2 = inf
        Graph raw(3, {{0, 2, 4}, {0, 1, 2}, {1, 2, 2}});
        Graph g = preprocess_costs(raw, 3);
        CHECK(g.num_arcs() == 2);
        auto r = solved(energetic_bellman_ford(g, 3, 0));
        CHECK(r.depletion[2] == kInf);
        CHECK_FALSE(r.parent[2].has_value());
    }
}

TEST_CASE("label correction agrees with the path-enumeration oracle") {
    tk::Rng rng(1234);
    int accepted = 0;
    while (accepted < 400) {
        std::int64_t B = rng.uniform(1, 8);
        auto n = static_cast<std::uint32_t>(rng.uniform(2, 8));
        auto m = static_cast<std::uint32_t>(rng.below(17));
        auto g = tests::random_cycle_free_graph(rng, n, m, B);
        if (!g) continue;
        ++accepted;
        auto s = static_cast<VertexId>(rng.below(n));
        auto r = solved(energetic_bellman_ford(*g, B, s));
        for (VertexId t = 0; t < n; ++t)
            CHECK(r.depletion[t] == tk::oracle_min_energetic(*g, B, s, t));
        CHECK(verify_fixpoint(*g, B, r));
    }
}

TEST_CASE("full-length improvement chains do not trip the cycle detector") {
    // the last legitimate improvement lands exactly one pass under the bound
    Graph g(6, {{0, 5, 5}, {0, 1, 0}, {1, 2, 0}, {2, 3, 0}, {3, 4, 0}, {4, 5, 0}});
    auto r = solved(energetic_bellman_ford(g, 5, 0));
    CHECK(r.depletion[5] == fin(0));
}

TEST_CASE("negative cycle reporting") {
    SUBCASE("pumping cycle feeds a climb") {
        // the 2-cycle recharges until the second climb becomes traversable
        Graph g(4, {{0, 1, 2}, {1, 2, -1}, {2, 1, -1}, {1, 3, 2}});
        auto out = energetic_bellman_ford(g, 2, 0);
        REQUIRE(std::holds_alternative<NegativeCycleReport>(out));
        check_cycle_report(g, std::get<NegativeCycleReport>(out));
    }
    SUBCASE("absorbed cycle still yields correct labels") {
        // full battery caps the gain, so labels settle and stay exact
        Graph g(3, {{0, 1, 0}, {1, 2, -1}, {2, 1, 0}});
        auto r = solved(energetic_bellman_ford(g, 5, 0));
        CHECK(r.depletion[1] == fin(0));
        CHECK(r.depletion[2] == fin(0));
        CHECK(verify_fixpoint(g, 5, r));
        // the potential route spots the cycle instead
        auto pot = compute_potential(g);
        REQUIRE(std::holds_alternative<NegativeCycleReport>(pot));
        check_cycle_report(g, std::get<NegativeCycleReport>(pot));
    }
    SUBCASE("cycle surviving only in the parent links is reported") {
        // with b = 0 the run loops 0 -> 1 -> 0 to net charge; padding keeps
        // the pass counter under its bound, the parent loop gives it away
        Graph g(5, {{0, 1, -5}, {1, 0, 1}});
        auto out = single_source(g, BatteryConfig(5, 0), 0, Algorithm::BellmanFord);
        REQUIRE(std::holds_alternative<NegativeCycleReport>(out));
        check_cycle_report(g, std::get<NegativeCycleReport>(out));
    }
    SUBCASE("standard solver reports any reachable negative cycle") {
        Graph g(3, {{0, 1, 1}, {1, 2, -3}, {2, 1, 1}});
        auto out = standard_bellman_ford(g, 0);
        REQUIRE(std::holds_alternative<NegativeCycleReport>(out));
        check_cycle_report(g, std::get<NegativeCycleReport>(out));
    }
}

TEST_CASE("fixpoint verifier") {
    SUBCASE("accepts solver output, rejects perturbations") {
        tk::Rng rng(777);
        int rejected = 0;
        for (int round = 0; round < 60; ++round) {
            tk::GeneratorSpec spec{6, 10, 5, 3, 2, 4000 + static_cast<std::uint64_t>(round), true};
            auto inst = tk::generate(spec);
            auto r = solved(energetic_bellman_ford(inst.graph, 5, 0));
            REQUIRE(verify_fixpoint(inst.graph, 5, r));

            std::vector<VertexId> finite;
            for (VertexId v = 0; v < 6; ++v)
                if (r.depletion[v].is_finite()) finite.push_back(v);
            VertexId v = finite[rng.below(finite.size())];
            SolveResult broken = r;
            broken.depletion[v] = fin(broken.depletion[v].value() - 1);
            auto violation = find_fixpoint_violation(inst.graph, 5, broken);
            CHECK(violation.has_value());
            rejected += violation.has_value();
        }
        CHECK(rejected == 60);
    }
    SUBCASE("labels must be witnessed by paths") {
        Graph g(2, {{0, 1, 1}});
        SolveResult fake{0,
                         {fin(0), kInf},
                         {std::nullopt, std::nullopt},
                         {1, 0}};
        // arc 0 could still improve vertex 1: not a fixpoint
        auto violation = find_fixpoint_violation(g, 5, fake);
        REQUIRE(violation.has_value());
        CHECK(violation->find("arc 0") != std::string::npos);

        // a finite label without a predecessor has no witness
        fake.depletion[1] = fin(1);
        CHECK_FALSE(verify_fixpoint(g, 5, fake));
        fake.parent[1] = Predecessor{0, 0};
        CHECK(verify_fixpoint(g, 5, fake));
    }
}

TEST_CASE("potential computation") {
    SUBCASE("non-negative costs give the zero potential") {
        Graph g(3, {{0, 1, 2}, {1, 2, 0}});
        auto p = std::get<Potential>(compute_potential(g));
        CHECK(p[0] == 0);
        CHECK(p[1] == 0);
        CHECK(p[2] == 0);
    }
    SUBCASE("negative arc lifts the head") {
        Graph g(2, {{0, 1, -2}});
        auto p = std::get<Potential>(compute_potential(g));
        CHECK(p[0] == 0);
        CHECK(p[1] == 2);
    }
    SUBCASE("generated graphs always admit one") {
        for (std::uint64_t seed = 0; seed < 50; ++seed) {
            tk::GeneratorSpec spec{7, 14, 6, 4, 2, seed, true};
            auto inst = tk::generate(spec);
            CHECK(std::holds_alternative<Potential>(compute_potential(inst.graph)));
        }
    }
    SUBCASE("constructor rejects invalid values") {
        Graph g(2, {{0, 1, -2}});
        CHECK_THROWS_AS(Potential(g, {0, 0}), std::invalid_argument);
        CHECK_THROWS_AS(Potential(g, {0}), std::invalid_argument);
        CHECK_NOTHROW(Potential(g, {0, 2}));
    }
}

TEST_CASE("label setting matches label correction") {
    SUBCASE("mountain pass, one scan per vertex") {
        Graph g = mountain_pass();
        auto p = std::get<Potential>(compute_potential(g));
        auto r = energetic_dijkstra(g, p, 3, 0);
        CHECK(r.depletion[2] == fin(0));
        for (VertexId v = 0; v < 3; ++v) CHECK(r.scans[v] <= 1);
    }
    SUBCASE("invalid potential is rejected up front") {
        Graph g(2, {{0, 1, -2}});
        Potential p(Graph(2, {}), {0, 0}); // valid for the arcless graph only
        CHECK_THROWS_AS(energetic_dijkstra(g, p, 3, 0), std::invalid_argument);
    }
    SUBCASE("zero potential on non-negative costs acts as capped Dijkstra") {
        tk::Rng rng(31);
        for (int round = 0; round < 200; ++round) {
            tk::GeneratorSpec spec{7, 12, 9, 0, 6, 9000 + static_cast<std::uint64_t>(round), true};
            auto inst = tk::generate(spec); // potential_range 0 => costs >= 0
            Potential zero(inst.graph, std::vector<std::int64_t>(7, 0));
            auto s = static_cast<VertexId>(rng.below(7));
            auto r = energetic_dijkstra(inst.graph, zero, 9, s);
            auto plain = std::get<std::vector<EnergyValue>>(standard_bellman_ford(inst.graph, s));
            for (VertexId v = 0; v < 7; ++v) {
                EnergyValue expect = plain[v].is_finite() && plain[v].value() <= 9
                                         ? plain[v]
                                         : kInf;
                CHECK(r.depletion[v] == expect);
            }
        }
    }
    SUBCASE("agreement and single scans on random instances") {
        tk::Rng rng(555);
        for (int round = 0; round < 200; ++round) {
            auto n = static_cast<std::uint32_t>(rng.uniform(2, 40));
            tk::GeneratorSpec spec{n,       3 * n, 12, 6, 3,
                                   77000 + static_cast<std::uint64_t>(round), true};
            auto inst = tk::generate(spec);
            auto p = std::get<Potential>(compute_potential(inst.graph));
            auto s = static_cast<VertexId>(rng.below(n));
            auto bf = solved(energetic_bellman_ford(inst.graph, 12, s));
            auto dij = energetic_dijkstra(inst.graph, p, 12, s);
            CHECK(bf.depletion == dij.depletion);
            CHECK(verify_fixpoint(inst.graph, 12, dij));
            for (VertexId v = 0; v < n; ++v) CHECK(dij.scans[v] <= 1);
            // the generator's certified potential works just as well
            auto dij2 = energetic_dijkstra(inst.graph, inst.potential, 12, s);
            CHECK(dij2.depletion == bf.depletion);
        }
    }
}

TEST_CASE("initial charge reduction") {
    SUBCASE("full battery degenerates to the plain solve") {
        Graph g = mountain_pass();
        auto direct = solved(energetic_bellman_ford(g, 3, 0));
        auto reduced = solved(single_source(g, BatteryConfig::full(3), 0, Algorithm::BellmanFord));
        CHECK(direct.depletion == reduced.depletion);
        auto dij = solved(single_source(g, BatteryConfig::full(3), 0, Algorithm::Auto));
        CHECK(direct.depletion == dij.depletion);
    }
    SUBCASE("mountain pass needs a full battery") {
        auto r = solved(single_source(mountain_pass(), BatteryConfig(3, 2), 0));
        CHECK(r.depletion[2] == kInf);
        CHECK(r.depletion[0] == fin(0));
    }
    SUBCASE("raising the initial charge can raise the cost") {
        Graph g(2, {{0, 1, -2}});
        auto low = solved(single_source(g, BatteryConfig(2, 0), 0));
        auto high = solved(single_source(g, BatteryConfig(2, 2), 0));
        CHECK(low.depletion[1] == fin(-2));
        CHECK(high.depletion[1] == fin(0));
    }
    SUBCASE("source label stays zero and both algorithms agree") {
        tk::Rng rng(606);
        for (int round = 0; round < 150; ++round) {
            tk::GeneratorSpec spec{6, 10, 7, 4, 2, 300 + static_cast<std::uint64_t>(round), true};
            auto inst = tk::generate(spec);
            std::int64_t b = rng.uniform(0, 7);
            auto s = static_cast<VertexId>(rng.below(6));
            auto bf = solved(single_source(inst.graph, {7, b}, s, Algorithm::BellmanFord));
            auto dij = solved(single_source(inst.graph, {7, b}, s, Algorithm::Dijkstra));
            CHECK(bf.depletion == dij.depletion);
            CHECK(bf.depletion[s] == fin(0));
            CHECK_FALSE(bf.parent[s].has_value());
        }
    }
}

TEST_CASE("tree paths replay to the labels") {
    tk::Rng rng(4242);
    for (int round = 0; round < 100; ++round) {
        tk::GeneratorSpec spec{8, 16, 6, 3, 2, 52 + static_cast<std::uint64_t>(round), true};
        auto inst = tk::generate(spec);
        auto r = solved(energetic_bellman_ford(inst.graph, 6, 0));
        for (VertexId v = 0; v < 8; ++v) {
            auto path = tree_path(r, v);
            if (!r.depletion[v].is_finite()) {
                CHECK_FALSE(path.has_value());
                continue;
            }
            REQUIRE(path.has_value());
            CHECK(is_path(inst.graph, *path));
            CHECK(path_energetic_cost(inst.graph, *path, 6) == r.depletion[v]);
        }
    }
}

TEST_CASE("all pairs") {
    SUBCASE("three-vertex line") {
        Graph g(3, {{0, 1, 1}, {1, 2, 1}});
        auto rows = std::get<std::vector<SolveResult>>(all_pairs(g, 2));
        CHECK(rows[0].depletion[2] == fin(2));
        CHECK(rows[1].depletion[2] == fin(1));
        CHECK(rows[2].depletion[0] == kInf);
    }
    SUBCASE("rows equal single-source answers, threaded or not") {
        tk::GeneratorSpec spec{9, 20, 8, 5, 3, 1001, true};
        auto inst = tk::generate(spec);
        auto rows = std::get<std::vector<SolveResult>>(all_pairs(inst.graph, 8, 1));
        auto threaded = std::get<std::vector<SolveResult>>(all_pairs(inst.graph, 8, 4));
        for (VertexId s = 0; s < 9; ++s) {
            auto bf = solved(energetic_bellman_ford(inst.graph, 8, s));
            CHECK(rows[s].depletion == bf.depletion);
            CHECK(threaded[s].depletion == bf.depletion);
            for (VertexId t = 0; t < 9; ++t)
                CHECK(rows[s].depletion[t] == tk::oracle_min_energetic(inst.graph, 8, s, t));
        }
    }
    SUBCASE("propagates negative cycles") {
        Graph g(2, {{0, 1, -3}, {1, 0, 1}});
        CHECK(std::holds_alternative<NegativeCycleReport>(all_pairs(g, 5)));
    }
}

TEST_CASE("minimum initial charge") {
    SUBCASE("mountain pass") {
        auto beta = std::get<std::vector<EnergyValue>>(min_initial_charge(mountain_pass(), 3, 2));
        CHECK(beta[0] == fin(3));
        CHECK(beta[2] == fin(0)); // empty path
    }
    SUBCASE("matches the scan oracle") {
        for (std::uint64_t seed = 0; seed < 150; ++seed) {
            tk::GeneratorSpec spec{6, 9, 6, 4, 2, 9900 + seed, true};
            auto inst = tk::generate(spec);
            auto t = static_cast<VertexId>(seed % 6);
            auto beta = std::get<std::vector<EnergyValue>>(min_initial_charge(inst.graph, 6, t));
            for (VertexId s = 0; s < 6; ++s)
                CHECK(beta[s] == tk::oracle_min_initial(inst.graph, 6, s, t));
        }
    }
    SUBCASE("cycle reports come back in original-graph orientation") {
        Graph g(3, {{0, 1, -4}, {1, 0, 2}, {1, 2, 0}});
        auto out = min_initial_charge(g, 5, 2);
        REQUIRE(std::holds_alternative<NegativeCycleReport>(out));
        check_cycle_report(g, std::get<NegativeCycleReport>(out));
    }
}

TEST_CASE("maximum final charge") {
    auto alpha = std::get<std::vector<EnergyValue>>(max_final_charge(mountain_pass(), 3, 0));
    CHECK(alpha[2] == fin(3)); // zero depletion: arrives full
    CHECK(alpha[0] == fin(3)); // alpha at the source is the capacity
    Graph with_island(4, {{0, 1, 3}, {1, 2, -3}});
    auto a2 = std::get<std::vector<EnergyValue>>(max_final_charge(with_island, 3, 0));
    CHECK(a2[3] == EnergyValue::neg_inf());
}

TEST_CASE("labels dominate standard distances and shrink with capacity") {
    tk::Rng rng(8181);
    int accepted = 0;
    while (accepted < 150) {
        std::int64_t B = rng.uniform(1, 6);
        auto n = static_cast<std::uint32_t>(rng.uniform(2, 7));
        auto g = tests::random_cycle_free_graph(rng, n, 2 * n, B);
        if (!g) continue;
        ++accepted;
        auto s = static_cast<VertexId>(rng.below(n));
        auto base = solved(energetic_bellman_ford(*g, B, s));
        auto wider = solved(energetic_bellman_ford(*g, B + rng.uniform(0, 4), s));
        auto plain = std::get<std::vector<EnergyValue>>(standard_bellman_ford(*g, s));
        for (VertexId v = 0; v < n; ++v) {
            CHECK(wider.depletion[v] <= base.depletion[v]);
            CHECK(base.depletion[v] >= plain[v]);
        }
    }
}
