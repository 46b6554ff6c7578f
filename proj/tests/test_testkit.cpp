#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <numeric>

#include "support.hpp"
#include "voltpath/testkit.hpp"

using namespace voltpath;
namespace tk = voltpath::testkit;

namespace {

EnergyValue fin(std::int64_t v) { return EnergyValue::finite(v); }

// Independent route to the minimum initial charge: enumerate simple paths
// and take the best right fold. Keeps the scan oracle honest.
EnergyValue brute_min_initial(const Graph& g, std::int64_t capacity, VertexId s, VertexId t) {
    if (s == t) return fin(0);
    EnergyValue best = EnergyValue::pos_inf();
    std::vector<bool> visited(g.num_vertices(), false);
    visited[s] = true;
    Path path{s, {}};
    auto dfs = [&](auto&& self, VertexId v) -> void {
        for (ArcId id : g.out_arcs(v)) {
            VertexId head = g.arc(id).head;
            path.arcs.push_back(id);
            if (head == t)
                best = std::min(best, path_initial_charge(g, path, capacity));
            else if (!visited[head]) {
                visited[head] = true;
                self(self, head);
                visited[head] = false;
            }
            path.arcs.pop_back();
        }
    };
    dfs(dfs, s);
    return best;
}

Graph relabeled(const Graph& g, const std::vector<VertexId>& perm) {
    std::vector<Arc> arcs;
    for (const Arc& a : g.arcs()) arcs.push_back({perm[a.tail], perm[a.head], a.cost});
    return Graph(g.num_vertices(), std::move(arcs));
}

} // namespace

TEST_CASE("generator contract") {
    tk::GeneratorSpec spec{8, 20, 10, 6, 3, 42, true};
    auto a = tk::generate(spec);
    auto b = tk::generate(spec);
    CHECK(a.graph == b.graph); // deterministic per seed

    spec.seed = 43;
    CHECK_FALSE(tk::generate(spec).graph == a.graph);

    for (const Arc& arc : a.graph.arcs()) {
        CHECK(arc.cost >= -10);
        CHECK(arc.cost <= 10);
        CHECK(arc.tail != arc.head);
    }
    CHECK(std::holds_alternative<Potential>(compute_potential(a.graph)));

    SUBCASE("zero potential range forces non-negative costs") {
        tk::GeneratorSpec nonneg{8, 20, 10, 0, 5, 7, true};
        auto inst = tk::generate(nonneg);
        for (const Arc& arc : inst.graph.arcs()) CHECK(arc.cost >= 0);
    }
    SUBCASE("simple graphs avoid duplicate arcs") {
        tk::GeneratorSpec simple{5, 20, 10, 2, 2, 11, false};
        auto inst = tk::generate(simple);
        std::vector<std::pair<VertexId, VertexId>> seen;
        for (const Arc& arc : inst.graph.arcs()) seen.push_back({arc.tail, arc.head});
        std::sort(seen.begin(), seen.end());
        CHECK(std::adjacent_find(seen.begin(), seen.end()) == seen.end());
    }
    SUBCASE("infeasible specs are rejected") {
        CHECK_THROWS_AS(tk::generate({1, 3, 5, 1, 1, 0, true}), std::invalid_argument);
        CHECK_THROWS_AS(tk::generate({3, 7, 5, 1, 1, 0, false}), std::invalid_argument);
        CHECK_THROWS_AS(tk::generate({3, 1, -1, 1, 1, 0, true}), std::invalid_argument);
    }
}

TEST_CASE("energetic-cost oracle") {
    Graph pass(3, {{0, 1, 3}, {1, 2, -3}});
    CHECK(tk::oracle_min_energetic(pass, 3, 0, 2) == fin(0));
    CHECK(tk::oracle_min_energetic(pass, 3, 2, 0) == EnergyValue::pos_inf());
    CHECK(tk::oracle_min_energetic(pass, 3, 1, 1) == fin(0));

    SUBCASE("size guard") {
        Graph big(13, {});
        CHECK_THROWS_AS(tk::oracle_min_energetic(big, 3, 0, 1), std::invalid_argument);
    }
    SUBCASE("invariant under vertex relabeling") {
        tk::Rng rng(64);
        for (std::uint64_t seed = 0; seed < 40; ++seed) {
            tk::GeneratorSpec spec{6, 10, 5, 3, 2, seed, true};
            auto inst = tk::generate(spec);
            std::vector<VertexId> perm(6);
            std::iota(perm.begin(), perm.end(), 0);
            for (std::size_t i = perm.size(); i > 1; --i)
                std::swap(perm[i - 1], perm[rng.below(i)]);
            Graph shuffled = relabeled(inst.graph, perm);
            for (VertexId s = 0; s < 6; ++s)
                for (VertexId t = 0; t < 6; ++t)
                    CHECK(tk::oracle_min_energetic(inst.graph, 5, s, t) ==
                          tk::oracle_min_energetic(shuffled, 5, perm[s], perm[t]));
        }
    }
    SUBCASE("never beats the standard distance") {
        tk::Rng rng(4321);
        int accepted = 0;
        while (accepted < 60) {
            auto g = tests::random_cycle_free_graph(rng, 5, 10, 4);
            if (!g) continue;
            ++accepted;
            auto plain = std::get<std::vector<EnergyValue>>(standard_bellman_ford(*g, 0));
            for (VertexId t = 0; t < 5; ++t)
                CHECK(tk::oracle_min_energetic(*g, 4, 0, t) >= plain[t]);
        }
    }
}

TEST_CASE("initial-charge oracle") {
    Graph pass(3, {{0, 1, 3}, {1, 2, -3}});
    CHECK(tk::oracle_min_initial(pass, 3, 0, 2) == fin(3));
    CHECK(tk::oracle_min_initial(pass, 3, 1, 1) == fin(0));
    CHECK(tk::oracle_min_initial(pass, 3, 2, 0) == EnergyValue::pos_inf());

    SUBCASE("agrees with direct path enumeration") {
        for (std::uint64_t seed = 0; seed < 80; ++seed) {
            tk::GeneratorSpec spec{5, 8, 6, 4, 2, 500 + seed, true};
            auto inst = tk::generate(spec);
            for (VertexId s = 0; s < 5; ++s)
                for (VertexId t = 0; t < 5; ++t)
                    CHECK(tk::oracle_min_initial(inst.graph, 6, s, t) ==
                          brute_min_initial(inst.graph, 6, s, t));
        }
    }
}

TEST_CASE("target-tree witness") {
    SUBCASE("stored instance verifies") {
        auto witness = tk::find_no_target_tree_witness(6);
        REQUIRE(witness.has_value());
        CHECK(witness->graph.num_vertices() <= 6);
        CHECK_FALSE(tk::admits_target_tree(witness->graph, witness->capacity, witness->target));
        CHECK_FALSE(witness->log.empty());
        // every source still has its own tree
        for (VertexId s = 0; s < witness->graph.num_vertices(); ++s) {
            auto out = energetic_bellman_ford(witness->graph, witness->capacity, s);
            CHECK(verify_fixpoint(witness->graph, witness->capacity,
                                  std::get<SolveResult>(out)));
        }
    }
    SUBCASE("bound too small") { CHECK_FALSE(tk::find_no_target_tree_witness(3).has_value()); }
    SUBCASE("single arc admits a tree") {
        CHECK(tk::admits_target_tree(Graph(2, {{0, 1, 1}}), 5, 1));
    }
    SUBCASE("generous battery and non-negative costs always admit trees") {
        for (std::uint64_t seed = 0; seed < 30; ++seed) {
            tk::GeneratorSpec spec{5, 8, 1000, 0, 3, 80 + seed, true};
            auto inst = tk::generate(spec); // costs in [0, 3], B >> n * max cost
            CHECK(tk::admits_target_tree(inst.graph, 1000, static_cast<VertexId>(seed % 5)));
        }
    }
}
