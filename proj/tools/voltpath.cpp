#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <charconv>
#include <chrono>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "voltpath/io.hpp"
#include "voltpath/solve.hpp"
#include "voltpath/testkit.hpp"

namespace vp = voltpath;

namespace {

// Stable exit codes (documented in the README).
constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitInput = 2;
constexpr int kExitNegativeCycle = 3;
constexpr int kExitUnreachable = 4;
constexpr int kExitLimit = 5;
constexpr int kExitCheckFailed = 6;

struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct LimitError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct Options {
    std::string graph_path;
    std::optional<std::int64_t> source_1based;
    std::optional<std::int64_t> target_1based;
    std::optional<std::int64_t> battery;
    std::optional<std::int64_t> initial;
    std::string algorithm = "auto";
    std::string format = "tsv";
    std::uint64_t seed = 1;
    std::optional<std::uint32_t> n;
    std::optional<std::uint32_t> m;
    std::uint32_t reps = 0; // per-subcommand default
};

std::string read_input(const std::string& path) {
    if (path == "-") {
        std::ostringstream buffer;
        buffer << std::cin.rdbuf();
        return buffer.str();
    }
    std::ifstream file(path, std::ios::binary);
    if (!file) throw vp::io::ParseError(1, "cannot open '" + path + "'");
    std::ostringstream buffer;
    buffer << file.rdbuf();
    return buffer.str();
}

vp::io::TableFormat table_format(const Options& opt) {
    if (opt.format == "tsv") return vp::io::TableFormat::Tsv;
    if (opt.format == "json") return vp::io::TableFormat::Json;
    throw UsageError("unknown format '" + opt.format + "' (expected tsv or json)");
}

vp::Algorithm algorithm(const Options& opt) {
    if (opt.algorithm == "ebf") return vp::Algorithm::BellmanFord;
    if (opt.algorithm == "edijkstra") return vp::Algorithm::Dijkstra;
    if (opt.algorithm == "auto") return vp::Algorithm::Auto;
    throw UsageError("unknown algorithm '" + opt.algorithm + "' (expected ebf|edijkstra|auto)");
}

vp::BatteryConfig resolve_battery(const vp::io::ProblemFile& pf, const Options& opt) {
    std::int64_t capacity = opt.battery.value_or(pf.battery.capacity());
    std::int64_t initial = opt.initial.value_or(pf.battery.initial());
    return vp::BatteryConfig(capacity, initial); // throws on inconsistent overrides
}

vp::VertexId resolve_vertex(const vp::Graph& g, std::optional<std::int64_t> flag,
                            std::optional<vp::VertexId> designated, const char* what) {
    std::int64_t id_1based;
    if (flag)
        id_1based = *flag;
    else if (designated)
        id_1based = static_cast<std::int64_t>(*designated) + 1;
    else
        throw UsageError(std::string("no ") + what + " given (flag or 'n <id> " + what[0] +
                         "' line)");
    if (id_1based < 1 || static_cast<std::uint64_t>(id_1based) > g.num_vertices())
        throw vp::io::ParseError(0, std::string(what) + " vertex " + std::to_string(id_1based) +
                                        " outside 1.." + std::to_string(g.num_vertices()));
    return static_cast<vp::VertexId>(id_1based - 1);
}

// Negative self-loops are one-arc negative cycles; report them before the
// preprocessing pass would reject them.
std::optional<vp::NegativeCycleReport> find_negative_self_loop(const vp::Graph& g) {
    for (vp::ArcId id = 0; id < g.num_arcs(); ++id) {
        const vp::Arc& a = g.arc(id);
        if (a.tail == a.head && a.cost < 0) return vp::NegativeCycleReport{{id}, a.cost};
    }
    return std::nullopt;
}

int report_negative_cycle(const vp::Graph& g, const vp::NegativeCycleReport& report) {
    std::cerr << "negative cycle with total cost " << report.total_cost << ":\n";
    for (vp::ArcId id : report.arcs) {
        const vp::Arc& a = g.arc(id);
        std::cerr << "  a " << a.tail + 1 << ' ' << a.head + 1 << ' ' << a.cost << '\n';
    }
    return kExitNegativeCycle;
}

unsigned worker_cap() {
    const char* env = std::getenv("VOLTPATH_THREADS");
    if (!env || !*env) return 0;
    unsigned value{};
    auto [ptr, ec] = std::from_chars(env, env + std::string_view(env).size(), value);
    if (ec != std::errc() || *ptr != '\0' || value == 0)
        throw UsageError("VOLTPATH_THREADS must be a positive integer");
    return value;
}

int cmd_solve(const Options& opt) {
    auto pf = vp::io::parse_problem(read_input(opt.graph_path));
    auto battery = resolve_battery(pf, opt);
    vp::VertexId source = resolve_vertex(pf.graph, opt.source_1based, pf.source, "source");
    std::optional<vp::VertexId> target;
    if (opt.target_1based || pf.target)
        target = resolve_vertex(pf.graph, opt.target_1based, pf.target, "target");

    if (auto loop = find_negative_self_loop(pf.graph)) return report_negative_cycle(pf.graph, *loop);
    vp::Graph g = preprocess_costs(pf.graph, battery.capacity());

    auto out = vp::single_source(g, battery, source, algorithm(opt));
    if (auto* report = std::get_if<vp::NegativeCycleReport>(&out))
        return report_negative_cycle(g, *report);
    const auto& result = std::get<vp::SolveResult>(out);

    auto table = vp::io::solve_table(result, battery);
    const auto format = table_format(opt);
    if (!target) {
        std::cout << vp::io::serialize_table(table, format);
        return kExitOk;
    }

    auto path = vp::tree_path(result, *target);
    if (format == vp::io::TableFormat::Tsv) {
        std::cout << vp::io::serialize_table(table, format);
        std::cout << "path\t";
        if (!path) {
            std::cout << "unreachable\n";
        } else {
            vp::VertexId at = path->origin;
            std::cout << at + 1;
            for (vp::ArcId arc : path->arcs) {
                at = g.arc(arc).head;
                std::cout << "->" << at + 1;
            }
            std::cout << '\n';
        }
    } else {
        nlohmann::ordered_json doc;
        doc["table"] = nlohmann::ordered_json::parse(
            vp::io::serialize_table(table, vp::io::TableFormat::Json));
        if (path) {
            auto vertices = nlohmann::ordered_json::array();
            vp::VertexId at = path->origin;
            vertices.push_back(at + 1);
            for (vp::ArcId arc : path->arcs) {
                at = g.arc(arc).head;
                vertices.push_back(at + 1);
            }
            doc["path"] = std::move(vertices);
        } else {
            doc["path"] = nullptr;
        }
        std::cout << doc.dump() << '\n';
    }
    return path ? kExitOk : kExitUnreachable;
}

int cmd_allpairs(const Options& opt) {
    auto pf = vp::io::parse_problem(read_input(opt.graph_path));
    std::int64_t capacity = opt.battery.value_or(pf.battery.capacity());
    vp::validate_capacity(capacity);
    if (auto loop = find_negative_self_loop(pf.graph)) return report_negative_cycle(pf.graph, *loop);
    vp::Graph g = preprocess_costs(pf.graph, capacity);

    auto out = vp::all_pairs(g, capacity, worker_cap());
    if (auto* report = std::get_if<vp::NegativeCycleReport>(&out))
        return report_negative_cycle(g, *report);
    std::cout << vp::io::serialize_table(
        vp::io::matrix_table(std::get<std::vector<vp::SolveResult>>(out)), table_format(opt));
    return kExitOk;
}

int cmd_beta(const Options& opt) {
    auto pf = vp::io::parse_problem(read_input(opt.graph_path));
    std::int64_t capacity = opt.battery.value_or(pf.battery.capacity());
    vp::validate_capacity(capacity);
    vp::VertexId target = resolve_vertex(pf.graph, opt.target_1based, pf.target, "target");
    if (auto loop = find_negative_self_loop(pf.graph)) return report_negative_cycle(pf.graph, *loop);
    vp::Graph g = preprocess_costs(pf.graph, capacity);

    auto out = vp::min_initial_charge(g, capacity, target);
    if (auto* report = std::get_if<vp::NegativeCycleReport>(&out))
        return report_negative_cycle(g, *report);
    auto& values = std::get<std::vector<vp::EnergyValue>>(out);

    auto table = vp::io::energy_table("min_initial_charge", values);
    if (opt.source_1based) {
        vp::VertexId s = resolve_vertex(g, opt.source_1based, std::nullopt, "source");
        table.rows = {table.rows[s]};
    }
    std::cout << vp::io::serialize_table(table, table_format(opt));
    return kExitOk;
}

int cmd_gen(const Options& opt) {
    if (!opt.n || !opt.battery) throw UsageError("gen requires --n and --battery");
    std::int64_t capacity = *opt.battery;
    vp::testkit::GeneratorSpec spec;
    spec.n = *opt.n;
    spec.m = opt.m.value_or(4 * *opt.n);
    spec.capacity = capacity;
    spec.potential_range = capacity / 4;
    spec.reduced_cost_range = capacity / 2;
    spec.seed = opt.seed;
    try {
        vp::BatteryConfig battery(capacity, opt.initial.value_or(capacity));
        auto instance = vp::testkit::generate(spec);
        vp::io::ProblemFile pf{std::move(instance.graph), battery, std::nullopt, std::nullopt};
        std::cout << vp::io::serialize_problem(pf);
        return kExitOk;
    } catch (const std::invalid_argument& e) {
        throw LimitError(e.what());
    }
}

// One instance agrees when both solvers match the exhaustive oracle from
// every source and the fixpoint certificate accepts them.
std::variant<bool, vp::NegativeCycleReport> audit_instance(const vp::Graph& g,
                                                           std::int64_t capacity) {
    auto pot = vp::compute_potential(g);
    if (auto* report = std::get_if<vp::NegativeCycleReport>(&pot)) return std::move(*report);
    const auto& potential = std::get<vp::Potential>(pot);
    for (vp::VertexId s = 0; s < g.num_vertices(); ++s) {
        auto bf = std::get<vp::SolveResult>(vp::energetic_bellman_ford(g, capacity, s));
        auto dij = vp::energetic_dijkstra(g, potential, capacity, s);
        bool ok = bf.depletion == dij.depletion && vp::verify_fixpoint(g, capacity, bf) &&
                  vp::verify_fixpoint(g, capacity, dij);
        for (vp::VertexId t = 0; ok && t < g.num_vertices(); ++t)
            ok = bf.depletion[t] == vp::testkit::oracle_min_energetic(g, capacity, s, t);
        if (!ok) return false;
    }
    return true;
}

int cmd_check(const Options& opt) {
    std::uint64_t checked = 0, agreed = 0;
    if (!opt.graph_path.empty()) {
        auto pf = vp::io::parse_problem(read_input(opt.graph_path));
        std::int64_t capacity = opt.battery.value_or(pf.battery.capacity());
        if (pf.graph.num_vertices() > 12)
            throw LimitError("check audits instances with at most 12 vertices");
        if (auto loop = find_negative_self_loop(pf.graph))
            return report_negative_cycle(pf.graph, *loop);
        vp::Graph g = preprocess_costs(pf.graph, capacity);
        auto outcome = audit_instance(g, capacity);
        if (auto* report = std::get_if<vp::NegativeCycleReport>(&outcome))
            return report_negative_cycle(g, *report);
        checked = 1;
        agreed = std::get<bool>(outcome) ? 1 : 0;
    } else {
        std::uint32_t n = opt.n.value_or(6);
        std::uint32_t m = opt.m.value_or(10);
        std::int64_t capacity = opt.battery.value_or(4);
        std::uint32_t reps = opt.reps ? opt.reps : 200;
        if (n > 12) throw LimitError("check audits instances with at most 12 vertices");
        for (std::uint32_t i = 0; i < reps; ++i) {
            vp::testkit::GeneratorSpec spec;
            spec.n = n;
            spec.m = m;
            spec.capacity = capacity;
            spec.potential_range = capacity;
            spec.reduced_cost_range = std::max<std::int64_t>(1, capacity / 2);
            spec.seed = opt.seed + i;
            auto instance = vp::testkit::generate(spec);
            auto outcome = audit_instance(instance.graph, capacity);
            if (auto* report = std::get_if<vp::NegativeCycleReport>(&outcome))
                return report_negative_cycle(instance.graph, *report);
            ++checked;
            agreed += std::get<bool>(outcome) ? 1 : 0;
        }
    }
    std::cout << agreed << '/' << checked << " agree\n";
    return agreed == checked ? kExitOk : kExitCheckFailed;
}

int cmd_bench(const Options& opt) {
    std::vector<std::pair<std::uint32_t, std::uint32_t>> sizes;
    if (opt.n)
        sizes.push_back({*opt.n, opt.m.value_or(4 * *opt.n)});
    else
        sizes = {{1000, 4000}, {10000, 40000}, {100000, 400000}};
    const std::uint32_t reps = opt.reps ? opt.reps : 5;
    const std::int64_t capacity = opt.battery.value_or(256);

    auto median_ms = [&](auto&& run) {
        std::vector<double> samples;
        for (std::uint32_t r = 0; r < reps; ++r) {
            auto start = std::chrono::steady_clock::now();
            run();
            auto stop = std::chrono::steady_clock::now();
            samples.push_back(std::chrono::duration<double, std::milli>(stop - start).count());
        }
        std::sort(samples.begin(), samples.end());
        return samples[samples.size() / 2];
    };

    std::cout << "n\tm\talgorithm\twall_ms\n";
    for (auto [n, m] : sizes) {
        vp::testkit::GeneratorSpec spec;
        spec.n = n;
        spec.m = m;
        spec.capacity = capacity;
        spec.potential_range = capacity / 4;
        spec.reduced_cost_range = capacity / 8;
        spec.seed = opt.seed;
        auto instance = vp::testkit::generate(spec);

        double bf = median_ms([&] {
            auto out = vp::energetic_bellman_ford(instance.graph, capacity, 0);
            if (!std::holds_alternative<vp::SolveResult>(out))
                throw std::logic_error("generated instance reported a negative cycle");
        });
        double dijkstra = median_ms(
            [&] { vp::energetic_dijkstra(instance.graph, instance.potential, capacity, 0); });
        char line[160];
        std::snprintf(line, sizeof line, "%u\t%u\tebf\t%.3f\n%u\t%u\tedijkstra\t%.3f\n", n, m, bf,
                      n, m, dijkstra);
        std::cout << line;
    }
    return kExitOk;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"minimum energetic paths for a battery-constrained vehicle"};
    app.require_subcommand(1);
    Options opt;

    auto add_io = [&](CLI::App* sub, bool graph_required) {
        auto* o = sub->add_option("--graph", opt.graph_path, "problem file path, or - for stdin");
        if (graph_required) o->required();
        sub->add_option("--battery", opt.battery, "battery capacity override");
        sub->add_option("--initial", opt.initial, "initial charge override");
        sub->add_option("--format", opt.format, "output format: tsv|json");
    };

    auto* solve = app.add_subcommand("solve", "single-source energetic costs");
    add_io(solve, true);
    solve->add_option("--source", opt.source_1based, "source vertex (1-based)");
    solve->add_option("--target", opt.target_1based, "optional target vertex (1-based)");
    solve->add_option("--algorithm", opt.algorithm, "ebf|edijkstra|auto");

    auto* allpairs = app.add_subcommand("allpairs", "energetic cost matrix");
    add_io(allpairs, true);

    auto* beta = app.add_subcommand("beta", "minimum initial charge to reach a target");
    add_io(beta, true);
    beta->add_option("--target", opt.target_1based, "target vertex (1-based)");
    beta->add_option("--source", opt.source_1based, "print a single source row");

    auto* gen = app.add_subcommand("gen", "emit a random negative-cycle-free problem file");
    gen->add_option("--n", opt.n, "vertex count")->required();
    gen->add_option("--m", opt.m, "arc count (default 4n)");
    gen->add_option("--battery", opt.battery, "battery capacity")->required();
    gen->add_option("--initial", opt.initial, "initial charge (default full)");
    gen->add_option("--seed", opt.seed, "random seed");

    auto* check = app.add_subcommand("check", "audit solvers against the exhaustive oracles");
    add_io(check, false);
    check->add_option("--n", opt.n, "generated vertex count (default 6)");
    check->add_option("--m", opt.m, "generated arc count (default 10)");
    check->add_option("--seed", opt.seed, "random seed");
    check->add_option("--reps", opt.reps, "generated instance count (default 200)");

    auto* bench = app.add_subcommand("bench", "time both solvers on generated graphs");
    bench->add_option("--n", opt.n, "vertex count (default ladder 1e3,1e4,1e5)");
    bench->add_option("--m", opt.m, "arc count (default 4n)");
    bench->add_option("--battery", opt.battery, "battery capacity (default 256)");
    bench->add_option("--seed", opt.seed, "random seed");
    bench->add_option("--reps", opt.reps, "repetitions per measurement (default 5)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? kExitOk : kExitUsage;
    }

    try {
        if (solve->parsed()) return cmd_solve(opt);
        if (allpairs->parsed()) return cmd_allpairs(opt);
        if (beta->parsed()) return cmd_beta(opt);
        if (gen->parsed()) return cmd_gen(opt);
        if (check->parsed()) return cmd_check(opt);
        if (bench->parsed()) return cmd_bench(opt);
        return kExitUsage;
    } catch (const UsageError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitUsage;
    } catch (const LimitError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitLimit;
    } catch (const vp::io::ParseError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitInput;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitInput;
    } catch (const std::exception& e) {
        std::cerr << "internal error: " << e.what() << '\n';
        return kExitLimit;
    }
}
