#include "voltpath/io.hpp"

#include <charconv>
#include <json.hpp>

namespace voltpath::io {

namespace {

std::vector<std::string_view> split_lines(std::string_view text) {
    std::vector<std::string_view> lines;
    std::size_t start = 0;
    while (start <= text.size()) {
        std::size_t end = text.find('\n', start);
        if (end == std::string_view::npos) {
            if (start < text.size()) lines.push_back(text.substr(start));
            break;
        }
        lines.push_back(text.substr(start, end - start));
        start = end + 1;
    }
    for (auto& line : lines)
        if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    return lines;
}

std::vector<std::string_view> tokenize(std::string_view line) {
    std::vector<std::string_view> tokens;
    std::size_t i = 0;
    while (i < line.size()) {
        while (i < line.size() && (line[i] == ' ' || line[i] == '\t')) ++i;
        std::size_t start = i;
        while (i < line.size() && line[i] != ' ' && line[i] != '\t') ++i;
        if (i > start) tokens.push_back(line.substr(start, i - start));
    }
    return tokens;
}

template <typename Int>
Int parse_int(std::string_view token, std::size_t line, const char* what) {
    Int value{};
    auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), value);
    if (ec != std::errc() || ptr != token.data() + token.size())
        throw ParseError(line, std::string("malformed ") + what + " '" + std::string(token) + "'");
    return value;
}

VertexId parse_vertex(std::string_view token, std::size_t line, std::uint32_t n) {
    auto id = parse_int<std::uint64_t>(token, line, "vertex id");
    if (id < 1 || id > n)
        throw ParseError(line, "vertex " + std::string(token) + " outside 1.." + std::to_string(n));
    return static_cast<VertexId>(id - 1);
}

} // namespace

ProblemFile parse_problem(std::string_view text) {
    auto lines = split_lines(text);

    std::optional<std::uint32_t> n, m;
    std::optional<std::pair<std::int64_t, std::int64_t>> battery;
    std::size_t battery_line = 0;
    std::optional<VertexId> source, target;
    std::vector<Arc> arcs;

    for (std::size_t i = 0; i < lines.size(); ++i) {
        const std::size_t line = i + 1;
        auto tokens = tokenize(lines[i]);
        if (tokens.empty() || tokens[0] == "c") continue;
        if (tokens[0] == "p") {
            if (n) throw ParseError(line, "duplicate problem line");
            if (tokens.size() != 4 || tokens[1] != "ec")
                throw ParseError(line, "expected 'p ec <vertices> <arcs>'");
            n = parse_int<std::uint32_t>(tokens[2], line, "vertex count");
            m = parse_int<std::uint32_t>(tokens[3], line, "arc count");
            continue;
        }
        if (!n) throw ParseError(line, "expected the problem line 'p ec <vertices> <arcs>' first");
        if (tokens[0] == "b") {
            if (battery) throw ParseError(line, "duplicate battery line");
            if (tokens.size() != 3) throw ParseError(line, "expected 'b <capacity> <initial>'");
            battery = {parse_int<std::int64_t>(tokens[1], line, "capacity"),
                       parse_int<std::int64_t>(tokens[2], line, "initial charge")};
            battery_line = line;
        } else if (tokens[0] == "a") {
            if (tokens.size() != 4) throw ParseError(line, "expected 'a <tail> <head> <cost>'");
            if (arcs.size() >= *m) throw ParseError(line, "more arc lines than declared");
            arcs.push_back({parse_vertex(tokens[1], line, *n), parse_vertex(tokens[2], line, *n),
                            parse_int<std::int64_t>(tokens[3], line, "cost")});
        } else if (tokens[0] == "n") {
            if (tokens.size() != 3 || (tokens[2] != "s" && tokens[2] != "t"))
                throw ParseError(line, "expected 'n <id> s' or 'n <id> t'");
            auto& slot = tokens[2] == "s" ? source : target;
            if (slot) throw ParseError(line, "duplicate node designator");
            slot = parse_vertex(tokens[1], line, *n);
        } else {
            throw ParseError(line, "unknown directive '" + std::string(tokens[0]) + "'");
        }
    }

    const std::size_t eof_line = lines.size() + 1;
    if (!n) throw ParseError(1, "missing problem line 'p ec <vertices> <arcs>'");
    if (!battery) throw ParseError(eof_line, "missing battery line 'b <capacity> <initial>'");
    if (arcs.size() != *m)
        throw ParseError(eof_line, "declared " + std::to_string(*m) + " arcs but found " +
                                       std::to_string(arcs.size()));
    try {
        // built before the graph: the validating constructor may throw
        BatteryConfig validated(battery->first, battery->second);
        return ProblemFile{Graph(*n, std::move(arcs)), validated, source, target};
    } catch (const std::invalid_argument& e) {
        throw ParseError(battery_line, e.what());
    }
}

std::string serialize_problem(const ProblemFile& problem) {
    std::string out;
    out += "p ec " + std::to_string(problem.graph.num_vertices()) + ' ' +
           std::to_string(problem.graph.num_arcs()) + '\n';
    out += "b " + std::to_string(problem.battery.capacity()) + ' ' +
           std::to_string(problem.battery.initial()) + '\n';
    if (problem.source) out += "n " + std::to_string(*problem.source + 1) + " s\n";
    if (problem.target) out += "n " + std::to_string(*problem.target + 1) + " t\n";
    for (const Arc& a : problem.graph.arcs())
        out += "a " + std::to_string(a.tail + 1) + ' ' + std::to_string(a.head + 1) + ' ' +
               std::to_string(a.cost) + '\n';
    return out;
}

Table solve_table(const SolveResult& result, const BatteryConfig& battery) {
    Table table{{"vertex", "depletion", "final_charge", "pred_vertex", "pred_arc"}, {}};
    for (VertexId v = 0; v < result.depletion.size(); ++v) {
        const EnergyValue d = result.depletion[v];
        std::string charge = d.is_finite()
                                 ? std::to_string(battery.initial() - d.value())
                                 : "-inf";
        std::string pred_vertex = "-", pred_arc = "-";
        if (result.parent[v]) {
            pred_vertex = std::to_string(result.parent[v]->vertex + 1);
            pred_arc = std::to_string(result.parent[v]->arc + 1);
        }
        table.rows.push_back({std::to_string(v + 1), to_string(d), std::move(charge),
                              std::move(pred_vertex), std::move(pred_arc)});
    }
    return table;
}

Table energy_table(const std::string& column, std::span<const EnergyValue> values) {
    Table table{{"vertex", column}, {}};
    for (std::size_t v = 0; v < values.size(); ++v)
        table.rows.push_back({std::to_string(v + 1), to_string(values[v])});
    return table;
}

Table matrix_table(std::span<const SolveResult> per_source) {
    Table table{{"source"}, {}};
    if (per_source.empty()) return table;
    for (std::size_t v = 0; v < per_source.front().depletion.size(); ++v)
        table.columns.push_back(std::to_string(v + 1));
    for (const SolveResult& row : per_source) {
        std::vector<std::string> cells{std::to_string(row.source + 1)};
        for (EnergyValue d : row.depletion) cells.push_back(to_string(d));
        table.rows.push_back(std::move(cells));
    }
    return table;
}

std::string serialize_table(const Table& table, TableFormat format) {
    if (format == TableFormat::Tsv) {
        std::string out;
        for (std::size_t c = 0; c < table.columns.size(); ++c) {
            if (c) out += '\t';
            out += table.columns[c];
        }
        out += '\n';
        for (const auto& row : table.rows) {
            for (std::size_t c = 0; c < row.size(); ++c) {
                if (c) out += '\t';
                out += row[c];
            }
            out += '\n';
        }
        return out;
    }

    auto cell_value = [](const std::string& cell) -> nlohmann::ordered_json {
        std::int64_t value{};
        auto [ptr, ec] = std::from_chars(cell.data(), cell.data() + cell.size(), value);
        if (ec == std::errc() && ptr == cell.data() + cell.size()) return value;
        return cell;
    };
    nlohmann::ordered_json rows = nlohmann::ordered_json::array();
    for (const auto& row : table.rows) {
        nlohmann::ordered_json obj = nlohmann::ordered_json::object();
        for (std::size_t c = 0; c < table.columns.size(); ++c) obj[table.columns[c]] = cell_value(row[c]);
        rows.push_back(std::move(obj));
    }
    return rows.dump() + '\n';
}

Table parse_table_tsv(std::string_view text) {
    auto lines = split_lines(text);
    if (lines.empty()) throw ParseError(1, "empty table");
    Table table;
    auto split_cells = [](std::string_view line) {
        std::vector<std::string> cells;
        std::size_t start = 0;
        for (;;) {
            std::size_t end = line.find('\t', start);
            cells.emplace_back(line.substr(start, end - start));
            if (end == std::string_view::npos) break;
            start = end + 1;
        }
        return cells;
    };
    table.columns = split_cells(lines[0]);
    for (std::size_t i = 1; i < lines.size(); ++i) {
        auto cells = split_cells(lines[i]);
        if (cells.size() != table.columns.size())
            throw ParseError(i + 1, "row width does not match the header");
        table.rows.push_back(std::move(cells));
    }
    return table;
}

} // namespace voltpath::io
