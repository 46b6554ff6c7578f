#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "voltpath/energy.hpp"
#include "voltpath/graph.hpp"
#include "voltpath/solve.hpp"

namespace voltpath::io {

/// Parse failure with the 1-based line it happened on.
class ParseError : public std::runtime_error {
  public:
    ParseError(std::size_t line, const std::string& message)
        : std::runtime_error("line " + std::to_string(line) + ": " + message), line_(line) {}

    std::size_t line() const { return line_; }

  private:
    std::size_t line_;
};

/// One problem instance in the extended DIMACS shortest-path format:
///   c <comment>
///   p ec <n> <m>
///   b <capacity> <initial>
///   n <id> s|t          (optional source/target designators)
///   a <tail> <head> <cost>
/// Vertex ids are 1-based in files, 0-based in memory. Costs may lie outside
/// [-B, B]; restricting them is the solver's preprocessing step.
struct ProblemFile {
    Graph graph;
    BatteryConfig battery;
    std::optional<VertexId> source;
    std::optional<VertexId> target;

    friend bool operator==(const ProblemFile&, const ProblemFile&) = default;
};

ProblemFile parse_problem(std::string_view text);

/// Canonical text: header, battery, designators, arcs in id order. Parsing
/// the output reproduces the input value byte for byte.
std::string serialize_problem(const ProblemFile& problem);

/// Stringly-typed result table; +inf cells render as "inf", -inf as "-inf".
struct Table {
    std::vector<std::string> columns;
    std::vector<std::vector<std::string>> rows;

    friend bool operator==(const Table&, const Table&) = default;
};

enum class TableFormat { Tsv, Json };

/// Per-vertex depletion / final charge / predecessor for one solve.
Table solve_table(const SolveResult& result, const BatteryConfig& battery);

/// Per-vertex single-column table (used for the charge bound tables).
Table energy_table(const std::string& column, std::span<const EnergyValue> values);

/// Depletion matrix, one row per source.
Table matrix_table(std::span<const SolveResult> per_source);

std::string serialize_table(const Table& table, TableFormat format);

/// Inverse of the TSV serialization, for round-trip checks.
Table parse_table_tsv(std::string_view text);

} // namespace voltpath::io
