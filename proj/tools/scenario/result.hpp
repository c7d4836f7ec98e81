#pragma once

#include <filesystem>
#include <string>
#include <utility>
#include <vector>

#include "json.hpp"

namespace biphoton::scenario {

struct Scalar {
    std::string name;
    double value = 0.0;
    std::string unit;  ///< "1" for dimensionless
};

/// A curve written as CSV. Column names carry their units.
struct Table {
    std::string name;
    std::vector<std::string> columns;
    std::vector<std::vector<double>> rows;
};

struct ResultRecord {
    std::string command;
    nlohmann::json config;  ///< fully resolved, reloadable
    std::vector<Scalar> scalars;
    nlohmann::json notes = nlohmann::json::object();
    std::vector<Table> tables;

    void add(std::string name, double value, std::string unit);

    /// Throws std::out_of_range for a missing name.
    [[nodiscard]] double scalar(const std::string& name) const;
    [[nodiscard]] const Table& table(const std::string& name) const;

    /// command, config echo, scalars as {value, unit}, notes, table index.
    [[nodiscard]] nlohmann::json summary() const;
};

[[nodiscard]] std::string to_csv(const Table& table);

/// Aligned name / value / unit listing for stdout.
[[nodiscard]] std::string format_scalars(const ResultRecord& record);

/// Writes to a sibling temporary file and renames it over `path`.
void write_atomic(const std::filesystem::path& path, const std::string& contents);

/// summary.json plus one <table>.csv per table under `dir` (created).
void write_result(const ResultRecord& record, const std::filesystem::path& dir);

}  // namespace biphoton::scenario
