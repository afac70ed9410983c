#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "qbattery/config.hpp"

namespace qbattery {

using Cell = std::variant<double, std::int64_t, std::string>;

struct Table {
    std::vector<std::string> columns;
    std::vector<std::vector<Cell>> rows;

    void add_row(std::vector<Cell> row);
};

/// Self-describing preamble: the command plus every resolved setting.
struct TableHeader {
    std::string command;
    std::vector<std::pair<std::string, std::string>> settings;
};

/// 12 significant digits.
std::string format_number(double value);

/// '#'-prefixed header lines, then a column line and one line per row.
void write_csv(std::ostream& out, const Table& table, const TableHeader& header);

/// {"command", "settings", "columns", "rows"}; numbers carry the CSV precision.
void write_json(std::ostream& out, const Table& table, const TableHeader& header);

void write_table(std::ostream& out, const Table& table, const TableHeader& header, OutputFormat format);

/// Writes to `path` (parent directories are created). Failures throw IoError.
void write_table(const std::filesystem::path& path, const Table& table, const TableHeader& header,
                 OutputFormat format);

}  // namespace qbattery
