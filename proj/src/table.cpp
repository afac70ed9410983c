#include "qbattery/table.hpp"

#include <cstdio>
#include <fstream>
#include <ostream>
#include <string>

#include <json.hpp>

namespace qbattery {

void Table::add_row(std::vector<Cell> row) {
    if (row.size() != columns.size()) {
        throw ValidationError("row has " + std::to_string(row.size()) + " cells, table has " +
                              std::to_string(columns.size()) + " columns");
    }
    rows.push_back(std::move(row));
}

std::string format_number(double value) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.12g", value);
    // Keep "-0" out of the output so equal results print identically.
    if (std::string_view(buf) == "-0") return "0";
    return buf;
}

namespace {

std::string cell_text(const Cell& cell) {
    if (const auto* d = std::get_if<double>(&cell)) return format_number(*d);
    if (const auto* i = std::get_if<std::int64_t>(&cell)) return std::to_string(*i);
    return std::get<std::string>(cell);
}

nlohmann::ordered_json cell_json(const Cell& cell) {
    if (const auto* d = std::get_if<double>(&cell)) {
        // Round-trip through the CSV text so both formats hold the same value.
        return std::stod(format_number(*d));
    }
    if (const auto* i = std::get_if<std::int64_t>(&cell)) return *i;
    return std::get<std::string>(cell);
}

}  // namespace

void write_csv(std::ostream& out, const Table& table, const TableHeader& header) {
    out << "# qbattery " << header.command << '\n';
    for (const auto& [key, value] : header.settings) out << "# " << key << " = " << value << '\n';
    for (std::size_t c = 0; c < table.columns.size(); ++c) out << (c ? "," : "") << table.columns[c];
    out << '\n';
    for (const auto& row : table.rows) {
        for (std::size_t c = 0; c < row.size(); ++c) out << (c ? "," : "") << cell_text(row[c]);
        out << '\n';
    }
}

void write_json(std::ostream& out, const Table& table, const TableHeader& header) {
    nlohmann::ordered_json doc;
    doc["command"] = header.command;
    doc["settings"] = nlohmann::ordered_json::object();
    for (const auto& [key, value] : header.settings) doc["settings"][key] = value;
    doc["columns"] = table.columns;
    doc["rows"] = nlohmann::ordered_json::array();
    for (const auto& row : table.rows) {
        nlohmann::ordered_json r = nlohmann::ordered_json::object();
        for (std::size_t c = 0; c < row.size(); ++c) r[table.columns[c]] = cell_json(row[c]);
        doc["rows"].push_back(std::move(r));
    }
    out << doc.dump(2) << '\n';
}

void write_table(std::ostream& out, const Table& table, const TableHeader& header, OutputFormat format) {
    if (format == OutputFormat::Json) {
        write_json(out, table, header);
    } else {
        write_csv(out, table, header);
    }
}

void write_table(const std::filesystem::path& path, const Table& table, const TableHeader& header,
                 OutputFormat format) {
    std::error_code ec;
    if (path.has_parent_path()) {
        std::filesystem::create_directories(path.parent_path(), ec);
        if (ec) throw IoError("cannot create directory '" + path.parent_path().string() + "': " + ec.message());
    }
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot open '" + path.string() + "' for writing");
    write_table(out, table, header, format);
    out.flush();
    if (!out) throw IoError("failed writing '" + path.string() + "'");
}

}  // namespace qbattery
