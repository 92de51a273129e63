#include "relect/report.hpp"

#include <cstdio>
#include <stdexcept>

namespace relect {

std::string format_sig6(double value) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.6g", value);
    return buf;
}

Cell num_cell(double value) { return {format_sig6(value), false}; }

Cell int_cell(std::int64_t value) { return {std::to_string(value), false}; }

Cell str_cell(std::string value) { return {std::move(value), true}; }

void Table::add_row(std::vector<Cell> cells) {
    if (cells.size() != columns.size())
        throw std::logic_error("table row width does not match header");
    rows.push_back(std::move(cells));
}

void write_csv(std::ostream& out, const Table& table) {
    for (std::size_t i = 0; i < table.columns.size(); ++i) {
        if (i) out << ',';
        out << table.columns[i];
    }
    out << '\n';
    for (const auto& row : table.rows) {
        for (std::size_t i = 0; i < row.size(); ++i) {
            if (i) out << ',';
            out << row[i].text;
        }
        out << '\n';
    }
}

namespace {
void json_escape(std::ostream& out, const std::string& s) {
    out << '"';
    for (char c : s) {
        switch (c) {
            case '"': out << "\\\""; break;
            case '\\': out << "\\\\"; break;
            case '\n': out << "\\n"; break;
            default: out << c;
        }
    }
    out << '"';
}
}  // namespace

void write_json(std::ostream& out, const Table& table) {
    out << "[\n";
    for (std::size_t r = 0; r < table.rows.size(); ++r) {
        out << "  {";
        const auto& row = table.rows[r];
        for (std::size_t i = 0; i < row.size(); ++i) {
            if (i) out << ", ";
            json_escape(out, table.columns[i]);
            out << ": ";
            if (row[i].quoted)
                json_escape(out, row[i].text);
            else
                out << row[i].text;
        }
        out << '}' << (r + 1 < table.rows.size() ? "," : "") << '\n';
    }
    out << "]\n";
}

void write_table(std::ostream& out, const Table& table, OutputFormat format) {
    if (format == OutputFormat::Csv)
        write_csv(out, table);
    else
        write_json(out, table);
}

}  // namespace relect
