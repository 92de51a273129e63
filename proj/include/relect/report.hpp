#pragma once

#include <cstdint>
#include <ostream>
#include <string>
#include <vector>

namespace relect {

// Row-oriented records for the CLI. All numeric output is printed with six
// significant digits; CSV uses a header row, comma separators, LF endings;
// JSON is an array of flat objects.

std::string format_sig6(double value);

struct Cell {
    std::string text;
    bool quoted = false;  // strings are quoted in JSON, numbers are not
};

Cell num_cell(double value);
Cell int_cell(std::int64_t value);
Cell str_cell(std::string value);

struct Table {
    std::vector<std::string> columns;
    std::vector<std::vector<Cell>> rows;

    void add_row(std::vector<Cell> cells);
};

enum class OutputFormat : std::uint8_t { Csv, Json };

void write_csv(std::ostream& out, const Table& table);
void write_json(std::ostream& out, const Table& table);
void write_table(std::ostream& out, const Table& table, OutputFormat format);

}  // namespace relect
