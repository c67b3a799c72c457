#pragma once

#include <cstddef>
#include <string>
#include <vector>

namespace selfadj::harness {

/// Plain comma-separated table; every cell is already formatted text.
struct CsvTable {
    std::vector<std::string> header;
    std::vector<std::vector<std::string>> rows;

    void add_row(std::vector<std::string> row);
    [[nodiscard]] std::size_t column(const std::string& name) const;  // throws if absent
    [[nodiscard]] double number(std::size_t row, const std::string& name) const;
};

std::string cell(double value);  // format_real
std::string cell(std::size_t value);
std::string cell(bool value);

/// Throws Error{InvalidConfig} when the file cannot be written or read.
void write_csv(const std::string& path, const CsvTable& table);
CsvTable read_csv(const std::string& path);

}  // namespace selfadj::harness
