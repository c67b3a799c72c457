#include "selfadj/harness/csv.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

#include "selfadj/error.hpp"
#include "selfadj/io.hpp"

namespace selfadj::harness {

void CsvTable::add_row(std::vector<std::string> row) {
    if (row.size() != header.size()) {
        throw Error(ErrorKind::DimensionMismatch, "CSV row has " + std::to_string(row.size()) + " cells, header has " +
                                                      std::to_string(header.size()));
    }
    rows.push_back(std::move(row));
}

std::size_t CsvTable::column(const std::string& name) const {
    const auto it = std::find(header.begin(), header.end(), name);
    if (it == header.end()) throw Error(ErrorKind::InvalidConfig, "no CSV column '" + name + "'");
    return static_cast<std::size_t>(it - header.begin());
}

double CsvTable::number(std::size_t row, const std::string& name) const {
    return std::stod(rows.at(row).at(column(name)));
}

std::string cell(double value) { return format_real(value); }
std::string cell(std::size_t value) { return std::to_string(value); }
std::string cell(bool value) { return value ? "true" : "false"; }

void write_csv(const std::string& path, const CsvTable& table) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error(ErrorKind::InvalidConfig, "cannot write '" + path + "'");
    auto line = [&out](const std::vector<std::string>& cells) {
        for (std::size_t i = 0; i < cells.size(); ++i) out << (i ? "," : "") << cells[i];
        out << '\n';
    };
    line(table.header);
    for (const auto& row : table.rows) line(row);
    if (!out) throw Error(ErrorKind::InvalidConfig, "failed writing '" + path + "'");
}

CsvTable read_csv(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error(ErrorKind::InvalidConfig, "cannot read '" + path + "'");
    auto split = [](const std::string& text) {
        std::vector<std::string> cells;
        std::stringstream s(text);
        std::string c;
        while (std::getline(s, c, ',')) cells.push_back(c);
        if (!text.empty() && text.back() == ',') cells.emplace_back();
        return cells;
    };
    CsvTable table;
    std::string text;
    if (!std::getline(in, text)) throw Error(ErrorKind::InvalidConfig, "empty CSV '" + path + "'");
    table.header = split(text);
    while (std::getline(in, text)) {
        if (!text.empty()) table.add_row(split(text));
    }
    return table;
}

}  // namespace selfadj::harness
