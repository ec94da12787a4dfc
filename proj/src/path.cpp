#include "roughflow/path.hpp"

#include <fstream>
#include <sstream>

namespace roughflow {

namespace {

std::vector<std::vector<std::string>> rows_from_stream(std::istream& in) {
    std::vector<std::vector<std::string>> rows;
    std::string line;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty() || line[0] == '#') continue;
        std::vector<std::string> row;
        std::stringstream ss(line);
        std::string cell;
        while (std::getline(ss, cell, ',')) {
            auto b = cell.find_first_not_of(" \t");
            auto e = cell.find_last_not_of(" \t");
            row.push_back(b == std::string::npos ? std::string() : cell.substr(b, e - b + 1));
        }
        rows.push_back(std::move(row));
    }
    return rows;
}

} // namespace

std::vector<std::vector<std::string>> read_csv_rows(const std::string& file) {
    std::ifstream in(file);
    if (!in) throw config_error("cannot open CSV file: " + file);
    return rows_from_stream(in);
}

std::vector<std::vector<std::string>> parse_csv_rows(const std::string& text) {
    std::stringstream in(text);
    return rows_from_stream(in);
}

} // namespace roughflow
