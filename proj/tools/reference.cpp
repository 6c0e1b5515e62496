#include "reference.hpp"

#include <sstream>
#include <stdexcept>

#include "reference_data.hpp"

namespace rastab::cli {

std::string_view reference_file(std::string_view name) {
    for (const auto &entry : detail::reference_entries) {
        if (entry.name == name) {
            return entry.text;
        }
    }
    throw std::out_of_range("no bundled reference file '" + std::string(name) + "'");
}

std::vector<std::vector<std::string>> reference_csv(std::string_view name) {
    std::istringstream in{std::string(reference_file(name))};
    std::vector<std::vector<std::string>> rows;
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty() || line.front() == '#') {
            continue;
        }
        std::vector<std::string> cells;
        std::istringstream fields(line);
        std::string cell;
        while (std::getline(fields, cell, ',')) {
            cells.push_back(cell);
        }
        rows.push_back(std::move(cells));
    }
    return rows;
}

} // namespace rastab::cli
