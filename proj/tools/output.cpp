#include "output.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

namespace rastab::cli {

std::string format_number(double v) {
    if (std::isnan(v)) {
        return "nan";
    }
    if (std::isinf(v)) {
        return v > 0 ? "inf" : "-inf";
    }
    char buf[64];
    const auto [end, ec] = std::to_chars(buf, buf + sizeof buf, v);
    if (ec != std::errc{}) {
        throw std::runtime_error("number formatting failed");
    }
    return std::string(buf, end);
}

void CsvTable::meta(const std::string &key, const std::string &value) { meta_.emplace_back(key, value); }

void CsvTable::columns(std::vector<std::string> names) { columns_ = std::move(names); }

void CsvTable::row(std::vector<std::string> cells) {
    if (cells.size() != columns_.size()) {
        throw std::logic_error("csv row width does not match the header");
    }
    rows_.push_back(std::move(cells));
}

namespace {

void join(std::ostringstream &out, const std::vector<std::string> &cells) {
    for (std::size_t i = 0; i < cells.size(); ++i) {
        if (i > 0) {
            out << ',';
        }
        out << cells[i];
    }
    out << '\n';
}

} // namespace

std::string CsvTable::str() const {
    std::ostringstream out;
    for (const auto &[key, value] : meta_) {
        out << "# " << key << ": " << value << '\n';
    }
    join(out, columns_);
    for (const auto &r : rows_) {
        join(out, r);
    }
    return out.str();
}

std::string manifest_json(const RunManifest &m) {
    nlohmann::ordered_json j;
    j["tool"] = "rastab";
    j["version"] = m.version;
    j["subcommand"] = m.subcommand;
    j["arguments"] = m.arguments;
    j["config_path"] = m.config_path;
    if (!m.config_text.empty()) {
        j["config"] = nlohmann::ordered_json::parse(m.config_text);
    }
    j["out_dir"] = m.out_dir;
    j["seed"] = m.seed;
    j["solver"] = nlohmann::ordered_json::parse(m.solver_json);
    j["outputs"] = m.outputs;
    return j.dump(2) + "\n";
}

std::filesystem::path write_file(const std::filesystem::path &dir, const std::string &name, const std::string &text) {
    std::filesystem::create_directories(dir);
    const auto path = dir / name;
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        throw std::runtime_error("cannot write " + path.string());
    }
    out << text;
    return path;
}

} // namespace rastab::cli
