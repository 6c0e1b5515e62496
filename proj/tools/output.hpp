#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <utility>
#include <vector>

namespace rastab::cli {

/// Shortest representation that parses back to the same double.
std::string format_number(double v);

class CsvTable {
public:
    void meta(const std::string &key, const std::string &value);
    void columns(std::vector<std::string> names);
    void row(std::vector<std::string> cells);

    std::string str() const;

private:
    std::vector<std::pair<std::string, std::string>> meta_;
    std::vector<std::string> columns_;
    std::vector<std::vector<std::string>> rows_;
};

/// Everything needed to rerun a command and get the same bytes back.
struct RunManifest {
    std::string subcommand;
    std::vector<std::string> arguments;
    std::string config_path;
    std::string config_text; // verbatim document, empty without --config
    std::string out_dir;
    std::uint64_t seed = 0;
    std::string solver_json = "{}";
    std::string version;
    std::vector<std::string> outputs;
};

std::string manifest_json(const RunManifest &m);

/// Writes text to `dir/name`, creating `dir` when needed. Returns the path.
std::filesystem::path write_file(const std::filesystem::path &dir, const std::string &name, const std::string &text);

} // namespace rastab::cli
