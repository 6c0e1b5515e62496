#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace rastab::cli {

/// Contents of a bundled file from data/reference, embedded at build time.
std::string_view reference_file(std::string_view name);

/// Comma-separated rows of a bundled CSV; '#' lines skipped, header first.
std::vector<std::vector<std::string>> reference_csv(std::string_view name);

} // namespace rastab::cli
