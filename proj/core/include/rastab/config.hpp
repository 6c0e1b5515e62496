#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "rastab/channel.hpp"

namespace rastab {

struct SimulationSection {
    std::optional<std::uint64_t> horizon;
    std::optional<std::uint64_t> warmup;
    std::size_t dominant_k = 0;
    std::uint64_t trace_stride = 0;
    std::size_t batches = 32;
};

/// Everything a configuration document can carry. Only the channel is
/// mandatory; each subcommand checks for the sections it needs.
struct ConfigDocument {
    ChannelModel channel;
    bool allow_joint_above_solo = false;
    std::optional<TransmitPolicy> p;
    std::optional<ArrivalRates> lambda;
    std::vector<std::vector<double>> fixed_lambda; // one row per bounds query
    std::vector<double> lambda1_grid;
    std::optional<std::uint64_t> seed;
    SimulationSection simulation;
};

/// Parses and validates a channel object ({"model": "mpr2x2" | "collision", ...}).
/// Errors are ValidationError naming the offending field.
ChannelModel parse_channel(std::string_view json_text, ValidationOptions options = {});

/// Canonical JSON text of a channel; parse_channel(channel_to_json(c)) == c.
std::string channel_to_json(const ChannelModel &c);

ConfigDocument parse_config(std::string_view json_text);

ConfigDocument load_config(const std::string &path);

} // namespace rastab
