#pragma once

#include <array>
#include <cstddef>
#include <variant>
#include <vector>

namespace rastab {

/// Reception probabilities of the two-source multipacket-reception channel.
/// Indices are zero-based: `q_solo[n][m]` is the probability that a packet of
/// source n reaches destination m when n transmits alone, `q_joint[n][m]` the
/// same event when both sources transmit.
struct ChannelModel2x2 {
    std::array<std::array<double, 2>, 2> q_solo{};
    std::array<std::array<double, 2>, 2> q_joint{};

    friend bool operator==(const ChannelModel2x2 &, const ChannelModel2x2 &) = default;
};

/// N sources, M indistinguishable destinations, and a collision whenever two
/// or more sources transmit. `q_solo[n]` applies to every destination.
struct CollisionChannel {
    std::size_t n_sources = 0;
    std::size_t m_destinations = 0;
    std::vector<double> q_solo;

    friend bool operator==(const CollisionChannel &, const CollisionChannel &) = default;
};

using ChannelModel = std::variant<ChannelModel2x2, CollisionChannel>;

struct TransmitPolicy {
    std::vector<double> p;

    std::size_t size() const noexcept { return p.size(); }
    double operator[](std::size_t n) const { return p[n]; }

    friend bool operator==(const TransmitPolicy &, const TransmitPolicy &) = default;
};

struct ArrivalRates {
    std::vector<double> lambda;

    std::size_t size() const noexcept { return lambda.size(); }
    double operator[](std::size_t n) const { return lambda[n]; }

    friend bool operator==(const ArrivalRates &, const ArrivalRates &) = default;
};

struct ValidationOptions {
    // Permit q_joint > q_solo (capture channels where interference helps).
    bool allow_joint_above_solo = false;
};

/// Returns `c` unchanged or throws ValidationError naming the bad entry.
ChannelModel2x2 validate_channel_2x2(const ChannelModel2x2 &c, ValidationOptions options = {});

/// Rejects N = 0, M = 0, a q vector of the wrong length and any q outside (0, 1].
CollisionChannel validate_collision_channel(const CollisionChannel &c);

ChannelModel validate_channel(const ChannelModel &c, ValidationOptions options = {});

void validate_policy(const TransmitPolicy &p, std::size_t n_sources);
void validate_arrivals(const ArrivalRates &lambda, std::size_t n_sources);

std::size_t source_count(const ChannelModel &c);

namespace presets {

/// Weak capture: interference almost always destroys the packet.
ChannelModel2x2 mpr_weak();
/// Strong multipacket reception.
ChannelModel2x2 mpr_strong();
/// Classic collision channel expressed in the 2x2 model (q_solo = 1, q_joint = 0).
ChannelModel2x2 mpr_pure_collision();
/// Every packet received everywhere regardless of interference.
ChannelModel2x2 mpr_perfect();

} // namespace presets

} // namespace rastab
