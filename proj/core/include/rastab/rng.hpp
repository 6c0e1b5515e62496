#pragma once

#include <array>
#include <cstdint>

namespace rastab {

/// Philox4x32-10 counter-based generator. Every draw is a pure function of
/// (key, counter), so two simulations sharing a seed see identical random
/// numbers for identical (purpose, source, slot, index) tuples. That is what
/// couples the original and dominant systems slot by slot.
class Philox4x32 {
public:
    using Block = std::array<std::uint32_t, 4>;
    using Key = std::array<std::uint32_t, 2>;

    explicit constexpr Philox4x32(Key key) : key_(key) {}

    constexpr Block operator()(Block ctr) const {
        Key key = key_;
        for (int round = 0; round < 10; ++round) {
            if (round > 0) {
                key[0] += kWeyl0;
                key[1] += kWeyl1;
            }
            const std::uint64_t p0 = static_cast<std::uint64_t>(kMul0) * ctr[0];
            const std::uint64_t p1 = static_cast<std::uint64_t>(kMul1) * ctr[2];
            ctr = {static_cast<std::uint32_t>(p1 >> 32) ^ ctr[1] ^ key[0], static_cast<std::uint32_t>(p1),
                   static_cast<std::uint32_t>(p0 >> 32) ^ ctr[3] ^ key[1], static_cast<std::uint32_t>(p0)};
        }
        return ctr;
    }

private:
    static constexpr std::uint32_t kMul0 = 0xD2511F53u;
    static constexpr std::uint32_t kMul1 = 0xCD9E8D57u;
    static constexpr std::uint32_t kWeyl0 = 0x9E3779B9u;
    static constexpr std::uint32_t kWeyl1 = 0xBB67AE85u;

    Key key_;
};

/// Substream purposes. Values are part of the counter layout and must not change.
enum class Stream : std::uint32_t { arrival = 1, transmit = 2, channel = 3 };

class SimRng {
public:
    explicit constexpr SimRng(std::uint64_t seed)
        : philox_({static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32)}) {}

    /// Uniform double in [0,1) with 53 random bits.
    double uniform(Stream purpose, std::uint32_t source, std::uint64_t slot, std::uint32_t index) const {
        const auto out = philox_({static_cast<std::uint32_t>(slot), static_cast<std::uint32_t>(slot >> 32),
                                  (static_cast<std::uint32_t>(purpose) << 24) ^ source, index});
        const std::uint64_t bits = (static_cast<std::uint64_t>(out[0]) << 32) | out[1];
        return static_cast<double>(bits >> 11) * 0x1.0p-53;
    }

    bool bernoulli(double prob, Stream purpose, std::uint32_t source, std::uint64_t slot,
                   std::uint32_t index = 0) const {
        return uniform(purpose, source, slot, index) < prob;
    }

private:
    Philox4x32 philox_;
};

} // namespace rastab
