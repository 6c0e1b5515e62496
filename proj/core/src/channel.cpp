#include "rastab/channel.hpp"

#include <cmath>
#include <string>

#include "rastab/errors.hpp"

namespace rastab {
namespace {

std::string index2(const char *name, std::size_t n, std::size_t m) {
    return std::string(name) + "[" + std::to_string(n) + "][" + std::to_string(m) + "]";
}

std::string index1(const char *name, std::size_t n) {
    return std::string(name) + "[" + std::to_string(n) + "]";
}

void require_probability(double v, const std::string &field) {
    if (!std::isfinite(v) || v < 0.0 || v > 1.0) {
        throw ValidationError(field, "probability out of range [0,1]");
    }
}

} // namespace

ChannelModel2x2 validate_channel_2x2(const ChannelModel2x2 &c, ValidationOptions options) {
    for (std::size_t n = 0; n < 2; ++n) {
        for (std::size_t m = 0; m < 2; ++m) {
            require_probability(c.q_solo[n][m], index2("q_solo", n, m));
            require_probability(c.q_joint[n][m], index2("q_joint", n, m));
        }
    }
    if (!options.allow_joint_above_solo) {
        for (std::size_t n = 0; n < 2; ++n) {
            for (std::size_t m = 0; m < 2; ++m) {
                if (c.q_joint[n][m] > c.q_solo[n][m]) {
                    throw ValidationError(index2("q_joint", n, m), "joint exceeds solo");
                }
            }
        }
    }
    return c;
}

CollisionChannel validate_collision_channel(const CollisionChannel &c) {
    if (c.n_sources == 0) {
        throw ValidationError("n_sources", "must be at least 1");
    }
    if (c.m_destinations == 0) {
        throw ValidationError("m_destinations", "must be at least 1");
    }
    if (c.q_solo.size() != c.n_sources) {
        throw ValidationError("q_solo", "expected " + std::to_string(c.n_sources) + " entries, got " +
                                            std::to_string(c.q_solo.size()));
    }
    for (std::size_t n = 0; n < c.q_solo.size(); ++n) {
        require_probability(c.q_solo[n], index1("q_solo", n));
        if (c.q_solo[n] == 0.0) {
            throw ValidationError(index1("q_solo", n), "zero success probability");
        }
    }
    return c;
}

ChannelModel validate_channel(const ChannelModel &c, ValidationOptions options) {
    return std::visit(
        [&](const auto &model) -> ChannelModel {
            using T = std::decay_t<decltype(model)>;
            if constexpr (std::is_same_v<T, ChannelModel2x2>) {
                return validate_channel_2x2(model, options);
            } else {
                return validate_collision_channel(model);
            }
        },
        c);
}

void validate_policy(const TransmitPolicy &p, std::size_t n_sources) {
    if (p.size() != n_sources) {
        throw ValidationError("p", "expected " + std::to_string(n_sources) + " entries, got " +
                                       std::to_string(p.size()));
    }
    for (std::size_t n = 0; n < p.size(); ++n) {
        require_probability(p[n], index1("p", n));
    }
}

void validate_arrivals(const ArrivalRates &lambda, std::size_t n_sources) {
    if (lambda.size() != n_sources) {
        throw ValidationError("lambda", "expected " + std::to_string(n_sources) + " entries, got " +
                                            std::to_string(lambda.size()));
    }
    for (std::size_t n = 0; n < lambda.size(); ++n) {
        const double v = lambda[n];
        if (!std::isfinite(v) || v < 0.0 || v >= 1.0) {
            throw ValidationError(index1("lambda", n), "arrival rate out of range [0,1)");
        }
    }
}

std::size_t source_count(const ChannelModel &c) {
    if (std::holds_alternative<ChannelModel2x2>(c)) {
        return 2;
    }
    return std::get<CollisionChannel>(c).n_sources;
}

namespace presets {

// Rows list source 1 then source 2; columns are destinations 1 and 2.
ChannelModel2x2 mpr_weak() {
    return {{{{0.8, 0.6}, {0.5, 0.7}}}, {{{0.1, 0.05}, {0.05, 0.25}}}};
}

ChannelModel2x2 mpr_strong() {
    return {{{{0.8, 0.6}, {0.6, 0.8}}}, {{{0.5, 0.4}, {0.4, 0.5}}}};
}

ChannelModel2x2 mpr_pure_collision() {
    return {{{{1.0, 1.0}, {1.0, 1.0}}}, {{{0.0, 0.0}, {0.0, 0.0}}}};
}

ChannelModel2x2 mpr_perfect() {
    return {{{{1.0, 1.0}, {1.0, 1.0}}}, {{{1.0, 1.0}, {1.0, 1.0}}}};
}

} // namespace presets

} // namespace rastab
