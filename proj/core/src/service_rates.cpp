#include "rastab/service_rates.hpp"

#include <algorithm>
#include <bit>
#include <cstdint>
#include <mutex>
#include <shared_mutex>
#include <stdexcept>
#include <unordered_map>

#include "rastab/errors.hpp"
#include "rastab/reception_chain.hpp"

namespace rastab {
namespace {

struct AlphaKey {
    std::size_t m;
    std::uint64_t q_bits;

    bool operator==(const AlphaKey &) const = default;
};

struct AlphaKeyHash {
    std::size_t operator()(const AlphaKey &k) const noexcept {
        return std::hash<std::uint64_t>{}(k.q_bits ^ (static_cast<std::uint64_t>(k.m) * 0x9E3779B97F4A7C15ULL));
    }
};

class AlphaCache {
public:
    double get(std::size_t m, double q) {
        const AlphaKey key{m, std::bit_cast<std::uint64_t>(q)};
        {
            std::shared_lock lock(mutex_);
            if (auto it = table_.find(key); it != table_.end()) {
                return it->second;
            }
        }
        const double value = solve_chain(m, q).alpha;
        std::unique_lock lock(mutex_);
        table_.emplace(key, value);
        return value;
    }

private:
    std::shared_mutex mutex_;
    std::unordered_map<AlphaKey, double, AlphaKeyHash> table_;
};

AlphaCache &alpha_cache() {
    static AlphaCache cache;
    return cache;
}

} // namespace

SuccessProbs2x2 success_probs_2x2(const ChannelModel2x2 &c, double p_other, std::size_t source) {
    if (source > 1) {
        throw std::out_of_range("2x2 channel has sources 0 and 1");
    }
    const auto &solo = c.q_solo[source];
    const auto &joint = c.q_joint[source];
    const double quiet = 1.0 - p_other;
    SuccessProbs2x2 s;
    s.p_other = p_other;
    s.tau = quiet * solo[0] * solo[1] + p_other * joint[0] * joint[1];
    s.phi = quiet * solo[0] + p_other * joint[0];
    s.sigma = quiet * solo[1] + p_other * joint[1];
    return s;
}

namespace {

double mu_2x2_at(const ChannelModel2x2 &c, double p_self, double p_other, std::size_t source) {
    const SuccessProbs2x2 s = success_probs_2x2(c, p_other, source);
    if (s.phi == 0.0 || s.sigma == 0.0) {
        throw DegenerateChainError("source " + std::to_string(source) +
                                   " cannot reach every destination (phi or sigma is zero)");
    }
    const double both = s.phi + s.sigma - s.tau;
    const double den = (s.phi + s.sigma) * both - s.phi * s.sigma;
    return p_self * s.phi * s.sigma * both / den;
}

} // namespace

double mu_backlogged_2x2(const ChannelModel2x2 &c, const TransmitPolicy &p, std::size_t source) {
    return mu_2x2_at(c, p[source], p[1 - source], source);
}

double mu_empty_2x2(const ChannelModel2x2 &c, const TransmitPolicy &p, std::size_t source) {
    return mu_2x2_at(c, p[source], 0.0, source);
}

ServiceRates service_rates_2x2(const ChannelModel2x2 &c, const TransmitPolicy &p) {
    ServiceRates r;
    for (std::size_t n = 0; n < 2; ++n) {
        r.mu_b.push_back(mu_backlogged_2x2(c, p, n));
        r.mu_e.push_back(mu_empty_2x2(c, p, n));
    }
    return r;
}

double beta(const TransmitPolicy &p, std::size_t source, std::span<const std::size_t> backlogged) {
    if (std::find(backlogged.begin(), backlogged.end(), source) == backlogged.end()) {
        throw std::invalid_argument("source " + std::to_string(source) + " is not in the backlogged set");
    }
    double b = p[source];
    for (std::size_t l : backlogged) {
        if (l != source) {
            b *= 1.0 - p[l];
        }
    }
    return b;
}

double alpha(std::size_t m_destinations, double q) { return alpha_cache().get(m_destinations, q); }

double mu_collision(const CollisionChannel &c, const TransmitPolicy &p, std::size_t source,
                    std::span<const std::size_t> backlogged) {
    return beta(p, source, backlogged) * alpha(c.m_destinations, c.q_solo[source]);
}

ServiceRates service_rates_collision(const CollisionChannel &c, const TransmitPolicy &p) {
    std::vector<std::size_t> everyone(c.n_sources);
    for (std::size_t n = 0; n < c.n_sources; ++n) {
        everyone[n] = n;
    }
    ServiceRates r;
    for (std::size_t n = 0; n < c.n_sources; ++n) {
        const std::size_t alone[] = {n};
        r.mu_b.push_back(mu_collision(c, p, n, everyone));
        r.mu_e.push_back(mu_collision(c, p, n, alone));
    }
    return r;
}

ServiceRates service_rates(const ChannelModel &c, const TransmitPolicy &p) {
    if (const auto *mpr = std::get_if<ChannelModel2x2>(&c)) {
        return service_rates_2x2(*mpr, p);
    }
    return service_rates_collision(std::get<CollisionChannel>(c), p);
}

} // namespace rastab
