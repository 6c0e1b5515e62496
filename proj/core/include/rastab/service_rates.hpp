#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "rastab/channel.hpp"

namespace rastab {

/// Per-attempt reception probabilities of one source in the 2x2 model, with
/// the other source transmitting with probability `p_other`.
struct SuccessProbs2x2 {
    double tau = 0.0;   // both destinations
    double phi = 0.0;   // destination 1
    double sigma = 0.0; // destination 2
    double p_other = 0.0;
};

/// Backlogged (`mu_b`) and empty-competitor (`mu_e`) service rates per source.
struct ServiceRates {
    std::vector<double> mu_b;
    std::vector<double> mu_e;
};

SuccessProbs2x2 success_probs_2x2(const ChannelModel2x2 &c, double p_other, std::size_t source);

/// Service rate of `source` when the other source is backlogged. Throws
/// DegenerateChainError when a destination is unreachable.
double mu_backlogged_2x2(const ChannelModel2x2 &c, const TransmitPolicy &p, std::size_t source);

/// Service rate of `source` when the other source is empty.
double mu_empty_2x2(const ChannelModel2x2 &c, const TransmitPolicy &p, std::size_t source);

ServiceRates service_rates_2x2(const ChannelModel2x2 &c, const TransmitPolicy &p);

/// Probability that `source` transmits while every other member of
/// `backlogged` stays silent. `source` must be a member of `backlogged`.
double beta(const TransmitPolicy &p, std::size_t source, std::span<const std::size_t> backlogged);

/// Completion constant of the M-destination receiver chain. Memoized per
/// (M, q); safe to call concurrently.
double alpha(std::size_t m_destinations, double q);

/// beta * alpha for the collision channel.
double mu_collision(const CollisionChannel &c, const TransmitPolicy &p, std::size_t source,
                    std::span<const std::size_t> backlogged);

ServiceRates service_rates_collision(const CollisionChannel &c, const TransmitPolicy &p);

ServiceRates service_rates(const ChannelModel &c, const TransmitPolicy &p);

} // namespace rastab
