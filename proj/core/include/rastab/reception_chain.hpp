#pragma once

#include <cstddef>
#include <vector>

namespace rastab {

// Receiver states of a head-of-line packet in the two-destination model.
// (1,1) is not a state: reaching it completes the packet.
enum class ReceiverState2x2 { none, dest2_only, dest1_only };

struct StationaryDistribution2x2 {
    double pi_00 = 0.0; // nobody holds the packet
    double pi_01 = 0.0; // destination 2 holds it, destination 1 still missing
    double pi_10 = 0.0; // destination 1 holds it, destination 2 still missing
};

/// Closed-form stationary distribution of the three-state receiver chain.
///
/// `tau` is the per-attempt probability of reaching both destinations, `phi`
/// of reaching destination 1 and `sigma` of reaching destination 2. Throws
/// DegenerateChainError if phi or sigma is zero and std::invalid_argument if
/// tau exceeds either marginal.
StationaryDistribution2x2 stationary_2x2(double tau, double phi, double sigma);

/// Conditional transition matrix P* of the M-destination receiver chain,
/// given a collision-free access. State i counts the destinations already
/// holding the packet, i = 0..M-1.
class ReceiverChainM {
public:
    ReceiverChainM(std::size_t m, double q);

    std::size_t m() const noexcept { return m_; }
    double q() const noexcept { return q_; }

    double operator()(std::size_t i, std::size_t j) const { return p_star_[i * m_ + j]; }
    const std::vector<double> &row_major() const noexcept { return p_star_; }

private:
    std::size_t m_;
    double q_;
    std::vector<double> p_star_;
};

/// Single entry p*_{i,j} of the conditional transition matrix, computed
/// without materializing the matrix.
double p_star_entry(std::size_t m, double q, std::size_t i, std::size_t j);

ReceiverChainM build_p_star(std::size_t m, double q);

struct ReceiverChainSolution {
    std::vector<double> pi;
    double alpha = 0.0; // sum_i pi_i q^(M-i)
};

/// Forward recursion for the stationary distribution followed by
/// normalization; also returns the completion constant alpha.
ReceiverChainSolution solve_chain(const ReceiverChainM &chain);

/// Same recursion evaluated on the fly in O(M) memory.
ReceiverChainSolution solve_chain(std::size_t m, double q);

} // namespace rastab
