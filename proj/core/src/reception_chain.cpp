#include "rastab/reception_chain.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include "rastab/errors.hpp"

namespace rastab {
namespace {

// Exact enough in double up to n = 60; beyond that the log-gamma form keeps
// C(n,k) q^k (1-q)^(n-k) finite when C(n,k) alone would overflow.
constexpr std::size_t kMultiplicativeBinomialLimit = 60;

double binomial_pmf(std::size_t n, std::size_t k, double q) {
    if (q == 1.0) {
        return k == n ? 1.0 : 0.0;
    }
    if (n <= kMultiplicativeBinomialLimit) {
        double c = 1.0;
        for (std::size_t t = 1; t <= k; ++t) {
            c = c * static_cast<double>(n - k + t) / static_cast<double>(t);
        }
        return c * std::pow(q, static_cast<double>(k)) * std::pow(1.0 - q, static_cast<double>(n - k));
    }
    const double dn = static_cast<double>(n);
    const double dk = static_cast<double>(k);
    const double log_c = std::lgamma(dn + 1.0) - std::lgamma(dk + 1.0) - std::lgamma(dn - dk + 1.0);
    return std::exp(log_c + dk * std::log(q) + (dn - dk) * std::log1p(-q));
}

// 1 - (1-q)^e without cancellation for small q.
double one_minus_stay(std::size_t e, double q) {
    if (q == 1.0) {
        return 1.0;
    }
    return -std::expm1(static_cast<double>(e) * std::log1p(-q));
}

void check_chain_args(std::size_t m, double q) {
    if (m == 0) {
        throw std::invalid_argument("receiver chain needs at least one destination");
    }
    if (!(q > 0.0 && q <= 1.0)) {
        throw std::invalid_argument("receiver chain success probability must lie in (0,1], got " +
                                    std::to_string(q));
    }
}

template <class Entry>
ReceiverChainSolution solve_recursion(std::size_t m, double q, Entry &&entry) {
    ReceiverChainSolution out;
    out.pi.assign(m, 0.0);
    out.pi[0] = 1.0;
    for (std::size_t i = 1; i < m; ++i) {
        double inflow = 0.0;
        for (std::size_t k = 1; k <= i; ++k) {
            inflow += out.pi[i - k] * entry(i - k, i);
        }
        const double leave = one_minus_stay(m - i, q);
        if (!(leave > 0.0)) {
            throw DegenerateChainError("receiver state " + std::to_string(i) + " is absorbing");
        }
        out.pi[i] = inflow / leave;
    }

    double total = 0.0;
    for (double v : out.pi) {
        total += v;
    }
    for (double &v : out.pi) {
        v /= total;
    }

    double alpha = 0.0;
    for (std::size_t i = 0; i < m; ++i) {
        alpha += out.pi[i] * std::pow(q, static_cast<double>(m - i));
    }
    out.alpha = alpha;
    return out;
}

} // namespace

StationaryDistribution2x2 stationary_2x2(double tau, double phi, double sigma) {
    if (phi == 0.0 || sigma == 0.0) {
        throw DegenerateChainError("a destination is unreachable (phi or sigma is zero)");
    }
    if (!(phi > 0.0 && phi <= 1.0 && sigma > 0.0 && sigma <= 1.0 && tau >= 0.0)) {
        throw std::invalid_argument("reception probabilities out of range");
    }
    if (tau > phi || tau > sigma) {
        throw std::invalid_argument("joint reception probability exceeds a marginal");
    }
    const double den = (phi + sigma) * (phi + sigma - tau) - phi * sigma;
    if (!(den > 0.0)) {
        throw DegenerateChainError("receiver chain normalization is not positive");
    }
    return {phi * sigma / den, sigma * (sigma - tau) / den, phi * (phi - tau) / den};
}

double p_star_entry(std::size_t m, double q, std::size_t i, std::size_t j) {
    const double dm = static_cast<double>(m);
    if (j == 0) {
        if (i == 0) {
            return std::pow(1.0 - q, dm) + std::pow(q, dm);
        }
        return std::pow(q, static_cast<double>(m - i));
    }
    if (i > j) {
        return 0.0;
    }
    if (i == j) {
        return std::pow(1.0 - q, static_cast<double>(m - i));
    }
    return binomial_pmf(m - i, j - i, q);
}

ReceiverChainM::ReceiverChainM(std::size_t m, double q) : m_(m), q_(q), p_star_(m * m, 0.0) {
    check_chain_args(m, q);
    for (std::size_t i = 0; i < m; ++i) {
        for (std::size_t j = 0; j < m; ++j) {
            p_star_[i * m + j] = p_star_entry(m, q, i, j);
        }
    }
}

ReceiverChainM build_p_star(std::size_t m, double q) { return ReceiverChainM(m, q); }

ReceiverChainSolution solve_chain(const ReceiverChainM &chain) {
    return solve_recursion(chain.m(), chain.q(), [&](std::size_t i, std::size_t j) { return chain(i, j); });
}

ReceiverChainSolution solve_chain(std::size_t m, double q) {
    check_chain_args(m, q);
    return solve_recursion(m, q, [&](std::size_t i, std::size_t j) { return p_star_entry(m, q, i, j); });
}

} // namespace rastab
