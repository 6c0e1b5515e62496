#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "rastab/channel.hpp"
#include "rastab/service_rates.hpp"

namespace rastab {

enum class RegionKind { stability_exact, stability_lower, stability_upper, throughput };

const char *to_string(RegionKind kind);
RegionKind region_kind_from_string(const std::string &name);

/// How the stability-rank tests order sources for a candidate policy.
enum class RankOrdering {
    /// Sort by the rank key for every candidate policy.
    sorted,
    /// Keep the caller's index order, with the optimized source last.
    index,
};

/// Which sources enter the min over alpha in the sufficient test's C_k.
enum class MinAlphaRange { before_k, through_k };

struct SolverSettings {
    std::size_t grid_two_sources = 64;  // nodes per axis, N = 2
    std::size_t grid_small = 24;        // nodes per axis, 3 <= N <= 5
    std::size_t grid_large = 24;        // nodes per axis of the reduced 2-D grid, N > 5
    std::size_t candidates = 4;         // grid nodes refined locally
    std::size_t tight_seeds = 16;       // tight throughput policies refined locally (rank tests)
    double simplex_tolerance = 1e-6;    // Nelder-Mead stopping diameter
    double bisection_tolerance = 1e-7;  // lambda_N feasibility bisection
    double p_min = 1e-9;                // smallest policy entry for the rank tests
    double p_max = 1.0 - 1e-9;          // largest policy entry (rank tests divide by 1-p)
    RankOrdering ordering = RankOrdering::index;
    MinAlphaRange min_alpha = MinAlphaRange::before_k;
    unsigned jobs = 1; // worker threads for boundary sweeps
};

struct RegionPoint {
    ArrivalRates lambda;
    TransmitPolicy p_opt;
    RegionKind kind = RegionKind::throughput;
    bool feasible = true;
    std::size_t evaluations = 0;
    // Policies skipped because the exact two-source condition's hypothesis
    // (mu_b <= mu_e) failed there.
    std::size_t excluded = 0;
};

struct RegionBoundary {
    std::vector<RegionPoint> points;
    std::string channel;
    SolverSettings solver;
};

struct RankedSources {
    std::vector<std::size_t> order; // order[r] = original index of rank r
    std::vector<double> ratios;     // sorted rank keys
};

/// True iff (lambda1, lambda2) lies in the union of the two regions of the
/// exact two-source condition for fixed p. Throws HypothesisError when some
/// backlogged rate exceeds its empty-competitor rate.
bool stability_condition_2src(const ServiceRates &mu, const ArrivalRates &lambda);

/// lambda_n < mu_b[n] for every n (a zero arrival rate is always served).
bool throughput_condition(std::span<const double> mu_b, const ArrivalRates &lambda);

/// Sorts sources ascending by lambda_n (1-p_n) / (alpha_n p_n), stable in
/// the original index. A source with lambda_n = 0 has key 0.
RankedSources rank_sources(const ArrivalRates &lambda, const TransmitPolicy &p, std::span<const double> alpha);

struct SufficientResult {
    bool stable = false;
    bool collapsed = false;     // some B_j <= 0 was needed downstream
    std::vector<double> bounds; // B_k in the evaluated order
};

struct NecessaryResult {
    bool possibly_stable = false;
    std::vector<double> bounds; // right-hand side of the k-th condition
};

/// Sufficient stability test evaluated in the given source order.
SufficientResult sufficient_bound(std::span<const double> alpha, std::span<const double> lambda,
                                  std::span<const double> p, MinAlphaRange min_alpha = MinAlphaRange::before_k);
SufficientResult sufficient_bound(const CollisionChannel &c, const ArrivalRates &lambda, const TransmitPolicy &p,
                                  MinAlphaRange min_alpha = MinAlphaRange::before_k);

/// Necessary stability test evaluated in the given source order.
NecessaryResult necessary_bound(std::span<const double> alpha, std::span<const double> lambda,
                                std::span<const double> p);
NecessaryResult necessary_bound(const CollisionChannel &c, const ArrivalRates &lambda, const TransmitPolicy &p);

/// Applies `settings.ordering` and runs the test selected by `kind`
/// (stability_lower, stability_upper or throughput).
bool rank_test(RegionKind kind, std::span<const double> alpha, std::span<const double> lambda,
               std::span<const double> p, const SolverSettings &settings);

/// Maximizes lambda_N over p with lambda_1..lambda_{N-1} held at `fixed`.
RegionPoint optimize_lambdaN(const CollisionChannel &c, std::span<const double> fixed, RegionKind kind,
                             const SolverSettings &settings = {});

/// Largest lambda_2 admissible at the fixed policy `p` for the given lambda_1
/// (negative when lambda_1 itself is not admissible). `kind` is
/// stability_exact or throughput.
double max_lambda2_at(const ChannelModel &c, RegionKind kind, double lambda1, const TransmitPolicy &p);

/// Two-source boundary: for every lambda_1 in the grid, the supremum of
/// lambda_2 over all policies.
RegionBoundary boundary_2src(const ChannelModel &c, RegionKind kind, std::span<const double> lambda1_grid,
                             const SolverSettings &settings = {});

} // namespace rastab
