#include "rastab/regions.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <numeric>
#include <stdexcept>
#include <thread>

#include "rastab/errors.hpp"
#include "rastab/optimize.hpp"

namespace rastab {

const char *to_string(RegionKind kind) {
    switch (kind) {
    case RegionKind::stability_exact:
        return "stability-exact";
    case RegionKind::stability_lower:
        return "stability-lower";
    case RegionKind::stability_upper:
        return "stability-upper";
    case RegionKind::throughput:
        return "throughput";
    }
    return "?";
}

RegionKind region_kind_from_string(const std::string &name) {
    for (RegionKind k : {RegionKind::stability_exact, RegionKind::stability_lower, RegionKind::stability_upper,
                         RegionKind::throughput}) {
        if (name == to_string(k)) {
            return k;
        }
    }
    throw ValidationError("kind", "unknown region kind '" + name + "'");
}

namespace {

constexpr double kHypothesisSlack = 1e-12;

bool hypothesis_holds(const ServiceRates &mu) {
    for (std::size_t n = 0; n < mu.mu_b.size(); ++n) {
        if (mu.mu_b[n] > mu.mu_e[n] * (1.0 + kHypothesisSlack) + kHypothesisSlack) {
            return false;
        }
    }
    return true;
}

} // namespace

bool stability_condition_2src(const ServiceRates &mu, const ArrivalRates &lambda) {
    if (mu.mu_b.size() != 2 || mu.mu_e.size() != 2 || lambda.size() != 2) {
        throw std::invalid_argument("stability_condition_2src needs exactly two sources");
    }
    if (!hypothesis_holds(mu)) {
        throw HypothesisError("backlogged service rate exceeds empty-competitor rate");
    }
    const double l1 = lambda[0];
    const double l2 = lambda[1];
    const double m1b = mu.mu_b[0], m1e = mu.mu_e[0];
    const double m2b = mu.mu_b[1], m2e = mu.mu_e[1];
    // A source without arrivals stays empty and never interferes.
    if (l1 == 0.0 && l2 == 0.0) {
        return true;
    }
    if (l1 == 0.0) {
        return l2 < m2e;
    }
    if (l2 == 0.0) {
        return l1 < m1e;
    }
    const bool first = m2b > 0.0 && l2 < m2b && l1 < (l2 / m2b) * m1b + (1.0 - l2 / m2b) * m1e;
    const bool second = m1b > 0.0 && l1 < m1b && l2 < (l1 / m1b) * m2b + (1.0 - l1 / m1b) * m2e;
    return first || second;
}

bool throughput_condition(std::span<const double> mu_b, const ArrivalRates &lambda) {
    if (mu_b.size() != lambda.size()) {
        throw std::invalid_argument("throughput_condition: size mismatch");
    }
    for (std::size_t n = 0; n < mu_b.size(); ++n) {
        if (lambda[n] != 0.0 && !(lambda[n] < mu_b[n])) {
            return false;
        }
    }
    return true;
}

namespace {

double rank_key(double lambda, double p, double alpha) {
    if (lambda == 0.0) {
        return 0.0;
    }
    return lambda * (1.0 - p) / (alpha * p);
}

} // namespace

RankedSources rank_sources(const ArrivalRates &lambda, const TransmitPolicy &p, std::span<const double> alpha) {
    const std::size_t n = lambda.size();
    if (p.size() != n || alpha.size() != n) {
        throw std::invalid_argument("rank_sources: size mismatch");
    }
    std::vector<double> key(n);
    for (std::size_t i = 0; i < n; ++i) {
        if (lambda[i] > 0.0 && p[i] == 0.0) {
            throw std::domain_error("rank key undefined: source " + std::to_string(i) +
                                    " has arrivals but never transmits");
        }
        if (!(alpha[i] > 0.0)) {
            throw std::domain_error("rank key undefined: alpha must be positive");
        }
        key[i] = rank_key(lambda[i], p[i], alpha[i]);
    }
    RankedSources r;
    r.order.resize(n);
    std::iota(r.order.begin(), r.order.end(), std::size_t{0});
    std::stable_sort(r.order.begin(), r.order.end(), [&](std::size_t a, std::size_t b) { return key[a] < key[b]; });
    for (std::size_t i : r.order) {
        r.ratios.push_back(key[i]);
    }
    return r;
}

namespace {

// Products of (1 - p_j) for j >= k, k = 0..N (tail[N] = 1).
void tail_products(std::span<const double> p, std::vector<double> &tail) {
    const std::size_t n = p.size();
    tail.assign(n + 1, 1.0);
    for (std::size_t k = n; k-- > 0;) {
        tail[k] = tail[k + 1] * (1.0 - p[k]);
    }
}

// Core of the sufficient test. When `stop_at_failure` is set the loop ends at
// the first violated condition; `violation` accumulates lambda_k - B_k over
// violated conditions.
SufficientResult sufficient_impl(std::span<const double> alpha, std::span<const double> lambda,
                                 std::span<const double> p, MinAlphaRange min_alpha, std::size_t check_count,
                                 double *violation) {
    const std::size_t n = p.size();
    SufficientResult out;
    out.bounds.assign(n, 0.0);
    std::vector<double> tail;
    tail_products(p, tail);

    out.bounds[0] = alpha[0] * p[0] * tail[1];
    double lambda_sum = 0.0;
    double ratio_sum = 0.0;    // sum_j lambda_j p_j / B_j
    double served_sum = 0.0;   // sum_j lambda_j / alpha_j
    double idle_sum = 0.0;     // sum_i (1 - lambda_i / B_i) p_i / (1 - p_i)
    double min_alpha_before = std::numeric_limits<double>::infinity();
    bool stable = true;

    auto check = [&](std::size_t k) {
        if (k >= check_count) {
            return;
        }
        if (lambda[k] != 0.0 && !(lambda[k] < out.bounds[k])) {
            stable = false;
            if (violation != nullptr) {
                *violation += lambda[k] - out.bounds[k];
            }
        }
    };
    check(0);

    for (std::size_t k = 1; k < n; ++k) {
        const std::size_t j = k - 1;
        double load = 0.0;
        if (lambda[j] != 0.0) {
            if (!(out.bounds[j] > 0.0)) {
                out.collapsed = true;
                out.stable = false;
                if (violation != nullptr) {
                    *violation += lambda[j] + 1.0;
                }
                return out;
            }
            load = lambda[j] / out.bounds[j];
        }
        lambda_sum += lambda[j];
        ratio_sum += load * p[j];
        served_sum += lambda[j] / alpha[j];
        idle_sum += (1.0 - load) * p[j] / (1.0 - p[j]);
        min_alpha_before = std::min(min_alpha_before, alpha[j]);
        const double min_a =
            min_alpha == MinAlphaRange::before_k ? min_alpha_before : std::min(min_alpha_before, alpha[k]);
        const double correction = ratio_sum * tail[k] - served_sum;

        const double scale = alpha[k] * p[k] / (1.0 - p[k]);
        const double c_k = scale * (tail[k] - lambda_sum / min_a - 0.5 * correction);
        const double d_k = scale * tail[0] * (1.0 + idle_sum);
        out.bounds[k] = std::max(c_k, d_k);
        check(k);
    }
    out.stable = stable;
    return out;
}

NecessaryResult necessary_impl(std::span<const double> alpha, std::span<const double> lambda,
                               std::span<const double> p, std::size_t check_count, double *violation) {
    const std::size_t n = p.size();
    NecessaryResult out;
    out.bounds.assign(n, 0.0);
    std::vector<double> tail;
    tail_products(p, tail);
    double lambda_sum = 0.0;
    double max_alpha_before = 0.0;
    bool ok = true;
    for (std::size_t k = 0; k < n; ++k) {
        const double subtract = k == 0 ? 0.0 : lambda_sum / max_alpha_before;
        out.bounds[k] = alpha[k] * p[k] / (1.0 - p[k]) * (tail[k] - subtract);
        if (k < check_count && lambda[k] > out.bounds[k]) {
            ok = false;
            if (violation != nullptr) {
                *violation += lambda[k] - out.bounds[k];
            }
        }
        lambda_sum += lambda[k];
        max_alpha_before = std::max(max_alpha_before, alpha[k]);
    }
    out.possibly_stable = ok;
    return out;
}

void require_open_policy(std::span<const double> p) {
    for (double v : p) {
        if (!(v > 0.0 && v < 1.0)) {
            throw std::invalid_argument("stability-rank tests need every p in (0,1)");
        }
    }
}

void require_sizes(std::span<const double> alpha, std::span<const double> lambda, std::span<const double> p) {
    if (alpha.size() != p.size() || lambda.size() != p.size() || p.empty()) {
        throw std::invalid_argument("stability-rank test: size mismatch");
    }
}

std::vector<double> channel_alphas(const CollisionChannel &c) {
    std::vector<double> a(c.n_sources);
    for (std::size_t n = 0; n < c.n_sources; ++n) {
        a[n] = alpha(c.m_destinations, c.q_solo[n]);
    }
    return a;
}

} // namespace

SufficientResult sufficient_bound(std::span<const double> alpha, std::span<const double> lambda,
                                  std::span<const double> p, MinAlphaRange min_alpha) {
    require_sizes(alpha, lambda, p);
    require_open_policy(p);
    return sufficient_impl(alpha, lambda, p, min_alpha, p.size(), nullptr);
}

SufficientResult sufficient_bound(const CollisionChannel &c, const ArrivalRates &lambda, const TransmitPolicy &p,
                                  MinAlphaRange min_alpha) {
    const auto a = channel_alphas(c);
    return sufficient_bound(a, lambda.lambda, p.p, min_alpha);
}

NecessaryResult necessary_bound(std::span<const double> alpha, std::span<const double> lambda,
                                std::span<const double> p) {
    require_sizes(alpha, lambda, p);
    require_open_policy(p);
    return necessary_impl(alpha, lambda, p, p.size(), nullptr);
}

NecessaryResult necessary_bound(const CollisionChannel &c, const ArrivalRates &lambda, const TransmitPolicy &p) {
    const auto a = channel_alphas(c);
    return necessary_bound(a, lambda.lambda, p.p);
}

namespace {

double backlogged_rate(std::span<const double> alpha, std::span<const double> p, std::size_t n) {
    double mu = alpha[n] * p[n];
    for (std::size_t l = 0; l < p.size(); ++l) {
        if (l != n) {
            mu *= 1.0 - p[l];
        }
    }
    return mu;
}

struct Permuted {
    std::vector<double> alpha, lambda, p;
};

Permuted permute(std::span<const std::size_t> order, std::span<const double> alpha, std::span<const double> lambda,
                 std::span<const double> p) {
    Permuted out;
    for (std::size_t i : order) {
        out.alpha.push_back(alpha[i]);
        out.lambda.push_back(lambda[i]);
        out.p.push_back(p[i]);
    }
    return out;
}

} // namespace

bool rank_test(RegionKind kind, std::span<const double> alpha, std::span<const double> lambda,
               std::span<const double> p, const SolverSettings &settings) {
    require_sizes(alpha, lambda, p);
    if (kind == RegionKind::throughput) {
        for (std::size_t n = 0; n < p.size(); ++n) {
            if (lambda[n] != 0.0 && !(lambda[n] < backlogged_rate(alpha, p, n))) {
                return false;
            }
        }
        return true;
    }
    if (kind != RegionKind::stability_lower && kind != RegionKind::stability_upper) {
        throw std::invalid_argument("rank_test supports stability-lower, stability-upper and throughput");
    }
    require_open_policy(p);
    Permuted view;
    if (settings.ordering == RankOrdering::sorted) {
        const RankedSources ranked =
            rank_sources(ArrivalRates{{lambda.begin(), lambda.end()}}, TransmitPolicy{{p.begin(), p.end()}}, alpha);
        view = permute(ranked.order, alpha, lambda, p);
    } else {
        view = Permuted{{alpha.begin(), alpha.end()}, {lambda.begin(), lambda.end()}, {p.begin(), p.end()}};
    }
    if (kind == RegionKind::stability_lower) {
        return sufficient_impl(view.alpha, view.lambda, view.p, settings.min_alpha, view.p.size(), nullptr).stable;
    }
    return necessary_impl(view.alpha, view.lambda, view.p, view.p.size(), nullptr).possibly_stable;
}

namespace {

// Supremum of lambda_N admitted at policy p, or minus a violation measure
// when the fixed rates are not admissible there.
class LastRateObjective {
public:
    LastRateObjective(std::vector<double> alpha, std::span<const double> fixed, RegionKind kind,
                      const SolverSettings &settings)
        : alpha_(std::move(alpha)), lambda_(fixed.begin(), fixed.end()), kind_(kind), settings_(settings) {
        lambda_.push_back(0.0);
    }

    double operator()(std::span<const double> p) const {
        const std::size_t n = p.size();
        const std::size_t last = n - 1;
        for (std::size_t i = 0; i < last; ++i) {
            if (lambda_[i] > 0.0 && p[i] <= 0.0) {
                return -lambda_[i] - 1.0;
            }
        }
        if (kind_ == RegionKind::throughput) {
            double violation = 0.0;
            for (std::size_t i = 0; i < last; ++i) {
                const double mu = backlogged_rate(alpha_, p, i);
                if (lambda_[i] > mu) {
                    violation += lambda_[i] - mu;
                }
            }
            return violation > 0.0 ? -violation : backlogged_rate(alpha_, p, last);
        }
        if (settings_.ordering == RankOrdering::index) {
            double violation = 0.0;
            if (kind_ == RegionKind::stability_lower) {
                auto r = sufficient_impl(alpha_, lambda_, p, settings_.min_alpha, last, &violation);
                if (violation > 0.0) {
                    return -violation;
                }
                return r.bounds[last];
            }
            auto r = necessary_impl(alpha_, lambda_, p, last, &violation);
            if (violation > 0.0) {
                return -violation;
            }
            return r.bounds[last];
        }
        return bisect(p);
    }

private:
    double bisect(std::span<const double> p) const {
        std::vector<double> lam = lambda_;
        const std::size_t last = lam.size() - 1;
        auto passes = [&](double t) {
            lam[last] = t;
            return rank_test(kind_, alpha_, lam, p, settings_);
        };
        if (!passes(0.0)) {
            // Steer the search with the backlogged-rate shortfall of the fixed sources.
            double violation = 0.0;
            for (std::size_t i = 0; i < last; ++i) {
                violation += std::max(0.0, lambda_[i] - backlogged_rate(alpha_, p, i));
            }
            return -violation - settings_.bisection_tolerance;
        }
        double lo = 0.0;
        double hi = alpha_[last] * p[last];
        if (passes(hi)) {
            return hi;
        }
        while (hi - lo > settings_.bisection_tolerance) {
            const double mid = 0.5 * (lo + hi);
            (passes(mid) ? lo : hi) = mid;
        }
        return lo;
    }

    std::vector<double> alpha_;
    std::vector<double> lambda_;
    RegionKind kind_;
    const SolverSettings &settings_;
};

// Largest P = prod_l (1 - p_l) at which every fixed source meets its
// backlogged-rate constraint with equality, given the last source's
// probability. With c_i = lambda_i / alpha_i the fixed sources then use
// p_i = c_i / (P + c_i). In u = log P the defining equation is convex, so
// Newton from the right converges monotonically to the largest root.
// Returns 0 when no such P exists.
double tight_product(std::span<const double> alpha, std::span<const double> fixed, double p_last) {
    const double log_top = std::log1p(-p_last);
    double u = log_top;
    for (int it = 0; it < 200; ++it) {
        const double P = std::exp(u);
        double g = u - log_top;
        double dg = 1.0;
        for (std::size_t i = 0; i < fixed.size(); ++i) {
            const double c = fixed[i] / alpha[i];
            g += std::log1p(c / P);
            dg -= c / (P + c);
        }
        if (g <= 1e-15) {
            return P;
        }
        if (dg <= 0.0) {
            return 0.0;
        }
        const double next = u - g / dg;
        if (!(next < u) || next < -700.0) {
            return 0.0;
        }
        u = next;
    }
    return 0.0;
}

std::vector<double> tight_policy(std::span<const double> alpha, std::span<const double> fixed, double p_last,
                                 double P) {
    std::vector<double> p;
    for (std::size_t i = 0; i < fixed.size(); ++i) {
        const double c = fixed[i] / alpha[i];
        p.push_back(c / (P + c));
    }
    p.push_back(p_last);
    return p;
}

// Grid over [lo, hi] followed by a shrinking local grid around the best
// `keep` nodes.
optimize::Candidate maximize_1d(const std::function<double(double)> &value, double lo, double hi,
                                std::size_t grid, std::size_t keep, std::size_t *evaluations,
                                double resolution = 1e-13) {
    const optimize::Objective f = [&](std::span<const double> x) { return value(x[0]); };
    optimize::Box box{{lo}, {hi}};
    auto seeds = optimize::grid_search(f, box, grid, keep, evaluations);
    optimize::Candidate best = seeds.front();
    const double cell = (hi - lo) / static_cast<double>(std::max<std::size_t>(grid - 1, 1));
    for (const auto &seed : seeds) {
        auto zoomed = optimize::zoom_search(f, box, seed.x, 2.0 * cell, 9, 0.35, resolution);
        *evaluations += zoomed.evaluations;
        if (zoomed.best.value > best.value) {
            best = zoomed.best;
        }
    }
    return best;
}

optimize::Candidate maximize_last(const std::function<double(double)> &value, const SolverSettings &settings,
                                  std::size_t *evaluations) {
    return maximize_1d(value, settings.p_min, settings.p_max, 257, settings.candidates, evaluations);
}

// Throughput: the optimum makes every fixed constraint tight, which leaves
// a single free coordinate.
optimize::Candidate solve_throughput(std::span<const double> alpha, std::span<const double> fixed,
                                     const SolverSettings &settings, std::size_t *evaluations) {
    const std::size_t last = fixed.size();
    auto value = [&](double p_last) {
        const double P = tight_product(alpha, fixed, p_last);
        return P > 0.0 ? alpha[last] * p_last / (1.0 - p_last) * P : -1.0 - p_last;
    };
    auto best = maximize_last(value, settings, evaluations);
    const double P = tight_product(alpha, fixed, best.x[0]);
    if (P > 0.0) {
        best.x = tight_policy(alpha, fixed, best.x[0], P);
    } else {
        best.x = std::vector<double>(last + 1, settings.p_min);
    }
    return best;
}

// Smallest p with h(p) = a p t - a p s / (1 - p) >= lambda, or NaN. h is
// concave with h(0) = 0, so the admissible set is an interval.
double cheapest_probability(double a, double t, double s, double lambda, const SolverSettings &settings) {
    if (lambda == 0.0) {
        return settings.p_min;
    }
    auto h = [&](double p) { return a * p * (t - s / (1.0 - p)); };
    double peak = s > 0.0 ? 1.0 - std::sqrt(s / t) : settings.p_max;
    peak = std::min(peak, settings.p_max);
    if (!(peak > settings.p_min) || h(peak) < lambda) {
        return std::numeric_limits<double>::quiet_NaN();
    }
    double lo = settings.p_min;
    double hi = peak;
    if (h(lo) >= lambda) {
        return lo;
    }
    for (int it = 0; it < 200 && hi - lo > 1e-16; ++it) {
        const double mid = 0.5 * (lo + hi);
        (h(mid) >= lambda ? hi : lo) = mid;
    }
    return hi;
}

// Necessary test in index order. Condition k only involves p_k..p_N, and a
// smaller p_k can only help conditions j < k, so sweeping backwards with the
// cheapest admissible probability decides feasibility exactly. The objective
// depends on p_N alone.
optimize::Candidate solve_upper_index(std::span<const double> alpha, std::span<const double> fixed,
                                      const SolverSettings &settings, std::size_t *evaluations) {
    const std::size_t last = fixed.size();
    std::vector<double> load(last + 1, 0.0); // sum lambda_i / max alpha_l over i < k
    double lambda_sum = 0.0;
    double max_alpha = 0.0;
    for (std::size_t k = 0; k <= last; ++k) {
        load[k] = k == 0 ? 0.0 : lambda_sum / max_alpha;
        if (k < last) {
            lambda_sum += fixed[k];
            max_alpha = std::max(max_alpha, alpha[k]);
        }
    }
    std::vector<double> p(last + 1);
    auto feasible = [&](double p_last) {
        ++*evaluations;
        p[last] = p_last;
        double t = 1.0 - p_last;
        for (std::size_t k = last; k-- > 0;) {
            p[k] = cheapest_probability(alpha[k], t, load[k], fixed[k], settings);
            if (std::isnan(p[k])) {
                return false;
            }
            t *= 1.0 - p[k];
        }
        return true;
    };
    optimize::Candidate out;
    if (!feasible(settings.p_min)) {
        out.x = std::vector<double>(last + 1, settings.p_min);
        out.value = -1.0;
        return out;
    }
    double edge = settings.p_max;
    if (!feasible(edge)) {
        double lo = settings.p_min;
        for (int it = 0; it < 200 && edge - lo > 1e-15; ++it) {
            const double mid = 0.5 * (lo + edge);
            (feasible(mid) ? lo : edge) = mid;
        }
        edge = lo;
    }
    const double s = load[last];
    const double peak = s < 1.0 ? 1.0 - std::sqrt(s) : settings.p_min;
    const double p_last = std::clamp(std::min(peak, edge), settings.p_min, settings.p_max);
    feasible(p_last);
    out.x = p;
    out.value = alpha[last] * p_last * (1.0 - s / (1.0 - p_last));
    return out;
}

optimize::NelderMeadSettings polish_settings(const SolverSettings &s) {
    optimize::NelderMeadSettings nm;
    nm.initial_step = 0.02;
    nm.diameter_tolerance = s.simplex_tolerance;
    nm.max_evaluations = 40000;
    nm.restarts = 6;
    return nm;
}

// General search for the rank tests: a coarse grid (reduced to two shared
// coordinates for many sources), seeds taken from the tight throughput
// policies, then Nelder-Mead polishing.
optimize::Candidate search_rank_region(std::span<const double> alphas, std::span<const double> fixed,
                                       RegionKind kind, const SolverSettings &settings, std::size_t *evaluations) {
    const std::size_t n = alphas.size();
    const LastRateObjective objective({alphas.begin(), alphas.end()}, fixed, kind, settings);
    const optimize::Objective f = [&](std::span<const double> p) { return objective(p); };
    optimize::Box box{std::vector<double>(n, settings.p_min), std::vector<double>(n, settings.p_max)};

    std::vector<optimize::Candidate> seeds;
    if (n <= 5) {
        const std::size_t grid = n == 2 ? settings.grid_two_sources : settings.grid_small;
        seeds = optimize::grid_search(f, box, grid, settings.candidates, evaluations);
    } else {
        optimize::Box reduced{{settings.p_min, settings.p_min}, {settings.p_max, settings.p_max}};
        const optimize::Objective lifted = [&](std::span<const double> x) {
            std::vector<double> p(n, x[0]);
            p[n - 1] = x[1];
            return objective(p);
        };
        for (const auto &cand :
             optimize::grid_search(lifted, reduced, settings.grid_large, settings.candidates, evaluations)) {
            std::vector<double> p(n, cand.x[0]);
            p[n - 1] = cand.x[1];
            seeds.push_back({p, cand.value});
        }
    }

    std::vector<optimize::Candidate> tight;
    const std::size_t sweep = 129;
    for (std::size_t i = 0; i < sweep; ++i) {
        const double p_last =
            settings.p_min + (settings.p_max - settings.p_min) * static_cast<double>(i) / static_cast<double>(sweep - 1);
        const double P = tight_product(alphas, fixed, p_last);
        if (P > 0.0) {
            auto p = tight_policy(alphas, fixed, p_last, P);
            box.clamp(p);
            const double v = objective(p);
            ++*evaluations;
            tight.push_back({std::move(p), v});
        }
    }
    std::sort(tight.begin(), tight.end(), [](const auto &a, const auto &b) { return a.value > b.value; });
    tight.resize(std::min(tight.size(), settings.tight_seeds));
    const std::size_t grid_seeds = seeds.size();
    seeds.insert(seeds.end(), tight.begin(), tight.end());

    optimize::Candidate best = seeds.front();
    for (std::size_t i = 0; i < seeds.size(); ++i) {
        const auto &seed = seeds[i];
        auto start = seed;
        if (n > 5 && i < grid_seeds) {
            auto refined = optimize::coordinate_descent(f, box, seed.x);
            *evaluations += refined.evaluations;
            start = refined.best;
        }
        auto polished = optimize::nelder_mead(f, box, start.x, polish_settings(settings));
        *evaluations += polished.evaluations;
        const auto &cand = polished.best.value >= start.value ? polished.best : start;
        if (cand.value > best.value) {
            best = cand;
        }
    }
    return best;
}

} // namespace

RegionPoint optimize_lambdaN(const CollisionChannel &c, std::span<const double> fixed, RegionKind kind,
                             const SolverSettings &settings) {
    validate_collision_channel(c);
    const std::size_t n = c.n_sources;
    if (fixed.size() + 1 != n) {
        throw ValidationError("fixed_lambda", "expected " + std::to_string(n - 1) + " entries");
    }
    if (kind == RegionKind::stability_exact) {
        throw std::invalid_argument("optimize_lambdaN supports stability-lower, stability-upper and throughput");
    }
    const std::vector<double> alphas = channel_alphas(c);
    std::size_t evaluations = 0;
    optimize::Candidate best;
    if (kind == RegionKind::throughput) {
        best = solve_throughput(alphas, fixed, settings, &evaluations);
    } else if (kind == RegionKind::stability_upper && settings.ordering == RankOrdering::index) {
        best = solve_upper_index(alphas, fixed, settings, &evaluations);
    } else {
        best = search_rank_region(alphas, fixed, kind, settings, &evaluations);
    }

    RegionPoint point;
    point.kind = kind;
    point.lambda.lambda.assign(fixed.begin(), fixed.end());
    point.feasible = best.value >= 0.0;
    point.lambda.lambda.push_back(point.feasible ? best.value : 0.0);
    point.p_opt.p = best.x;
    point.evaluations = evaluations;
    return point;
}

double max_lambda2_at(const ChannelModel &c, RegionKind kind, double lambda1, const TransmitPolicy &p) {
    ServiceRates mu;
    try {
        mu = service_rates(c, p);
    } catch (const DegenerateChainError &) {
        return -1.0;
    }
    const double m1b = mu.mu_b[0], m1e = mu.mu_e[0];
    const double m2b = mu.mu_b[1], m2e = mu.mu_e[1];
    if (kind == RegionKind::throughput) {
        if (lambda1 != 0.0 && lambda1 > m1b) {
            return -(lambda1 - m1b);
        }
        return m2b;
    }
    if (kind != RegionKind::stability_exact) {
        throw std::invalid_argument("two-source boundaries support stability-exact and throughput");
    }
    if (!hypothesis_holds(mu)) {
        return -std::numeric_limits<double>::infinity();
    }
    if (lambda1 == 0.0) {
        return m2e;
    }
    if (lambda1 <= m1b) {
        return m2e - (lambda1 / m1b) * (m2e - m2b);
    }
    if (lambda1 < m1e) {
        return m2b * (m1e - lambda1) / (m1e - m1b);
    }
    return -(lambda1 - m1e);
}

namespace {

// Nested one-dimensional searches: the outer over p_2, the inner over p_1.
// Both admissible-set edges move with p_2, so a joint 2-D simplex tends to
// stall on the ridge; the nested form resolves each edge separately.
RegionPoint boundary_point(const ChannelModel &c, RegionKind kind, double lambda1, const SolverSettings &settings) {
    std::size_t excluded = 0;
    std::size_t evaluations = 0;
    const std::size_t grid = std::max<std::size_t>(settings.grid_two_sources, 3);
    auto value = [&](double p1, double p2) {
        const double v = max_lambda2_at(c, kind, lambda1, TransmitPolicy{{p1, p2}});
        if (v == -std::numeric_limits<double>::infinity()) {
            ++excluded;
            return -2.0;
        }
        return v;
    };
    auto inner = [&](double p2) {
        return maximize_1d([&](double p1) { return value(p1, p2); }, 0.0, settings.p_max, grid, 2, &evaluations,
                           1e-11);
    };
    auto outer = maximize_1d([&](double p2) { return inner(p2).value; }, 0.0, settings.p_max, grid,
                             settings.candidates, &evaluations, 1e-11);
    const double p2 = outer.x[0];
    const auto at = inner(p2);

    RegionPoint point;
    point.kind = kind;
    point.feasible = at.value >= 0.0;
    point.lambda.lambda = {lambda1, point.feasible ? at.value : 0.0};
    point.p_opt.p = {at.x[0], p2};
    point.evaluations = evaluations;
    point.excluded = excluded;
    return point;
}

std::string describe(const ChannelModel &c) {
    if (std::holds_alternative<ChannelModel2x2>(c)) {
        return "mpr2x2";
    }
    const auto &cc = std::get<CollisionChannel>(c);
    return "collision N=" + std::to_string(cc.n_sources) + " M=" + std::to_string(cc.m_destinations);
}

} // namespace

RegionBoundary boundary_2src(const ChannelModel &c, RegionKind kind, std::span<const double> lambda1_grid,
                             const SolverSettings &settings) {
    const ChannelModel model = validate_channel(c);
    if (source_count(model) != 2) {
        throw ValidationError("n_sources", "two-source boundary needs exactly two sources");
    }
    if (kind != RegionKind::stability_exact && kind != RegionKind::throughput) {
        throw std::invalid_argument("two-source boundaries support stability-exact and throughput");
    }
    RegionBoundary out;
    out.channel = describe(model);
    out.solver = settings;
    out.points.resize(lambda1_grid.size());

    // Points are independent; each worker owns a strided slice and results
    // are keyed by grid index, so the merge is order-free.
    const unsigned jobs = std::max(1u, std::min<unsigned>(settings.jobs, static_cast<unsigned>(lambda1_grid.size())));
    auto work = [&](unsigned worker) {
        for (std::size_t i = worker; i < lambda1_grid.size(); i += jobs) {
            out.points[i] = boundary_point(model, kind, lambda1_grid[i], settings);
        }
    };
    if (jobs == 1) {
        work(0);
    } else {
        std::vector<std::jthread> pool;
        for (unsigned w = 0; w < jobs; ++w) {
            pool.emplace_back(work, w);
        }
    }
    std::stable_sort(out.points.begin(), out.points.end(),
                     [](const RegionPoint &a, const RegionPoint &b) { return a.lambda[0] < b.lambda[0]; });
    return out;
}

} // namespace rastab
