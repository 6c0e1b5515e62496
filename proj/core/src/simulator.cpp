#include "rastab/simulator.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "rastab/errors.hpp"

namespace rastab {

std::uint64_t default_warmup(std::uint64_t horizon) { return horizon / 10; }

void validate_sim_config(const SimConfig &config) {
    const ChannelModel channel = validate_channel(config.channel);
    const std::size_t n = source_count(channel);
    validate_arrivals(config.lambda, n);
    validate_policy(config.p, n);
    if (config.dominant_k > n) {
        throw ValidationError("dominant_k", "must lie in 0..N");
    }
    if (!(config.horizon > config.warmup)) {
        throw ValidationError("horizon", "must exceed warmup");
    }
    if (config.batches == 0 || config.batches > config.horizon - config.warmup) {
        throw ValidationError("batches", "must lie in 1..(horizon - warmup)");
    }
    if (n >= (1u << 24)) {
        throw ValidationError("n_sources", "too many sources for the random stream layout");
    }
}

const char *to_string(Verdict v) {
    switch (v) {
    case Verdict::stable_evidence:
        return "stable-evidence";
    case Verdict::unstable_evidence:
        return "unstable-evidence";
    case Verdict::inconclusive:
        return "inconclusive";
    }
    return "?";
}

namespace {

// Running least-squares fit of q against t (Welford-style co-moments).
class SlopeAccumulator {
public:
    void add(double t, double q) {
        ++count_;
        const double dt = t - mean_t_;
        mean_t_ += dt / static_cast<double>(count_);
        mean_q_ += (q - mean_q_) / static_cast<double>(count_);
        m2_t_ += dt * (t - mean_t_);
        c_tq_ += dt * (q - mean_q_);
    }

    double slope() const { return m2_t_ > 0.0 ? c_tq_ / m2_t_ : 0.0; }
    double mean() const { return mean_q_; }

private:
    std::uint64_t count_ = 0;
    double mean_t_ = 0.0;
    double mean_q_ = 0.0;
    double m2_t_ = 0.0;
    double c_tq_ = 0.0;
};

} // namespace

double drift_slope(std::span<const std::uint64_t> queue_lengths) {
    SlopeAccumulator acc;
    for (std::size_t i = 0; i < queue_lengths.size(); ++i) {
        acc.add(static_cast<double>(i), static_cast<double>(queue_lengths[i]));
    }
    return acc.slope();
}

Verdict stability_verdict(const QueueSummary &summary, const VerdictThresholds &thresholds) {
    if (summary.measured_slots < thresholds.min_slots) {
        throw std::invalid_argument("trace too short for a stability verdict: " +
                                    std::to_string(summary.measured_slots) + " < " +
                                    std::to_string(thresholds.min_slots) + " slots");
    }
    const double queue_cap = thresholds.queue_scale * std::sqrt(static_cast<double>(summary.horizon));
    if (summary.drift_slope < thresholds.stable_slope && static_cast<double>(summary.max_queue) < queue_cap) {
        return Verdict::stable_evidence;
    }
    if (summary.drift_slope > thresholds.unstable_slope) {
        return Verdict::unstable_evidence;
    }
    return Verdict::inconclusive;
}

SlotSimulator::SlotSimulator(const SimConfig &config) : config_(config), rng_(config.seed) {
    validate_sim_config(config_);
    const std::size_t n = source_count(config_.channel);
    destinations_ = std::holds_alternative<ChannelModel2x2>(config_.channel)
                        ? 2
                        : std::get<CollisionChannel>(config_.channel).m_destinations;
    queue_.assign(n, 0);
    arrivals_.assign(n, 0);
    departures_.assign(n, 0);
    serving_dummy_.assign(n, 0);
    holds_.assign(n, std::vector<std::uint8_t>(destinations_, 0));
    held_count_.assign(n, 0);
    transmitting_.assign(n, 0);
    completed_.assign(n, 0);
    completed_dummy_.assign(n, 0);
}

bool SlotSimulator::dummy_mode(std::size_t n) const {
    return config_.dominant_k != 0 && n + 1 >= config_.dominant_k;
}

bool SlotSimulator::has_packet(std::size_t n) const { return queue_[n] > 0 || dummy_mode(n); }

std::size_t SlotSimulator::receiver_state(std::size_t n) const {
    if (std::holds_alternative<ChannelModel2x2>(config_.channel)) {
        if (holds_[n][0] == 0 && holds_[n][1] == 0) {
            return 0;
        }
        return holds_[n][1] != 0 ? 1 : 2;
    }
    return held_count_[n];
}

void SlotSimulator::reception(std::size_t n, bool other_transmitted, std::size_t transmitters) {
    const auto source = static_cast<std::uint32_t>(n);
    if (const auto *mpr = std::get_if<ChannelModel2x2>(&config_.channel)) {
        const auto &q = other_transmitted ? mpr->q_joint[n] : mpr->q_solo[n];
        for (std::size_t m = 0; m < destinations_; ++m) {
            if (holds_[n][m] == 0 &&
                rng_.bernoulli(q[m], Stream::channel, source, slot_, static_cast<std::uint32_t>(m))) {
                holds_[n][m] = 1;
                ++held_count_[n];
            }
        }
        return;
    }
    if (transmitters != 1) {
        return; // collision: nobody hears anything
    }
    const double q = std::get<CollisionChannel>(config_.channel).q_solo[n];
    for (std::size_t m = 0; m < destinations_; ++m) {
        if (holds_[n][m] == 0 && rng_.bernoulli(q, Stream::channel, source, slot_, static_cast<std::uint32_t>(m))) {
            holds_[n][m] = 1;
            ++held_count_[n];
        }
    }
}

void SlotSimulator::step() {
    const std::size_t n_sources = queue_.size();
    auto reset_packet = [&](std::size_t n) {
        std::fill(holds_[n].begin(), holds_[n].end(), std::uint8_t{0});
        held_count_[n] = 0;
    };

    // Head-of-line bookkeeping: a real packet preempts a dummy and starts
    // fresh; an idle source without dummy mode holds nothing.
    std::size_t transmitters = 0;
    for (std::size_t n = 0; n < n_sources; ++n) {
        if (queue_[n] > 0) {
            if (serving_dummy_[n] != 0) {
                serving_dummy_[n] = 0;
                reset_packet(n);
            }
        } else if (dummy_mode(n)) {
            if (serving_dummy_[n] == 0) {
                serving_dummy_[n] = 1;
                reset_packet(n);
            }
        }
        transmitting_[n] =
            has_packet(n) && rng_.bernoulli(config_.p[n], Stream::transmit, static_cast<std::uint32_t>(n), slot_);
        transmitters += transmitting_[n];
        completed_[n] = 0;
        completed_dummy_[n] = 0;
    }

    for (std::size_t n = 0; n < n_sources; ++n) {
        if (transmitting_[n] == 0) {
            continue;
        }
        reception(n, transmitters > 1, transmitters);
        if (held_count_[n] == destinations_) {
            completed_[n] = 1;
            reset_packet(n);
            if (serving_dummy_[n] != 0) {
                completed_dummy_[n] = 1;
            } else {
                --queue_[n];
                ++departures_[n];
            }
        }
    }

    for (std::size_t n = 0; n < n_sources; ++n) {
        if (rng_.bernoulli(config_.lambda[n], Stream::arrival, static_cast<std::uint32_t>(n), slot_)) {
            ++queue_[n];
            ++arrivals_[n];
        }
    }
    ++slot_;
}

SimResult run(const SimConfig &config, const VerdictThresholds &thresholds) {
    SlotSimulator sim(config);
    const std::size_t n = sim.sources();
    const std::uint64_t measured = config.horizon - config.warmup;
    const std::size_t batches = config.batches;
    const std::size_t states = std::holds_alternative<ChannelModel2x2>(config.channel)
                                   ? 3
                                   : std::get<CollisionChannel>(config.channel).m_destinations;

    SimResult r;
    r.measured_slots = measured;
    r.busy_slots.assign(n, 0);
    r.departures.assign(n, 0);
    r.dummy_completions.assign(n, 0);
    r.arrivals.assign(n, 0);
    r.max_queue.assign(n, 0);
    r.receiver_state_slots.assign(n, std::vector<std::uint64_t>(states, 0));
    std::vector<SlopeAccumulator> slope(n);
    std::vector<std::vector<std::uint64_t>> batch_done(n, std::vector<std::uint64_t>(batches, 0));
    std::vector<std::vector<std::uint64_t>> batch_busy(n, std::vector<std::uint64_t>(batches, 0));
    if (config.trace_stride > 0) {
        r.trace.queue.assign(n, {});
    }

    while (sim.slot() < config.warmup) {
        sim.step();
    }
    std::vector<std::uint64_t> arrived(n);
    for (std::uint64_t t = 0; t < measured; ++t) {
        const std::size_t batch = static_cast<std::size_t>(t * batches / measured);
        for (std::size_t s = 0; s < n; ++s) {
            if (sim.has_packet(s)) {
                ++r.busy_slots[s];
                ++batch_busy[s][batch];
                ++r.receiver_state_slots[s][sim.receiver_state(s)];
            }
        }
        for (std::size_t s = 0; s < n; ++s) {
            arrived[s] = sim.arrivals(s);
        }
        sim.step();
        for (std::size_t s = 0; s < n; ++s) {
            if (sim.completed_last(s)) {
                ++batch_done[s][batch];
                if (sim.last_was_dummy(s)) {
                    ++r.dummy_completions[s];
                } else {
                    ++r.departures[s];
                }
            }
            r.arrivals[s] += sim.arrivals(s) - arrived[s];
            const std::uint64_t q = sim.queue(s);
            r.max_queue[s] = std::max(r.max_queue[s], q);
            slope[s].add(static_cast<double>(t), static_cast<double>(q));
        }
        if (config.trace_stride > 0 && t % config.trace_stride == 0) {
            r.trace.slot.push_back(sim.slot());
            for (std::size_t s = 0; s < n; ++s) {
                r.trace.queue[s].push_back(sim.queue(s));
            }
        }
    }

    for (std::size_t s = 0; s < n; ++s) {
        const std::uint64_t done = r.departures[s] + r.dummy_completions[s];
        r.empirical_mu.push_back(r.busy_slots[s] > 0 ? static_cast<double>(done) / static_cast<double>(r.busy_slots[s])
                                                     : 0.0);
        std::vector<double> rates;
        for (std::size_t b = 0; b < batches; ++b) {
            if (batch_busy[s][b] > 0) {
                rates.push_back(static_cast<double>(batch_done[s][b]) / static_cast<double>(batch_busy[s][b]));
            }
        }
        double se = 0.0;
        if (rates.size() > 1) {
            double mean = 0.0;
            for (double v : rates) {
                mean += v;
            }
            mean /= static_cast<double>(rates.size());
            double ss = 0.0;
            for (double v : rates) {
                ss += (v - mean) * (v - mean);
            }
            const double k = static_cast<double>(rates.size());
            se = std::sqrt(ss / (k - 1.0) / k);
        }
        r.mu_std_error.push_back(se);
        r.mean_queue.push_back(slope[s].mean());
        r.final_queue.push_back(sim.queue(s));
        r.drift_slope.push_back(slope[s].slope());
        const QueueSummary summary{measured, config.horizon, r.drift_slope[s], r.max_queue[s]};
        r.verdict.push_back(measured >= thresholds.min_slots ? stability_verdict(summary, thresholds)
                                                             : Verdict::inconclusive);
    }
    return r;
}

RateEstimate estimate_service_rate(SimConfig config) {
    config.dominant_k = 1;
    const SimResult r = run(config);
    return {r.empirical_mu, r.mu_std_error};
}

} // namespace rastab
