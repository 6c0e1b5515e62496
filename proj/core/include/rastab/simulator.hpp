#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "rastab/channel.hpp"
#include "rastab/rng.hpp"

namespace rastab {

struct SimConfig {
    ChannelModel channel;
    ArrivalRates lambda;
    TransmitPolicy p;
    // 0 simulates the original system; k >= 1 lets sources k..N (one-based)
    // send dummy packets whenever their queue is empty.
    std::size_t dominant_k = 0;
    std::uint64_t horizon = 1'000'000;
    std::uint64_t warmup = 100'000;
    std::uint64_t seed = 1;
    std::uint64_t trace_stride = 0; // 0 disables the queue trace
    std::size_t batches = 32;
};

/// Default warmup for a horizon: 10% of it.
std::uint64_t default_warmup(std::uint64_t horizon);

void validate_sim_config(const SimConfig &config);

enum class Verdict { stable_evidence, unstable_evidence, inconclusive };

const char *to_string(Verdict v);

struct VerdictThresholds {
    double stable_slope = 1e-3;   // packets/slot
    double unstable_slope = 1e-2; // packets/slot
    double queue_scale = 10.0;    // stable needs max queue < queue_scale * sqrt(horizon)
    std::uint64_t min_slots = 100'000;
};

/// Post-warmup summary of one queue, enough to classify it.
struct QueueSummary {
    std::uint64_t measured_slots = 0;
    std::uint64_t horizon = 0;
    double drift_slope = 0.0;
    std::uint64_t max_queue = 0;
};

/// Least-squares slope of a queue-length series against its slot index.
double drift_slope(std::span<const std::uint64_t> queue_lengths);

/// Throws std::invalid_argument when fewer than `min_slots` slots were measured.
Verdict stability_verdict(const QueueSummary &summary, const VerdictThresholds &thresholds = {});

struct QueueTrace {
    std::vector<std::uint64_t> slot;
    std::vector<std::vector<std::uint64_t>> queue; // queue[n][i] at slot[i]
};

struct SimResult {
    std::uint64_t measured_slots = 0;
    std::vector<double> empirical_mu;   // completions (real + dummy) per slot with a head-of-line packet
    std::vector<double> mu_std_error;   // batch means
    std::vector<std::uint64_t> busy_slots;
    std::vector<std::uint64_t> departures;        // real packets, measured window
    std::vector<std::uint64_t> dummy_completions; // measured window
    std::vector<std::uint64_t> arrivals;          // measured window
    std::vector<double> mean_queue;
    std::vector<std::uint64_t> max_queue;
    std::vector<std::uint64_t> final_queue;
    std::vector<double> drift_slope;
    std::vector<Verdict> verdict;
    // receiver_state_slots[n][s]: measured slots that began with source n's
    // head-of-line packet in receiver state s.
    std::vector<std::vector<std::uint64_t>> receiver_state_slots;
    QueueTrace trace;
};

/// Slot-by-slot engine. Exposed so coupled systems can be advanced in lockstep.
class SlotSimulator {
public:
    explicit SlotSimulator(const SimConfig &config);

    /// Advances one slot: transmissions, channel outcome, departures, arrivals.
    void step();

    std::uint64_t slot() const noexcept { return slot_; }
    std::size_t sources() const noexcept { return queue_.size(); }
    std::uint64_t queue(std::size_t n) const { return queue_[n]; }
    std::span<const std::uint64_t> queues() const noexcept { return queue_; }

    // Cumulative since slot 0.
    std::uint64_t arrivals(std::size_t n) const { return arrivals_[n]; }
    std::uint64_t departures(std::size_t n) const { return departures_[n]; }

    /// Receiver state of the current head-of-line packet; for the 2x2 model
    /// 0 = nobody, 1 = destination 2 only, 2 = destination 1 only; for the
    /// collision model the number of destinations holding it.
    std::size_t receiver_state(std::size_t n) const;
    bool has_packet(std::size_t n) const;

    // Outcome of the last step.
    bool completed_last(std::size_t n) const { return completed_[n] != 0; }
    bool last_was_dummy(std::size_t n) const { return completed_dummy_[n] != 0; }

private:
    bool dummy_mode(std::size_t n) const;
    void reception(std::size_t n, bool other_transmitted, std::size_t transmitters);

    SimConfig config_;
    SimRng rng_;
    std::size_t destinations_;
    std::uint64_t slot_ = 0;
    std::vector<std::uint64_t> queue_;
    std::vector<std::uint64_t> arrivals_;
    std::vector<std::uint64_t> departures_;
    std::vector<std::uint8_t> serving_dummy_;
    std::vector<std::vector<std::uint8_t>> holds_; // holds_[n][m]: destination m has n's HOL packet
    std::vector<std::size_t> held_count_;
    std::vector<std::uint8_t> transmitting_;
    std::vector<std::uint8_t> completed_;
    std::vector<std::uint8_t> completed_dummy_;
};

/// Runs a seeded simulation. Identical config yields identical results.
SimResult run(const SimConfig &config, const VerdictThresholds &thresholds = {});

struct RateEstimate {
    std::vector<double> rate;
    std::vector<double> std_error;
};

/// Fully backlogged service rates: runs the dominant system with every
/// source contending and counts real and dummy completions per slot.
RateEstimate estimate_service_rate(SimConfig config);

} // namespace rastab
