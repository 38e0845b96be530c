#pragma once

#include <optional>

#include "dstcsim/common.hpp"

namespace dstcsim {

// Queue observations of one tracked relay buffer, accumulated per epoch.
// Units: entries (one decoded packet-pair) and epochs (two slots), which
// coincide numerically with packets and slots at rate one packet per slot.
struct BufferTrace {
    long epochs_observed = 0;
    long samples_empty = 0;
    long samples_full = 0;
    long long occupancy_sum = 0;
    long arrivals = 0;
    long departures = 0;
    long long delay_sum = 0;  // epochs, summed over delivered entries

    void record_state(int occupancy, int capacity) {
        ++epochs_observed;
        occupancy_sum += occupancy;
        if (occupancy == 0)
            ++samples_empty;
        if (occupancy >= capacity)
            ++samples_full;
    }

    void record_arrival() { ++arrivals; }

    void record_departure(long delay_epochs) {
        ++departures;
        delay_sum += delay_epochs;
    }

    void merge(const BufferTrace& other) {
        epochs_observed += other.epochs_observed;
        samples_empty += other.samples_empty;
        samples_full += other.samples_full;
        occupancy_sum += other.occupancy_sum;
        arrivals += other.arrivals;
        departures += other.departures;
        delay_sum += other.delay_sum;
    }
};

struct DelayStats {
    double p_empty = 0.0;         // fraction of epochs the buffer was empty
    double p_full = 0.0;          // fraction of epochs the buffer was full
    double avg_queue = 0.0;       // mean occupancy (entries)
    double arrival_rate = 0.0;    // entries per epoch = packets per slot
    double departure_rate = 0.0;  // entries per epoch
    double mean_delay = 0.0;      // epochs stored, mean over delivered entries
    long delivered = 0;
    std::optional<double> analytic;  // closed-form delay on these probabilities
};

// T = J * P_full / ((1 - P_full) * P + P_empty * P). Returns nothing when the
// denominator vanishes.
inline std::optional<double> analytic_delay(double p_full, double p_empty, double p, int j) {
    if (p_full < 0.0 || p_full > 1.0 || p_empty < 0.0 || p_empty > 1.0)
        throw ModelError("analytic_delay: probabilities must lie in [0, 1]");
    const double denom = (1.0 - p_full) * p + p_empty * p;
    if (denom <= 0.0)
        return std::nullopt;
    return static_cast<double>(j) * p_full / denom;
}

// Empirical delay statistics from a trace; nothing when no entry was delivered.
// The analytic field is filled for a given capacity with the per-slot transfer
// probability implied by the measured arrival rate.
inline std::optional<DelayStats> measure_delay(const BufferTrace& trace, int capacity = 0) {
    if (trace.departures == 0 || trace.epochs_observed == 0)
        return std::nullopt;
    DelayStats stats;
    const double epochs = static_cast<double>(trace.epochs_observed);
    stats.p_empty = static_cast<double>(trace.samples_empty) / epochs;
    stats.p_full = static_cast<double>(trace.samples_full) / epochs;
    stats.avg_queue = static_cast<double>(trace.occupancy_sum) / epochs;
    stats.arrival_rate = static_cast<double>(trace.arrivals) / epochs;
    stats.departure_rate = static_cast<double>(trace.departures) / epochs;
    stats.mean_delay = static_cast<double>(trace.delay_sum) / static_cast<double>(trace.departures);
    stats.delivered = trace.departures;
    if (capacity > 0) {
        const double weight = (1.0 - stats.p_full) + stats.p_empty;
        if (weight > 0.0)
            stats.analytic =
                analytic_delay(stats.p_full, stats.p_empty, stats.arrival_rate / weight, capacity);
    }
    return stats;
}

}  // namespace dstcsim
