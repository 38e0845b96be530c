#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <deque>
#include <limits>
#include <vector>

#include "dstcsim/common.hpp"
#include "dstcsim/signal_model.hpp"

namespace dstcsim {

struct BufferFull : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct BufferEmpty : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// One decoded packet-pair: for every user the two slot blocks of one epoch,
// decoded symbols alongside the transmitted truth for end-to-end accounting.
struct DecodedPacketPair {
    long source_epoch = 0;
    long enqueue_epoch = 0;
    int users = 0;
    int symbols = 0;
    std::vector<std::int8_t> decoded;  // [(k * 2 + slot) * symbols + j]
    std::vector<std::int8_t> truth;

    static std::size_t offset(int user, int slot, int symbols) {
        return (static_cast<std::size_t>(user) * 2 + slot) * symbols;
    }
    std::int8_t decoded_at(int user, int slot, int j) const {
        return decoded[offset(user, slot, symbols) + j];
    }
    std::int8_t truth_at(int user, int slot, int j) const {
        return truth[offset(user, slot, symbols) + j];
    }
};

// Bounded FIFO of decoded packet-pairs. Shrinking the capacity below the
// occupancy keeps the stored entries; pushes stay blocked until the queue
// drains under the new bound.
class RelayBuffer {
public:
    RelayBuffer() = default;
    RelayBuffer(int relay, int capacity) : relay_(relay), capacity_(capacity) {
        if (capacity < 1)
            throw ConfigError("RelayBuffer: capacity must be >= 1");
    }

    int relay() const { return relay_; }
    int capacity() const { return capacity_; }
    int occupancy() const { return static_cast<int>(entries_.size()); }
    bool full() const { return occupancy() >= capacity_; }
    bool empty() const { return entries_.empty(); }

    void push(DecodedPacketPair entry) {
        if (full())
            throw BufferFull("RelayBuffer: push on full buffer");
        entries_.push_back(std::move(entry));
    }

    DecodedPacketPair pop() {
        if (empty())
            throw BufferEmpty("RelayBuffer: pop on empty buffer");
        DecodedPacketPair entry = std::move(entries_.front());
        entries_.pop_front();
        return entry;
    }

    const DecodedPacketPair& front() const {
        if (empty())
            throw BufferEmpty("RelayBuffer: front on empty buffer");
        return entries_.front();
    }

    void set_capacity(int capacity) {
        if (capacity < 1)
            throw ConfigError("RelayBuffer: capacity must be >= 1");
        capacity_ = capacity;
    }

private:
    int relay_ = 0;
    int capacity_ = 1;
    std::deque<DecodedPacketPair> entries_;
};

enum class BufferMode { Fixed, SnrDriven, PowerDriven };

struct DynamicBufferPolicy {
    BufferMode mode = BufferMode::Fixed;
    int d1 = 2;  // SNR step (dB) that triggers one size step
    int d2 = 2;  // size step for the SNR rule
    int d3 = 2;  // size step for the channel-power rule
    double gamma = 0.5;  // channel power threshold, relative to unit mean link power
    int j_min = 1;
    int j_max = 12;

    void validate() const {
        if (j_min < 1 || j_max < j_min)
            throw ConfigError("DynamicBufferPolicy: need 1 <= j_min <= j_max");
        if (d1 < 0 || d2 < 0 || d3 < 0)
            throw ConfigError("DynamicBufferPolicy: steps must be >= 0");
    }

    int clamp(int j) const { return std::clamp(j, j_min, j_max); }
};

// Size inversely follows the input SNR: +d1 dB -> -d2 packets and vice versa.
// Arbitrary SNR jumps take proportionally many steps.
inline int adapt_size_snr(const DynamicBufferPolicy& policy, int j_pre, double snr_pre_db,
                          double snr_cur_db) {
    if (policy.mode != BufferMode::SnrDriven)
        throw ConfigError("adapt_size_snr: policy mode is not snr-driven");
    if (policy.d1 == 0 || snr_cur_db == snr_pre_db)
        return policy.clamp(j_pre);
    const double steps = (snr_cur_db - snr_pre_db) / static_cast<double>(policy.d1);
    const long delta = std::lround(steps) * policy.d2;
    return policy.clamp(j_pre - static_cast<int>(delta));
}

// Size follows the channel condition: grow when the weakest link power of
// either hop is at or below gamma, shrink otherwise.
inline int adapt_size_power(const DynamicBufferPolicy& policy, int j_pre,
                            const ChannelRealization& ch) {
    if (policy.mode != BufferMode::PowerDriven)
        throw ConfigError("adapt_size_power: policy mode is not power-driven");
    double min_power = std::numeric_limits<double>::infinity();
    for (const Complex& h : ch.source_relay)
        min_power = std::min(min_power, std::norm(h));
    for (const Complex& h : ch.relay_dest)
        min_power = std::min(min_power, std::norm(h));
    const int j = (min_power <= policy.gamma) ? j_pre + policy.d3 : j_pre - policy.d3;
    return policy.clamp(j);
}

}  // namespace dstcsim
