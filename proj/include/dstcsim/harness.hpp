#pragma once

#include <algorithm>
#include <cassert>
#include <cmath>
#include <cstdint>
#include <functional>
#include <future>
#include <limits>
#include <optional>
#include <thread>
#include <vector>

#include "dstcsim/buffers.hpp"
#include "dstcsim/channel_estimation.hpp"
#include "dstcsim/config.hpp"
#include "dstcsim/delay.hpp"
#include "dstcsim/dstc.hpp"
#include "dstcsim/link_quality.hpp"
#include "dstcsim/receivers.hpp"
#include "dstcsim/selection.hpp"
#include "dstcsim/signal_model.hpp"

namespace dstcsim {

// One CSV row. The first seven fields form the emitted schema; the rest are
// counters kept for tests and diagnostics.
struct PointResult {
    double snr_db = 0.0;
    double ber = 0.0;
    double avg_delay_epochs = 0.0;
    double mean_buffer_size = 0.0;
    double pairs_examined_mean = 0.0;
    double idle_epoch_fraction = 0.0;
    long long symbols_counted = 0;

    // standard error of the BER estimate from the per-epoch error rate
    // dispersion; errors cluster within an epoch's channel draw, so this is
    // the honest uncertainty, not the naive binomial one
    double ber_std_error = 0.0;

    long epochs = 0;
    long sr_epochs = 0;
    long rd_epochs = 0;
    long idle_epochs = 0;
    long long bit_errors = 0;
    long delivered_packets = 0;
    int min_pairs_examined = 0;
    int max_pairs_examined = 0;
};

struct ExperimentResult {
    std::vector<PointResult> rows;
};

// Full two-phase simulation of one sweep point: per-epoch channel draws,
// SINR-driven selection, source->pair reception into buffers and pair->
// destination DSTC transmission, with end-to-end error accounting.
class PointSimulator {
public:
    PointSimulator(const SimConfig& cfg, double snr_db, int initial_j, std::uint64_t stream_salt)
        : cfg_(cfg),
          snr_db_(snr_db),
          noise_var_(snr_db_to_noise_var(snr_db)),
          rng_(RngStream::derived(cfg.seed, stream_salt)),
          noise_(noise_var_, rng_),
          current_j_(initial_j),
          warmup_epochs_(2L * initial_j) {
        cfg_.validate();
        codes_ = generate_codes(cfg_.users, cfg_.chips, cfg_.seed);
        buffers_.reserve(cfg_.relays);
        for (int l = 0; l < cfg_.relays; ++l)
            buffers_.emplace_back(l, current_j_);
        traces_.resize(cfg_.relays);
        if (cfg_.selection == SelectionStrategy::None)
            static_pairs_ = no_selection_schedule(cfg_.relays);
        if (cfg_.channel_estimation)
            pilots_ = make_pilots(cfg_.users, cfg_.pilots, cfg_.seed);
        if (!cfg_.buffered)
            held_.resize(cfg_.relays);
    }

    // Runs epochs until `target_packets` packets were delivered to the
    // destination (two per DSTC epoch), bounded by a hard epoch guard.
    void run(long target_packets) {
        const long max_epochs = 1000 + 200 * target_packets;
        while (delivered_packets_ < target_packets && epoch_ < max_epochs)
            step();
    }

    void step() {
        ++epoch_;
        channels_ = draw_channels(cfg_.users, cfg_.relays, rng_, cfg_.channel_law);
        if (cfg_.buffered && cfg_.buffer_policy.mode == BufferMode::PowerDriven) {
            current_j_ = adapt_size_power(cfg_.buffer_policy, current_j_, channels_);
            for (RelayBuffer& b : buffers_)
                b.set_capacity(current_j_);
        }
        buffer_size_sum_ += current_j_;

        sr_sigs_ = build_signatures_sr(codes_, channels_);
        rd_sigs_ = build_signatures_rd(codes_, channels_);
        if (cfg_.channel_estimation) {
            const ChannelRealization est = estimate_channels(codes_, channels_, pilots_, noise_);
            sr_csi_ = build_signatures_sr(codes_, est);
            rd_csi_ = build_signatures_rd(codes_, est);
        } else {
            sr_csi_ = sr_sigs_;
            rd_csi_ = rd_sigs_;
        }

        if (cfg_.buffered)
            step_buffered();
        else
            step_unbuffered();

        if (epoch_ > warmup_epochs_)
            for (int l = 0; l < cfg_.relays; ++l)
                traces_[l].record_state(buffers_[l].occupancy(), buffers_[l].capacity());
    }

    PointResult result() const {
        PointResult r;
        r.snr_db = snr_db_;
        r.ber = symbols_counted_ > 0
                    ? static_cast<double>(bit_errors_) / static_cast<double>(symbols_counted_)
                    : std::numeric_limits<double>::quiet_NaN();
        if (rd_epochs_ > 1) {
            const double n = static_cast<double>(rd_epochs_);
            const double mean = epoch_rate_sum_ / n;
            const double var =
                std::max(0.0, (epoch_rate_sumsq_ - n * mean * mean) / (n - 1.0));
            r.ber_std_error = std::sqrt(var / n);
        }
        const std::optional<DelayStats> stats = measure_delay(merged_trace());
        r.avg_delay_epochs = stats ? stats->mean_delay : 0.0;
        r.mean_buffer_size =
            cfg_.buffered && epoch_ > 0
                ? static_cast<double>(buffer_size_sum_) / static_cast<double>(epoch_)
                : 0.0;
        r.pairs_examined_mean =
            epoch_ > 0 ? pairs_examined_sum_ / static_cast<double>(epoch_) : 0.0;
        r.idle_epoch_fraction =
            epoch_ > 0 ? static_cast<double>(idle_epochs_) / static_cast<double>(epoch_) : 0.0;
        r.symbols_counted = symbols_counted_;
        r.epochs = epoch_;
        r.sr_epochs = sr_epochs_;
        r.rd_epochs = rd_epochs_;
        r.idle_epochs = idle_epochs_;
        r.bit_errors = bit_errors_;
        r.delivered_packets = delivered_packets_;
        r.min_pairs_examined = min_pairs_examined_ == std::numeric_limits<int>::max()
                                   ? 0
                                   : min_pairs_examined_;
        r.max_pairs_examined = max_pairs_examined_;
        return r;
    }

    const std::vector<RelayBuffer>& buffers() const { return buffers_; }
    const BufferTrace& trace(int relay) const { return traces_[relay]; }
    BufferTrace merged_trace() const {
        BufferTrace all;
        for (const BufferTrace& t : traces_)
            all.merge(t);
        return all;
    }
    long epochs() const { return epoch_; }
    long rd_epochs() const { return rd_epochs_; }
    long delivered_packets() const { return delivered_packets_; }

private:
    // ---- selection ---------------------------------------------------------

    FilterKind relay_filter_kind() const {
        return cfg_.relay_detector == RelayDetector::Mmse ? FilterKind::Mmse : FilterKind::Rake;
    }
    FilterKind dest_filter_kind() const {
        return cfg_.dest_detector == DestDetector::Mmse ? FilterKind::Mmse : FilterKind::Rake;
    }

    LinkQualityTable build_epoch_table() {
        const FilterBank sr_bank = build_filter_bank(sr_csi_, relay_filter_kind(), noise_var_);
        const FilterBank rd_bank = build_filter_bank(rd_csi_, dest_filter_kind(), noise_var_);
        return build_table(sr_csi_, sr_bank, rd_csi_, rd_bank, noise_var_, epoch_);
    }

    PairDecision select_buffered() {
        BufferAvailability avail;
        avail.not_full.resize(cfg_.relays);
        avail.not_empty.resize(cfg_.relays);
        for (int l = 0; l < cfg_.relays; ++l) {
            avail.not_full[l] = !buffers_[l].full();
            avail.not_empty[l] = !buffers_[l].empty();
        }
        switch (cfg_.selection) {
            case SelectionStrategy::Exhaustive:
                return select_exhaustive(build_epoch_table(), avail);
            case SelectionStrategy::Greedy:
                return select_greedy(build_epoch_table(), avail);
            case SelectionStrategy::Random:
                return select_random(cfg_.relays, avail, rng_);
            case SelectionStrategy::None: {
                const auto [m, n] = static_pairs_[rotation_ % static_pairs_.size()];
                ++rotation_;
                PairDecision d;
                const bool can_sr = avail.feasible(Phase::SourceRelay, m, n);
                const bool can_rd = avail.feasible(Phase::RelayDest, m, n);
                if (!can_sr && !can_rd)
                    return d;
                d.idle = false;
                d.p = m;
                d.q = n;
                if (can_sr && can_rd)
                    d.phase = (epoch_ % 2 == 1) ? Phase::SourceRelay : Phase::RelayDest;
                else
                    d.phase = can_sr ? Phase::SourceRelay : Phase::RelayDest;
                return d;
            }
        }
        throw ConfigError("select_buffered: unknown strategy");
    }

    void step_buffered() {
        const PairDecision decision = select_buffered();
        note_decision(decision);
        if (decision.idle) {
            ++idle_epochs_;
            return;
        }
        if (decision.phase == Phase::SourceRelay) {
            ++sr_epochs_;
            source_to_pair(decision.p, decision.q);
        } else {
            ++rd_epochs_;
            pair_to_destination(decision.p, decision.q);
        }
    }

    void note_decision(const PairDecision& decision) {
        pairs_examined_sum_ += decision.pairs_examined;
        min_pairs_examined_ = std::min(min_pairs_examined_, decision.pairs_examined);
        max_pairs_examined_ = std::max(max_pairs_examined_, decision.pairs_examined);
    }

    // ---- source-relay phase --------------------------------------------------

    std::vector<std::int8_t> draw_source_symbols() {
        // fresh data every reception epoch, flattened [(k * 2 + slot) * M + j]
        const int m = cfg_.symbols_per_packet;
        std::vector<std::int8_t> b(static_cast<std::size_t>(cfg_.users) * 2 * m);
        for (int k = 0; k < cfg_.users; ++k) {
            for (int slot = 0; slot < 2; ++slot) {
                const SymbolBlock block = draw_symbol_block(rng_, k, 2 * epoch_ - 1 + slot, m);
                std::copy(block.symbols.begin(), block.symbols.end(),
                          b.begin() + static_cast<long>(DecodedPacketPair::offset(k, slot, m)));
            }
        }
        return b;
    }

    std::vector<ReceiveFilter> relay_filters(int relay) {
        std::vector<EffectiveSignature> link(cfg_.users);
        for (int k = 0; k < cfg_.users; ++k)
            link[k] = sr_csi_.at(k, relay);
        if (cfg_.relay_detector == RelayDetector::Mmse)
            return mmse_filters_for_link(link, noise_var_, relay);
        std::vector<ReceiveFilter> fs(cfg_.users);
        for (int k = 0; k < cfg_.users; ++k)
            fs[k] = rake_filter(link[k], k, relay);
        return fs;
    }

    // Decodes the two-slot transmission as heard by one relay.
    DecodedPacketPair decode_at_relay(int relay, const std::vector<std::int8_t>& truth) {
        const int m = cfg_.symbols_per_packet;
        DecodedPacketPair entry;
        entry.source_epoch = epoch_;
        entry.enqueue_epoch = epoch_;
        entry.users = cfg_.users;
        entry.symbols = m;
        entry.truth = truth;
        entry.decoded.resize(truth.size());
        if (cfg_.relay_detector == RelayDetector::Perfect) {
            entry.decoded = truth;
            return entry;
        }
        const std::vector<ReceiveFilter> filters = relay_filters(relay);
        CVec y(cfg_.chips);
        std::vector<double> syms(cfg_.users);
        for (int slot = 0; slot < 2; ++slot) {
            for (int j = 0; j < m; ++j) {
                std::fill(y.begin(), y.end(), Complex{0.0, 0.0});
                for (int k = 0; k < cfg_.users; ++k)
                    syms[k] = truth[DecodedPacketPair::offset(k, slot, m) + j];
                for (int k = 0; k < cfg_.users; ++k) {
                    const CVec& v = sr_sigs_.at(k, relay).v;
                    for (int i = 0; i < cfg_.chips; ++i)
                        y[i] += v[i] * syms[k];
                }
                noise_.add_to(y);
                for (int k = 0; k < cfg_.users; ++k)
                    entry.decoded[DecodedPacketPair::offset(k, slot, m) + j] =
                        linear_detect(filters[k], y) > 0 ? 1 : -1;
            }
        }
        return entry;
    }

    void source_to_pair(int p, int q) {
        const std::vector<std::int8_t> truth = draw_source_symbols();
        for (int relay : {p, q}) {
            buffers_[relay].push(decode_at_relay(relay, truth));
            if (epoch_ > warmup_epochs_)
                traces_[relay].record_arrival();
        }
    }

    // ---- relay-destination phase ---------------------------------------------

    // Destination decisions for the pair's symbols of one slot-pair epoch.
    void pair_to_destination(int p, int q) {
        DecodedPacketPair ep = buffers_[p].pop();
        DecodedPacketPair eq = buffers_[q].pop();
        if (epoch_ > warmup_epochs_) {
            traces_[p].record_departure(epoch_ - ep.enqueue_epoch);
            traces_[q].record_departure(epoch_ - eq.enqueue_epoch);
        }
        transmit_and_count(p, q, ep, eq);
    }

    // MMSE destination filters for the slot observations: all 2K active
    // streams form the covariance. Index k is user k via relay p, K + k via
    // relay q.
    std::vector<ReceiveFilter> dest_mmse_filters(int p, int q) {
        std::vector<EffectiveSignature> sigs;
        sigs.reserve(2 * cfg_.users);
        for (int k = 0; k < cfg_.users; ++k)
            sigs.push_back(rd_csi_.at(k, p));
        for (int k = 0; k < cfg_.users; ++k)
            sigs.push_back(rd_csi_.at(k, q));
        return mmse_filters_for_link(sigs, noise_var_);
    }

    // Joint multiuser ML over one DSTC epoch: minimizes
    // || [y1; conj(y2)] - sum_k H^k b_k ||^2 over all 2^(2K) BPSK vectors.
    // Expanded to b^T A b - 2 b^T r with the cross Gram A fixed per epoch and
    // r the per-user combining outputs, so the per-symbol cost is the
    // hypothesis scan alone. Reduces to per-user combining when K = 1.
    struct JointMlDetector {
        int users = 0;
        std::vector<EffectiveSignature> sig_p;  // per user
        std::vector<EffectiveSignature> sig_q;
        std::vector<double> gram;  // [2K x 2K], Re(H^H H) across users

        JointMlDetector(const SignatureSet& csi, int users_in, int p, int q) : users(users_in) {
            sig_p.reserve(users);
            sig_q.reserve(users);
            std::vector<StackedChannel> stacked;
            stacked.reserve(users);
            for (int k = 0; k < users; ++k) {
                sig_p.push_back(csi.at(k, p));
                sig_q.push_back(csi.at(k, q));
                stacked.push_back(build_stacked_channel(sig_p[k], sig_q[k]));
            }
            const int dim = 2 * users;
            gram.assign(static_cast<std::size_t>(dim) * dim, 0.0);
            const auto col = [&](int i) -> const CVec& {
                return (i % 2 == 0) ? stacked[i / 2].col_m : stacked[i / 2].col_n;
            };
            for (int a = 0; a < dim; ++a)
                for (int b = 0; b < dim; ++b)
                    gram[static_cast<std::size_t>(a) * dim + b] = hdot(col(a), col(b)).real();
        }

        // Detected symbols ordered [b_p(user 0), b_q(user 0), b_p(user 1), ...]
        std::vector<double> detect(std::span<const Complex> y1,
                                   std::span<const Complex> y2) const {
            const int dim = 2 * users;
            std::vector<double> r(dim);
            for (int k = 0; k < users; ++k) {
                const auto [soft_p, soft_q] = alamouti_combine(sig_p[k], sig_q[k], y1, y2);
                r[2 * k] = soft_p.real();
                r[2 * k + 1] = soft_q.real();
            }
            std::vector<double> b(dim);
            std::vector<double> best(dim);
            double best_metric = std::numeric_limits<double>::infinity();
            for (unsigned hyp = 0; hyp < (1u << dim); ++hyp) {
                for (int i = 0; i < dim; ++i)
                    b[i] = (hyp >> i) & 1u ? 1.0 : -1.0;
                double metric = 0.0;
                for (int a = 0; a < dim; ++a) {
                    double row = 0.0;
                    for (int c = 0; c < dim; ++c)
                        row += gram[static_cast<std::size_t>(a) * dim + c] * b[c];
                    metric += b[a] * row;
                    metric -= 2.0 * b[a] * r[a];
                }
                if (metric < best_metric) {
                    best_metric = metric;
                    best = b;
                }
            }
            return best;
        }
    };

    void transmit_and_count(int p, int q, const DecodedPacketPair& ep,
                            const DecodedPacketPair& eq) {
        const int m = ep.symbols;
        std::vector<ReceiveFilter> mmse;
        if (cfg_.dest_detector == DestDetector::Mmse)
            mmse = dest_mmse_filters(p, q);
        std::optional<JointMlDetector> joint;
        if (cfg_.dest_detector == DestDetector::Ml)
            joint.emplace(rd_csi_, cfg_.users, p, q);

        CVec y1(cfg_.chips);
        CVec y2(cfg_.chips);
        std::vector<double> ml_bits;
        long long epoch_errors = 0;
        long long epoch_symbols = 0;
        for (int j = 0; j < m; ++j) {
            std::fill(y1.begin(), y1.end(), Complex{0.0, 0.0});
            std::fill(y2.begin(), y2.end(), Complex{0.0, 0.0});
            for (int k = 0; k < cfg_.users; ++k) {
                const double bp = ep.decoded_at(k, 0, j);
                const double bq = eq.decoded_at(k, 1, j);
                add_dstc_signal(y1, y2, rd_sigs_.at(k, p), rd_sigs_.at(k, q), bp, bq);
            }
            noise_.add_to(y1);
            noise_.add_to(y2);

            if (cfg_.dest_detector == DestDetector::Ml)
                ml_bits = joint->detect(y1, y2);
            for (int k = 0; k < cfg_.users; ++k) {
                double d1 = 0.0;
                double d2 = 0.0;
                switch (cfg_.dest_detector) {
                    case DestDetector::Ml:
                        d1 = ml_bits[2 * k];
                        d2 = ml_bits[2 * k + 1];
                        break;
                    case DestDetector::Rake: {
                        // matched-weight Alamouti combining
                        const auto [a, b] =
                            ml_alamouti_detect(rd_csi_.at(k, p), rd_csi_.at(k, q), y1, y2);
                        d1 = a;
                        d2 = b;
                        break;
                    }
                    case DestDetector::Mmse: {
                        // MMSE-weighted combining across the two slots
                        const Complex soft_p = hdot(mmse[k].w, y1) +
                                               std::conj(hdot(mmse[cfg_.users + k].w, y2));
                        const Complex soft_q = hdot(mmse[cfg_.users + k].w, y1) -
                                               std::conj(hdot(mmse[k].w, y2));
                        d1 = slicer(soft_p);
                        d2 = slicer(soft_q);
                        break;
                    }
                }
                epoch_errors += (d1 > 0) != (ep.truth_at(k, 0, j) > 0);
                epoch_errors += (d2 > 0) != (eq.truth_at(k, 1, j) > 0);
                epoch_symbols += 2;
            }
        }
        bit_errors_ += epoch_errors;
        symbols_counted_ += epoch_symbols;
        const double rate = static_cast<double>(epoch_errors) / static_cast<double>(epoch_symbols);
        epoch_rate_sum_ += rate;
        epoch_rate_sumsq_ += rate * rate;
        delivered_packets_ += 2;
    }

    // ---- non-buffered baselines ----------------------------------------------

    // Strict two-epoch alternation: a broadcast reception epoch decoded by all
    // relays, then one pair (chosen over the relay-destination links only)
    // forwards its decode.
    void step_unbuffered() {
        if (!packet_pending_) {
            ++sr_epochs_;
            const std::vector<std::int8_t> truth = draw_source_symbols();
            for (int l = 0; l < cfg_.relays; ++l)
                held_[l] = decode_at_relay(l, truth);
            packet_pending_ = true;
            return;
        }
        int p = -1;
        int q = -1;
        switch (cfg_.selection) {
            case SelectionStrategy::Exhaustive: {
                const LinkQualityTable table = build_epoch_table();
                PairDecision d;
                d.pairs_examined = pair_count(cfg_.relays);
                double best = -1.0;
                for (int a = 0; a < cfg_.relays; ++a)
                    for (int b = a + 1; b < cfg_.relays; ++b)
                        if (table.pair(Phase::RelayDest, a, b) > best) {
                            best = table.pair(Phase::RelayDest, a, b);
                            p = a;
                            q = b;
                        }
                note_decision(d);
                break;
            }
            case SelectionStrategy::Greedy: {
                // pair of the two strongest single relay-destination links
                const LinkQualityTable table = build_epoch_table();
                int first = 0;
                for (int l = 1; l < cfg_.relays; ++l)
                    if (table.single(Phase::RelayDest, l) > table.single(Phase::RelayDest, first))
                        first = l;
                int second = first == 0 ? 1 : 0;
                for (int l = 0; l < cfg_.relays; ++l)
                    if (l != first && table.single(Phase::RelayDest, l) >
                                          table.single(Phase::RelayDest, second))
                        second = l;
                p = std::min(first, second);
                q = std::max(first, second);
                break;
            }
            case SelectionStrategy::Random: {
                const int idx = static_cast<int>(rng_.uniform_index(pair_count(cfg_.relays)));
                int count = 0;
                for (int a = 0; a < cfg_.relays && p < 0; ++a)
                    for (int b = a + 1; b < cfg_.relays; ++b)
                        if (count++ == idx) {
                            p = a;
                            q = b;
                            break;
                        }
                break;
            }
            case SelectionStrategy::None: {
                const auto [a, b] = static_pairs_[rotation_ % static_pairs_.size()];
                ++rotation_;
                p = a;
                q = b;
                break;
            }
        }
        ++rd_epochs_;
        transmit_and_count(p, q, held_[p], held_[q]);
        packet_pending_ = false;
    }

    SimConfig cfg_;
    double snr_db_;
    double noise_var_;
    RngStream rng_;
    NoiseModel noise_;
    int current_j_;
    long warmup_epochs_;

    std::vector<SpreadingCode> codes_;
    std::vector<RelayBuffer> buffers_;
    std::vector<BufferTrace> traces_;
    std::vector<std::pair<int, int>> static_pairs_;
    std::size_t rotation_ = 0;
    PilotMatrix pilots_;

    ChannelRealization channels_;
    SignatureSet sr_sigs_;
    SignatureSet rd_sigs_;
    SignatureSet sr_csi_;  // what receivers believe: estimated or true
    SignatureSet rd_csi_;

    std::vector<DecodedPacketPair> held_;  // non-buffered holding slot per relay
    bool packet_pending_ = false;

    long epoch_ = 0;
    long sr_epochs_ = 0;
    long rd_epochs_ = 0;
    long idle_epochs_ = 0;
    long long bit_errors_ = 0;
    long long symbols_counted_ = 0;
    double epoch_rate_sum_ = 0.0;
    double epoch_rate_sumsq_ = 0.0;
    long delivered_packets_ = 0;
    long long buffer_size_sum_ = 0;
    double pairs_examined_sum_ = 0.0;
    int min_pairs_examined_ = std::numeric_limits<int>::max();
    int max_pairs_examined_ = 0;
};

namespace detail {

template <typename Job>
inline std::vector<PointResult> run_points(int threads, const std::vector<Job>& jobs) {
    std::vector<PointResult> rows(jobs.size());
    if (threads == 1 || jobs.size() <= 1) {
        for (std::size_t i = 0; i < jobs.size(); ++i)
            rows[i] = jobs[i]();
        return rows;
    }
    std::vector<std::future<PointResult>> futures;
    futures.reserve(jobs.size());
    for (const Job& job : jobs)
        futures.push_back(std::async(std::launch::async, job));
    for (std::size_t i = 0; i < jobs.size(); ++i)
        rows[i] = futures[i].get();
    return rows;
}

}  // namespace detail

// Buffer size at a sweep point under the SNR-driven rule, relative to the
// configured size at the first point.
inline int buffer_size_at_snr(const SimConfig& cfg, double snr_db) {
    if (!cfg.buffered || cfg.buffer_policy.mode != BufferMode::SnrDriven)
        return cfg.buffer_size;
    DynamicBufferPolicy policy = cfg.buffer_policy;
    if (policy.d1 == 0)
        return policy.clamp(cfg.buffer_size);
    const double steps = (snr_db - cfg.snr.min_db) / static_cast<double>(policy.d1);
    const long delta = std::lround(steps) * policy.d2;
    return policy.clamp(cfg.buffer_size - static_cast<int>(delta));
}

// One row per SNR grid point. Points are independent trials with stream salts
// derived from the point index, so the sweep parallelizes deterministically.
inline ExperimentResult run_ber_sweep(const SimConfig& cfg) {
    cfg.validate();
    const std::vector<double> points = cfg.snr.points();
    std::vector<std::function<PointResult()>> jobs;
    jobs.reserve(points.size());
    for (std::size_t i = 0; i < points.size(); ++i) {
        const double snr_db = points[i];
        const int j0 = buffer_size_at_snr(cfg, snr_db);
        jobs.push_back([&cfg, snr_db, j0, i]() {
            PointSimulator sim(cfg, snr_db, j0, static_cast<std::uint64_t>(i));
            sim.run(cfg.packets);
            return sim.result();
        });
    }
    ExperimentResult result;
    result.rows = detail::run_points(cfg.threads, jobs);
    return result;
}

// One row per buffer size, fixed SNR, identical stream salts across sizes so
// the comparison is paired.
inline ExperimentResult run_buffer_size_sweep(const SimConfig& cfg, const std::vector<int>& sizes) {
    cfg.validate();
    std::vector<std::function<PointResult()>> jobs;
    jobs.reserve(sizes.size());
    for (const int j : sizes) {
        if (j < 1)
            throw ConfigError("run_buffer_size_sweep: sizes must be >= 1");
        jobs.push_back([&cfg, j]() {
            PointSimulator sim(cfg, cfg.snr.min_db, j, 0);
            sim.run(cfg.packets);
            return sim.result();
        });
    }
    ExperimentResult result;
    result.rows = detail::run_points(cfg.threads, jobs);
    return result;
}

// One row per target packet count at fixed SNR; delay statistics against the
// amount of traffic pushed through the system.
inline ExperimentResult run_delay_experiment(const SimConfig& cfg,
                                             const std::vector<long>& packet_counts) {
    cfg.validate();
    std::vector<std::function<PointResult()>> jobs;
    jobs.reserve(packet_counts.size());
    for (const long count : packet_counts) {
        if (count < 0)
            throw ConfigError("run_delay_experiment: packet counts must be >= 0");
        jobs.push_back([&cfg, count]() {
            if (count == 0) {
                PointResult r;
                r.snr_db = cfg.snr.min_db;
                r.symbols_counted = 0;
                r.ber = std::numeric_limits<double>::quiet_NaN();
                return r;
            }
            PointSimulator sim(cfg, cfg.snr.min_db, cfg.buffer_size, 0);
            sim.run(count);
            return sim.result();
        });
    }
    ExperimentResult result;
    result.rows = detail::run_points(cfg.threads, jobs);
    return result;
}

}  // namespace dstcsim
