#pragma once

#include <vector>

#include "dstcsim/common.hpp"
#include "dstcsim/receivers.hpp"
#include "dstcsim/signal_model.hpp"

namespace dstcsim {

enum class Phase { SourceRelay, RelayDest };

enum class FilterKind { Rake, Mmse };

// Index of unordered pair (m, n), m < n, in lexicographic order.
inline int pair_index(int m, int n, int relays) {
    if (m == n)
        throw ModelError("pair_index: relay paired with itself");
    if (m > n)
        std::swap(m, n);
    if (m < 0 || n >= relays)
        throw ModelError("pair_index: relay index out of range");
    return m * relays - m * (m + 1) / 2 + (n - m - 1);
}

inline int pair_count(int relays) {
    return relays * (relays - 1) / 2;
}

// Filters for every (user, relay) link of one hop.
struct FilterBank {
    int users = 0;
    int relays = 0;
    std::vector<ReceiveFilter> filters;  // [k * relays + l]

    const ReceiveFilter& at(int k, int l) const {
        return filters[static_cast<std::size_t>(k) * relays + l];
    }
};

inline FilterBank build_filter_bank(const SignatureSet& set, FilterKind kind, double noise_var) {
    FilterBank bank;
    bank.users = set.users;
    bank.relays = set.relays;
    bank.filters.resize(static_cast<std::size_t>(set.users) * set.relays);
    if (kind == FilterKind::Rake) {
        for (int k = 0; k < set.users; ++k)
            for (int l = 0; l < set.relays; ++l)
                bank.filters[static_cast<std::size_t>(k) * set.relays + l] =
                    rake_filter(set.at(k, l), k, l);
        return bank;
    }
    // MMSE: one covariance per link, all users share the factorization.
    std::vector<EffectiveSignature> link_sigs(set.users);
    for (int l = 0; l < set.relays; ++l) {
        for (int k = 0; k < set.users; ++k)
            link_sigs[k] = set.at(k, l);
        std::vector<ReceiveFilter> fs = mmse_filters_for_link(link_sigs, noise_var, l);
        for (int k = 0; k < set.users; ++k)
            bank.filters[static_cast<std::size_t>(k) * set.relays + l] = std::move(fs[k]);
    }
    return bank;
}

namespace detail {

// Per-relay aggregates over users: G_l = sum_k rho_{k,l} |w_{k,l}|^2 and
// U_l = sum_k |w_{k,l}|^2. Every SINR in this module is a ratio of these.
struct HopScalars {
    std::vector<double> signal;  // G_l
    std::vector<double> noise;   // U_l
    double signal_total = 0.0;
};

inline HopScalars hop_scalars(const SignatureSet& set, const FilterBank& bank) {
    if (set.users != bank.users || set.relays != bank.relays)
        throw ModelError("hop_scalars: signature/filter bank shape mismatch");
    HopScalars hs;
    hs.signal.assign(set.relays, 0.0);
    hs.noise.assign(set.relays, 0.0);
    for (int k = 0; k < set.users; ++k) {
        for (int l = 0; l < set.relays; ++l) {
            const double rho = set.at(k, l).power();
            const double wsq = norm_sq(bank.at(k, l).w);
            hs.signal[l] += rho * wsq;
            hs.noise[l] += wsq;
        }
    }
    for (double g : hs.signal)
        hs.signal_total += g;
    return hs;
}

inline double ratio_or_zero(double num, double den) {
    return den > 0.0 ? num / den : 0.0;
}

inline double pair_sinr_from_scalars(const HopScalars& hs, int m, int n, double noise_var) {
    if (m > n)
        std::swap(m, n);  // bitwise symmetry in the pair
    const double num = hs.signal[m] + hs.signal[n];
    const double den = (hs.signal_total - hs.signal[m] - hs.signal[n]) +
                       noise_var * (hs.noise[m] + hs.noise[n]);
    return ratio_or_zero(num, den);
}

inline double single_sinr_from_scalars(const HopScalars& hs, int p, double noise_var) {
    const double num = hs.signal[p];
    const double den = (hs.signal_total - hs.signal[p]) + noise_var * hs.noise[p];
    return ratio_or_zero(num, den);
}

}  // namespace detail

// Combined SINR of a two-relay link set: the pair's filtered signal power over
// the other relays' contributions plus the pair's filtered noise, summed over
// users. Identical algebra for both hops; pass that hop's signatures/filters.
inline double pair_sinr(const SignatureSet& set, const FilterBank& bank, int m, int n,
                        double noise_var) {
    if (m == n)
        throw ModelError("pair_sinr: relay paired with itself");
    if (m < 0 || n < 0 || m >= set.relays || n >= set.relays)
        throw ModelError("pair_sinr: relay index out of range");
    const detail::HopScalars hs = detail::hop_scalars(set, bank);
    return detail::pair_sinr_from_scalars(hs, m, n, noise_var);
}

inline double single_sinr(const SignatureSet& set, const FilterBank& bank, int p,
                          double noise_var) {
    if (p < 0 || p >= set.relays)
        throw ModelError("single_sinr: relay index out of range");
    const detail::HopScalars hs = detail::hop_scalars(set, bank);
    return detail::single_sinr_from_scalars(hs, p, noise_var);
}

// Every single-link and pair SINR of the current realization, both hops.
struct LinkQualityTable {
    int relays = 0;
    long epoch = 0;
    std::vector<double> single_sr;  // [p]
    std::vector<double> single_rd;
    std::vector<double> pair_sr;  // [pair_index(m, n)]
    std::vector<double> pair_rd;
    long pair_evaluations = 0;
    long single_evaluations = 0;

    double pair(Phase phase, int m, int n) const {
        const std::vector<double>& v = (phase == Phase::SourceRelay) ? pair_sr : pair_rd;
        return v[pair_index(m, n, relays)];
    }
    double single(Phase phase, int p) const {
        const std::vector<double>& v = (phase == Phase::SourceRelay) ? single_sr : single_rd;
        return v[p];
    }
};

inline LinkQualityTable build_table(const SignatureSet& sr_set, const FilterBank& sr_bank,
                                    const SignatureSet& rd_set, const FilterBank& rd_bank,
                                    double noise_var, long epoch = 0) {
    if (!(noise_var > 0.0))
        throw ModelError("build_table: noise variance must be positive");
    const int relays = sr_set.relays;
    if (rd_set.relays != relays)
        throw ModelError("build_table: hop relay counts differ");
    LinkQualityTable table;
    table.relays = relays;
    table.epoch = epoch;
    const detail::HopScalars sr = detail::hop_scalars(sr_set, sr_bank);
    const detail::HopScalars rd = detail::hop_scalars(rd_set, rd_bank);
    table.single_sr.resize(relays);
    table.single_rd.resize(relays);
    for (int p = 0; p < relays; ++p) {
        table.single_sr[p] = detail::single_sinr_from_scalars(sr, p, noise_var);
        table.single_rd[p] = detail::single_sinr_from_scalars(rd, p, noise_var);
        table.single_evaluations += 2;
    }
    table.pair_sr.resize(pair_count(relays));
    table.pair_rd.resize(pair_count(relays));
    for (int m = 0; m < relays; ++m) {
        for (int n = m + 1; n < relays; ++n) {
            const int idx = pair_index(m, n, relays);
            table.pair_sr[idx] = detail::pair_sinr_from_scalars(sr, m, n, noise_var);
            table.pair_rd[idx] = detail::pair_sinr_from_scalars(rd, m, n, noise_var);
            table.pair_evaluations += 2;
        }
    }
    return table;
}

}  // namespace dstcsim
