#pragma once

#include <vector>

#include "dstcsim/common.hpp"
#include "dstcsim/linalg.hpp"
#include "dstcsim/signal_model.hpp"

namespace dstcsim {

// Known pilot symbols, one length-`count` sequence per user. Walsh-Hadamard
// rows where the length allows (exactly orthogonal across users), otherwise
// seeded random ±1 sequences resolved by the least-squares solve.
struct PilotMatrix {
    int users = 0;
    int count = 0;
    std::vector<double> symbols;  // [k * count + t]

    double at(int k, int t) const { return symbols[static_cast<std::size_t>(k) * count + t]; }
};

inline bool is_power_of_two(int x) {
    return x > 0 && (x & (x - 1)) == 0;
}

inline PilotMatrix make_pilots(int users, int count, std::uint64_t seed = 0) {
    if (users < 1)
        throw ConfigError("make_pilots: need users >= 1");
    if (count < 1)
        throw ConfigError("make_pilots: need pilot count >= 1");
    if (count < users)
        throw ConfigError("make_pilots: pilot count must be >= user count");
    PilotMatrix p;
    p.users = users;
    p.count = count;
    p.symbols.resize(static_cast<std::size_t>(users) * count);
    if (is_power_of_two(count)) {
        // Hadamard rows: entry (k, t) = (-1)^popcount(k & t)
        for (int k = 0; k < users; ++k)
            for (int t = 0; t < count; ++t)
                p.symbols[static_cast<std::size_t>(k) * count + t] =
                    (__builtin_popcount(static_cast<unsigned>(k & t)) & 1) ? -1.0 : 1.0;
    } else {
        RngStream rng = RngStream::derived(seed, 0x50696c6f74u);  // pilot stream
        for (double& s : p.symbols)
            s = rng.bpsk_symbol();
    }
    return p;
}

// Received pilot slots on one link: count vectors of N chips,
//   y_t = sum_k g_k s_k p_k(t) + n_t.
// Least squares for the K fading gains via the normal equations; exact on
// noiseless pilots when the pilot matrix has full rank.
inline CVec estimate_link_gains(const std::vector<SpreadingCode>& codes, const PilotMatrix& pilots,
                                const std::vector<CVec>& received) {
    const int users = static_cast<int>(codes.size());
    if (pilots.users != users)
        throw ConfigError("estimate_link_gains: pilot/user count mismatch");
    if (static_cast<int>(received.size()) != pilots.count)
        throw ModelError("estimate_link_gains: one received vector per pilot slot required");
    if (pilots.count < 1)
        throw ConfigError("estimate_link_gains: zero pilots");

    // Normal equations: A^H A g = A^H y with column k of A the stacked
    // vectors s_k p_k(t). Entries reduce to code correlations times pilot
    // correlations, so no NT-sized matrix is ever formed.
    CMatrix gram(users, users);
    for (int a = 0; a < users; ++a) {
        for (int b = 0; b < users; ++b) {
            double code_corr = 0.0;
            for (std::size_t i = 0; i < codes[a].chips.size(); ++i)
                code_corr += codes[a].chips[i] * codes[b].chips[i];
            double pilot_corr = 0.0;
            for (int t = 0; t < pilots.count; ++t)
                pilot_corr += pilots.at(a, t) * pilots.at(b, t);
            gram.at(a, b) = code_corr * pilot_corr;
        }
    }
    CVec rhs(users, Complex{0.0, 0.0});
    for (int a = 0; a < users; ++a) {
        Complex acc{0.0, 0.0};
        for (int t = 0; t < pilots.count; ++t) {
            const CVec& y = received[t];
            if (y.size() != codes[a].chips.size())
                throw ModelError("estimate_link_gains: chip length mismatch");
            Complex corr{0.0, 0.0};
            for (std::size_t i = 0; i < y.size(); ++i)
                corr += codes[a].chips[i] * y[i];
            acc += pilots.at(a, t) * corr;
        }
        rhs[a] = acc;
    }
    return solve(gram, rhs);
}

// Synthesizes the pilot transmission for one link and estimates its gains.
inline CVec estimate_link(const std::vector<SpreadingCode>& codes, const PilotMatrix& pilots,
                          std::span<const Complex> true_gains, NoiseModel& noise) {
    const int users = static_cast<int>(codes.size());
    const int chips = codes.front().length();
    std::vector<CVec> received(pilots.count, CVec(chips, Complex{0.0, 0.0}));
    for (int t = 0; t < pilots.count; ++t) {
        CVec& y = received[t];
        for (int k = 0; k < users; ++k) {
            const Complex gain = true_gains[k] * pilots.at(k, t);
            for (int i = 0; i < chips; ++i)
                y[i] += codes[k].chips[i] * gain;
        }
        noise.add_to(y);
    }
    return estimate_link_gains(codes, pilots, received);
}

// Estimated channel realization: every link of both hops re-estimated from
// its own pilot transmission at the current noise level.
inline ChannelRealization estimate_channels(const std::vector<SpreadingCode>& codes,
                                            const ChannelRealization& truth,
                                            const PilotMatrix& pilots, NoiseModel& noise) {
    ChannelRealization est;
    est.users = truth.users;
    est.relays = truth.relays;
    est.source_relay.resize(truth.source_relay.size());
    est.relay_dest.resize(truth.relay_dest.size());
    CVec gains(truth.users);
    for (int l = 0; l < truth.relays; ++l) {
        for (int k = 0; k < truth.users; ++k)
            gains[k] = truth.sr(k, l);
        CVec g = estimate_link(codes, pilots, gains, noise);
        for (int k = 0; k < truth.users; ++k)
            est.sr(k, l) = g[k];
    }
    for (int l = 0; l < truth.relays; ++l) {
        for (int k = 0; k < truth.users; ++k)
            gains[k] = truth.rd(k, l);
        CVec g = estimate_link(codes, pilots, gains, noise);
        for (int k = 0; k < truth.users; ++k)
            est.rd(k, l) = g[k];
    }
    return est;
}

}  // namespace dstcsim
