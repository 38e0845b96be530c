#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>
#include <vector>

#include "dstcsim/common.hpp"
#include "dstcsim/rng.hpp"

namespace dstcsim {

// Binary spreading sequence, chips ±1/sqrt(N), unit norm.
struct SpreadingCode {
    std::vector<double> chips;

    int length() const { return static_cast<int>(chips.size()); }
};

// Per-(user, link) N-chip vector a * s_k * h: amplitude, code and fading in one.
struct EffectiveSignature {
    CVec v;

    int length() const { return static_cast<int>(v.size()); }
    double power() const { return norm_sq(v); }
};

// One packet of BPSK symbols for one user in one time slot.
struct SymbolBlock {
    std::vector<std::int8_t> symbols;  // entries are exactly +1 or -1
    int user = 0;
    long slot = 0;
};

inline SymbolBlock draw_symbol_block(RngStream& rng, int user, long slot, int symbols) {
    SymbolBlock block;
    block.user = user;
    block.slot = slot;
    block.symbols.resize(symbols);
    for (std::int8_t& s : block.symbols)
        s = rng.bpsk_symbol() > 0 ? 1 : -1;
    return block;
}

enum class ChannelLaw {
    UniformRing,      // amplitude uniform on [0, sqrt(3)], phase uniform; E|h|^2 = 1
    ComplexGaussian,  // CN(0, 1)
};

// All fading coefficients of one epoch. Both hops are per (user, relay):
// source->relay gains and relay->destination gains for each user.
struct ChannelRealization {
    int users = 0;
    int relays = 0;
    CVec source_relay;  // [k * relays + l]
    CVec relay_dest;    // [k * relays + l]

    Complex sr(int k, int l) const { return source_relay[static_cast<std::size_t>(k) * relays + l]; }
    Complex rd(int k, int l) const { return relay_dest[static_cast<std::size_t>(k) * relays + l]; }
    Complex& sr(int k, int l) { return source_relay[static_cast<std::size_t>(k) * relays + l]; }
    Complex& rd(int k, int l) { return relay_dest[static_cast<std::size_t>(k) * relays + l]; }
};

// Zero-mean complex Gaussian noise source with E|n|^2 = variance.
class NoiseModel {
public:
    NoiseModel(double variance, RngStream& stream) : variance_(variance), stream_(&stream) {
        if (!(variance > 0.0))
            throw ConfigError("NoiseModel: variance must be positive");
    }

    double variance() const { return variance_; }

    Complex sample() { return stream_->complex_gaussian(variance_); }

    void add_to(std::span<Complex> y) {
        for (Complex& x : y)
            x += sample();
    }

private:
    double variance_;
    RngStream* stream_;
};

inline std::vector<SpreadingCode> generate_codes(int users, int chips, std::uint64_t seed) {
    if (users < 1 || chips < 1)
        throw ConfigError("generate_codes: need users >= 1 and chips >= 1");
    RngStream rng = RngStream::derived(seed, 0x5370437264u);  // code stream
    const double amp = 1.0 / std::sqrt(static_cast<double>(chips));
    std::vector<SpreadingCode> codes(users);
    for (SpreadingCode& code : codes) {
        code.chips.resize(chips);
        for (double& c : code.chips)
            c = rng.bpsk_symbol() * amp;
    }
    return codes;
}

inline Complex draw_fading(RngStream& rng, ChannelLaw law) {
    switch (law) {
        case ChannelLaw::UniformRing: {
            const double r = rng.uniform(0.0, std::sqrt(3.0));
            const double th = rng.uniform(0.0, 2.0 * std::numbers::pi);
            return std::polar(r, th);
        }
        case ChannelLaw::ComplexGaussian:
            return rng.complex_gaussian(1.0);
    }
    throw ConfigError("draw_fading: unknown channel law");
}

inline ChannelRealization draw_channels(int users, int relays, RngStream& rng,
                                        ChannelLaw law = ChannelLaw::UniformRing) {
    if (users < 1 || relays < 1)
        throw ConfigError("draw_channels: need users >= 1 and relays >= 1");
    ChannelRealization ch;
    ch.users = users;
    ch.relays = relays;
    ch.source_relay.resize(static_cast<std::size_t>(users) * relays);
    ch.relay_dest.resize(static_cast<std::size_t>(users) * relays);
    for (int k = 0; k < users; ++k)
        for (int l = 0; l < relays; ++l)
            ch.sr(k, l) = draw_fading(rng, law);
    for (int k = 0; k < users; ++k)
        for (int l = 0; l < relays; ++l)
            ch.rd(k, l) = draw_fading(rng, law);
    return ch;
}

inline ChannelRealization draw_channels(int users, int relays, std::uint64_t seed,
                                        ChannelLaw law = ChannelLaw::UniformRing) {
    RngStream rng = RngStream::derived(seed, 0x4368616e6cu);  // channel stream
    return draw_channels(users, relays, rng, law);
}

inline EffectiveSignature effective_signature(double amplitude, const SpreadingCode& code,
                                              Complex fading) {
    EffectiveSignature sig;
    sig.v.resize(code.chips.size());
    for (std::size_t i = 0; i < code.chips.size(); ++i)
        sig.v[i] = amplitude * code.chips[i] * fading;
    return sig;
}

// Effective signatures of every (user, relay) link for one hop.
struct SignatureSet {
    int users = 0;
    int relays = 0;
    std::vector<EffectiveSignature> sigs;  // [k * relays + l]

    const EffectiveSignature& at(int k, int l) const {
        return sigs[static_cast<std::size_t>(k) * relays + l];
    }
};

inline SignatureSet build_signatures_sr(const std::vector<SpreadingCode>& codes,
                                        const ChannelRealization& ch, double amplitude = 1.0) {
    SignatureSet set;
    set.users = ch.users;
    set.relays = ch.relays;
    set.sigs.reserve(static_cast<std::size_t>(ch.users) * ch.relays);
    for (int k = 0; k < ch.users; ++k)
        for (int l = 0; l < ch.relays; ++l)
            set.sigs.push_back(effective_signature(amplitude, codes[k], ch.sr(k, l)));
    return set;
}

inline SignatureSet build_signatures_rd(const std::vector<SpreadingCode>& codes,
                                        const ChannelRealization& ch, double amplitude = 1.0) {
    SignatureSet set;
    set.users = ch.users;
    set.relays = ch.relays;
    set.sigs.reserve(static_cast<std::size_t>(ch.users) * ch.relays);
    for (int k = 0; k < ch.users; ++k)
        for (int l = 0; l < ch.relays; ++l)
            set.sigs.push_back(effective_signature(amplitude, codes[k], ch.rd(k, l)));
    return set;
}

// Adds sum_k sig_k * b_k to an existing chip vector (no noise).
inline void add_superposition(std::span<Complex> out,
                              std::span<const EffectiveSignature> sigs,
                              std::span<const double> symbols) {
    if (sigs.size() != symbols.size())
        throw ModelError("add_superposition: one symbol per signature required");
    for (std::size_t k = 0; k < sigs.size(); ++k) {
        const CVec& v = sigs[k].v;
        if (v.size() != out.size())
            throw ModelError("add_superposition: chip length mismatch");
        for (std::size_t i = 0; i < v.size(); ++i)
            out[i] += v[i] * symbols[k];
    }
}

// One received chip vector at a relay: y = sum_k h_{s_k r_l} b_k + n.
inline CVec transmit_source_phase(std::span<const EffectiveSignature> sigs,
                                  std::span<const double> symbols, NoiseModel& noise) {
    if (sigs.empty())
        throw ModelError("transmit_source_phase: no signatures");
    CVec y(sigs.front().v.size(), Complex{0.0, 0.0});
    add_superposition(y, sigs, symbols);
    noise.add_to(y);
    return y;
}

}  // namespace dstcsim
