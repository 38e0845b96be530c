#pragma once

#include <array>
#include <utility>

#include "dstcsim/common.hpp"
#include "dstcsim/signal_model.hpp"

namespace dstcsim {

// 2x2 Alamouti symbol matrix. Rows are the two relays, columns the two slots:
//   [ b_m  -conj(b_n) ]
//   [ b_n   conj(b_m) ]
struct AlamoutiBlock {
    std::array<std::array<Complex, 2>, 2> m;

    Complex at(int relay_row, int slot_col) const { return m[relay_row][slot_col]; }
};

inline AlamoutiBlock alamouti_encode(Complex b_m, Complex b_n) {
    AlamoutiBlock block;
    block.m[0][0] = b_m;
    block.m[1][0] = b_n;
    block.m[0][1] = -std::conj(b_n);
    block.m[1][1] = std::conj(b_m);
    return block;
}

// 2N x 2 stacked channel: top rows [h_m h_n], bottom rows [conj(h_n) -conj(h_m)].
// Columns stored explicitly; H^H H = (|h_m|^2 + |h_n|^2) I.
struct StackedChannel {
    CVec col_m;  // length 2N
    CVec col_n;

    int stacked_length() const { return static_cast<int>(col_m.size()); }
};

inline StackedChannel build_stacked_channel(const EffectiveSignature& h_m,
                                            const EffectiveSignature& h_n) {
    const std::size_t n = h_m.v.size();
    if (h_n.v.size() != n)
        throw ModelError("build_stacked_channel: signature length mismatch");
    StackedChannel st;
    st.col_m.resize(2 * n);
    st.col_n.resize(2 * n);
    for (std::size_t i = 0; i < n; ++i) {
        st.col_m[i] = h_m.v[i];
        st.col_n[i] = h_n.v[i];
        st.col_m[n + i] = std::conj(h_n.v[i]);
        st.col_n[n + i] = -std::conj(h_m.v[i]);
    }
    return st;
}

// Adds one user's Alamouti contribution to the two slot observations:
//   y1 += h_m b_m + h_n b_n
//   y2 += h_n conj(b_m) - h_m conj(b_n)
inline void add_dstc_signal(std::span<Complex> y1, std::span<Complex> y2,
                            const EffectiveSignature& h_m, const EffectiveSignature& h_n,
                            Complex b_m, Complex b_n) {
    const std::size_t n = h_m.v.size();
    if (h_n.v.size() != n || y1.size() != n || y2.size() != n)
        throw ModelError("add_dstc_signal: dimension mismatch");
    const Complex bmc = std::conj(b_m);
    const Complex bnc = std::conj(b_n);
    for (std::size_t i = 0; i < n; ++i) {
        y1[i] += h_m.v[i] * b_m + h_n.v[i] * b_n;
        y2[i] += h_n.v[i] * bmc - h_m.v[i] * bnc;
    }
}

// Single-user DSTC epoch: the encoded block through the pair channel plus noise.
inline std::pair<CVec, CVec> transmit_dstc_phase(const EffectiveSignature& h_m,
                                                 const EffectiveSignature& h_n,
                                                 const AlamoutiBlock& block, NoiseModel& noise) {
    const std::size_t n = h_m.v.size();
    CVec y1(n, Complex{0.0, 0.0});
    CVec y2(n, Complex{0.0, 0.0});
    add_dstc_signal(y1, y2, h_m, h_n, block.at(0, 0), block.at(1, 0));
    noise.add_to(y1);
    noise.add_to(y2);
    return {std::move(y1), std::move(y2)};
}

}  // namespace dstcsim
