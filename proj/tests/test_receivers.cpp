#include <doctest.h>

#include <cmath>

#include "dstcsim/config.hpp"
#include "dstcsim/dstc.hpp"
#include "dstcsim/receivers.hpp"

using namespace dstcsim;

namespace {

EffectiveSignature unit_vector(int n, int index) {
    EffectiveSignature sig;
    sig.v.assign(n, Complex{0.0, 0.0});
    sig.v[index] = Complex{1.0, 0.0};
    return sig;
}

EffectiveSignature random_signature(const SpreadingCode& code, RngStream& rng) {
    return effective_signature(1.0, code, draw_fading(rng, ChannelLaw::UniformRing));
}

// Exhaustive minimum-distance search over the four BPSK pairs; the oracle the
// combining detector must match instance by instance.
std::pair<double, double> brute_force_pair_detect(const EffectiveSignature& h_m,
                                                  const EffectiveSignature& h_n,
                                                  const CVec& y1, const CVec& y2) {
    const StackedChannel st = build_stacked_channel(h_m, h_n);
    const std::size_t n = h_m.v.size();
    CVec stacked(2 * n);
    for (std::size_t i = 0; i < n; ++i) {
        stacked[i] = y1[i];
        stacked[n + i] = std::conj(y2[i]);
    }
    double best = 1e300;
    std::pair<double, double> pick{1.0, 1.0};
    for (double bm : {1.0, -1.0}) {
        for (double bn : {1.0, -1.0}) {
            double dist = 0.0;
            for (std::size_t i = 0; i < 2 * n; ++i)
                dist += std::norm(stacked[i] - st.col_m[i] * bm - st.col_n[i] * bn);
            if (dist < best) {
                best = dist;
                pick = {bm, bn};
            }
        }
    }
    return pick;
}

}  // namespace

TEST_CASE("rake filter copies the signature") {
    RngStream rng(1);
    const auto codes = generate_codes(1, 16, 2);
    const EffectiveSignature sig = random_signature(codes[0], rng);
    const ReceiveFilter f = rake_filter(sig);
    CHECK(f.w == sig.v);

    EffectiveSignature zero;
    zero.v.assign(16, Complex{0.0, 0.0});
    CHECK(norm_sq(rake_filter(zero).w) == 0.0);
    CHECK(norm_sq(f.w) == doctest::Approx(sig.power()));
}

TEST_CASE("single-user MMSE filter matches the rank-one closed form") {
    const auto codes = generate_codes(1, 16, 5);
    const EffectiveSignature h = effective_signature(1.0, codes[0], Complex{1.0, 0.0});
    const std::vector<EffectiveSignature> sigs = {h};

    // (h h^H + I)^-1 h = h / (1 + |h|^2) = h / 2 for unit-norm h
    const ReceiveFilter f = mmse_filter(sigs, 0, 1.0);
    for (int i = 0; i < 16; ++i)
        CHECK(std::abs(f.w[i] - h.v[i] / 2.0) < 1e-12);

    // high-noise limit: w -> h / sigma^2, gap of order |h| / sigma^4
    const double big = 1e6;
    const ReceiveFilter g = mmse_filter(sigs, 0, big);
    for (int i = 0; i < 16; ++i)
        CHECK(std::abs(g.w[i] - h.v[i] / big) < 2.0 * std::abs(h.v[i]) / (big * big) + 1e-18);
}

TEST_CASE("MMSE filter solves its normal equations to tight residual") {
    RngStream rng(9);
    const auto codes = generate_codes(3, 16, 9);
    for (int trial = 0; trial < 20; ++trial) {
        std::vector<EffectiveSignature> sigs;
        for (int k = 0; k < 3; ++k)
            sigs.push_back(random_signature(codes[k], rng));
        const double noise_var = 0.1;
        const ReceiveFilter f = mmse_filter(sigs, 1, noise_var);

        CMatrix cov(16, 16);
        for (const EffectiveSignature& s : sigs)
            for (int i = 0; i < 16; ++i)
                for (int j = 0; j < 16; ++j)
                    cov.at(i, j) += s.v[i] * std::conj(s.v[j]);
        for (int i = 0; i < 16; ++i)
            cov.at(i, i) += noise_var;
        CHECK(residual_norm(cov, f.w, sigs[1].v) <= 1e-10);
    }
}

TEST_CASE("MMSE filter rejects non-positive noise variance") {
    const auto codes = generate_codes(1, 8, 3);
    const std::vector<EffectiveSignature> sigs = {
        effective_signature(1.0, codes[0], Complex{1.0, 0.0})};
    CHECK_THROWS_AS(mmse_filter(sigs, 0, 0.0), ModelError);
}

TEST_CASE("slicer decides by the sign of the real part, ties to +1") {
    CHECK(slicer(Complex{0.7, -0.2}) == 1.0);
    CHECK(slicer(Complex{-0.1, 0.0}) == -1.0);
    CHECK(slicer(Complex{0.0, -3.0}) == 1.0);
    // idempotence
    for (Complex z : {Complex{0.4, 1.0}, Complex{-2.0, 0.3}, Complex{0.0, 0.0}})
        CHECK(slicer(Complex{slicer(z), 0.0}) == slicer(z));
}

TEST_CASE("linear detection recovers the noiseless single-user symbol") {
    RngStream rng(13);
    const auto codes = generate_codes(1, 16, 13);
    const EffectiveSignature h = random_signature(codes[0], rng);
    const ReceiveFilter w = rake_filter(h);

    CHECK(linear_detect(w, h.v) == 1.0);
    CVec neg(h.v.size());
    for (std::size_t i = 0; i < h.v.size(); ++i)
        neg[i] = -h.v[i];
    CHECK(linear_detect(w, neg) == -1.0);

    CVec short_y(4);
    CHECK_THROWS_AS(linear_detect(w, short_y), ModelError);
}

TEST_CASE("MMSE beats the matched filter in a loaded system") {
    const int users = 3;
    const int chips = 16;
    const double noise_var = snr_db_to_noise_var(15.0);
    const auto codes = generate_codes(users, chips, 77);
    RngStream rng(78);
    NoiseModel noise(noise_var, rng);

    long rake_errors = 0;
    long mmse_errors = 0;
    const int epochs = 250;
    const int symbols_per_epoch = 400;  // 1e5 detected symbols in total
    for (int e = 0; e < epochs; ++e) {
        std::vector<EffectiveSignature> sigs;
        for (int k = 0; k < users; ++k)
            sigs.push_back(random_signature(codes[k], rng));
        const ReceiveFilter rake = rake_filter(sigs[0]);
        const ReceiveFilter mmse = mmse_filter(sigs, 0, noise_var);
        std::vector<double> b(users);
        for (int j = 0; j < symbols_per_epoch; ++j) {
            for (int k = 0; k < users; ++k)
                b[k] = rng.bpsk_symbol();
            const CVec y = transmit_source_phase(sigs, b, noise);
            rake_errors += linear_detect(rake, y) != b[0];
            mmse_errors += linear_detect(mmse, y) != b[0];
        }
    }
    CHECK(mmse_errors < rake_errors);
}

TEST_CASE("MMSE and RAKE decisions coincide at extreme noise") {
    const auto codes = generate_codes(3, 16, 31);
    RngStream rng(32);
    const double noise_var = 1e6;
    for (int trial = 0; trial < 50; ++trial) {
        std::vector<EffectiveSignature> sigs;
        for (int k = 0; k < 3; ++k)
            sigs.push_back(random_signature(codes[k], rng));
        CVec y(16);
        for (Complex& c : y)
            c = rng.complex_gaussian(1.0);
        for (int k = 0; k < 3; ++k) {
            const ReceiveFilter rake = rake_filter(sigs[k]);
            const ReceiveFilter mmse = mmse_filter(sigs, k, noise_var);
            CHECK(linear_detect(rake, y) == linear_detect(mmse, y));
        }
    }
}

TEST_CASE("combining on the classic unit-vector example") {
    const EffectiveSignature e1 = unit_vector(4, 0);
    // b_m = +1, b_n = -1 through h_m = h_n = e1: y1 = 0, y2 = 2 e1
    CVec y1(4, Complex{0.0, 0.0});
    CVec y2(4, Complex{0.0, 0.0});
    y2[0] = Complex{2.0, 0.0};
    const auto [soft_m, soft_n] = alamouti_combine(e1, e1, y1, y2);
    CHECK(soft_m.real() == doctest::Approx(2.0));
    CHECK(soft_n.real() == doctest::Approx(-2.0));
    const auto [bm, bn] = ml_alamouti_detect(e1, e1, y1, y2);
    CHECK(bm == 1.0);
    CHECK(bn == -1.0);
}

TEST_CASE("noiseless combining gain is the summed channel power") {
    RngStream rng(41);
    const auto codes = generate_codes(2, 16, 41);
    for (int trial = 0; trial < 20; ++trial) {
        const EffectiveSignature h_m = random_signature(codes[0], rng);
        const EffectiveSignature h_n = random_signature(codes[1], rng);
        const double bm = rng.bpsk_symbol();
        const double bn = rng.bpsk_symbol();
        CVec y1(16, Complex{0.0, 0.0});
        CVec y2(16, Complex{0.0, 0.0});
        add_dstc_signal(y1, y2, h_m, h_n, bm, bn);
        const auto [soft_m, soft_n] = alamouti_combine(h_m, h_n, y1, y2);
        const double gain = h_m.power() + h_n.power();
        CHECK(soft_m.real() == doctest::Approx(gain * bm).epsilon(1e-10));
        CHECK(std::abs(soft_m.imag()) < 1e-10);
        CHECK(soft_n.real() == doctest::Approx(gain * bn).epsilon(1e-10));
    }
}

TEST_CASE("combining equals the exhaustive minimum-distance decision") {
    RngStream rng(55);
    const auto codes = generate_codes(2, 16, 55);
    NoiseModel noise(0.5, rng);
    long errors = 0;
    for (int epoch = 0; epoch < 1000; ++epoch) {
        const EffectiveSignature h_m = random_signature(codes[0], rng);
        const EffectiveSignature h_n = random_signature(codes[1], rng);
        const double bm = rng.bpsk_symbol();
        const double bn = rng.bpsk_symbol();
        CVec y1(16, Complex{0.0, 0.0});
        CVec y2(16, Complex{0.0, 0.0});
        add_dstc_signal(y1, y2, h_m, h_n, bm, bn);

        // exact agreement with the brute force on the noiseless epoch
        auto [cm, cn] = ml_alamouti_detect(h_m, h_n, y1, y2);
        errors += cm != bm;
        errors += cn != bn;

        // and on a noisy copy of the same epoch
        noise.add_to(y1);
        noise.add_to(y2);
        const auto combined = ml_alamouti_detect(h_m, h_n, y1, y2);
        const auto brute = brute_force_pair_detect(h_m, h_n, y1, y2);
        CHECK(combined == brute);
    }
    CHECK(errors == 0);
}
