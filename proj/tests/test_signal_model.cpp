#include <doctest.h>

#include <cmath>

#include "dstcsim/signal_model.hpp"

using namespace dstcsim;

TEST_CASE("spreading codes have the forced chip magnitude and unit norm") {
    const auto codes = generate_codes(1, 4, 99);
    REQUIRE(codes.size() == 1);
    REQUIRE(codes[0].length() == 4);
    for (double c : codes[0].chips)
        CHECK(std::abs(std::abs(c) - 0.5) < 1e-15);

    const auto many = generate_codes(3, 16, 7);
    CHECK(many.size() == 3);
    for (const SpreadingCode& code : many) {
        double nsq = 0.0;
        for (double c : code.chips)
            nsq += c * c;
        CHECK(std::abs(nsq - 1.0) < 1e-12);
    }
}

TEST_CASE("code generation is deterministic in the seed") {
    const auto a = generate_codes(4, 16, 1234);
    const auto b = generate_codes(4, 16, 1234);
    const auto c = generate_codes(4, 16, 1235);
    for (int k = 0; k < 4; ++k)
        CHECK(a[k].chips == b[k].chips);
    bool any_diff = false;
    for (int k = 0; k < 4; ++k)
        any_diff |= a[k].chips != c[k].chips;
    CHECK(any_diff);
}

TEST_CASE("generate_codes rejects bad dimensions") {
    CHECK_THROWS_AS(generate_codes(0, 16, 1), ConfigError);
    CHECK_THROWS_AS(generate_codes(3, 0, 1), ConfigError);
}

TEST_CASE("channel draws are normalized to unit mean power") {
    RngStream rng(5);
    double acc = 0.0;
    const int draws = 100000;
    for (int i = 0; i < draws; ++i)
        acc += std::norm(draw_fading(rng, ChannelLaw::UniformRing));
    CHECK(acc / draws == doctest::Approx(1.0).epsilon(0.02));

    RngStream rng2(6);
    acc = 0.0;
    for (int i = 0; i < draws; ++i)
        acc += std::norm(draw_fading(rng2, ChannelLaw::ComplexGaussian));
    CHECK(acc / draws == doctest::Approx(1.0).epsilon(0.02));
}

TEST_CASE("channel realization has one coefficient per user, relay and hop") {
    const ChannelRealization ch = draw_channels(3, 6, std::uint64_t{42});
    CHECK(ch.source_relay.size() == 18);
    CHECK(ch.relay_dest.size() == 18);

    const ChannelRealization again = draw_channels(3, 6, std::uint64_t{42});
    CHECK(ch.source_relay == again.source_relay);
    CHECK(ch.relay_dest == again.relay_dest);
}

TEST_CASE("effective signature is the scaled code") {
    SpreadingCode code;
    code.chips = {1.0, 0.0, 0.0, 0.0};

    const EffectiveSignature id = effective_signature(1.0, code, Complex{1.0, 0.0});
    for (int i = 0; i < 4; ++i)
        CHECK(id.v[i] == Complex{code.chips[i], 0.0});

    const EffectiveSignature scaled = effective_signature(2.0, code, Complex{0.0, 1.0});
    for (int i = 0; i < 4; ++i)
        CHECK(scaled.v[i] == Complex{0.0, 2.0 * code.chips[i]});

    const auto unit = generate_codes(1, 16, 3)[0];
    const EffectiveSignature sig = effective_signature(2.0, unit, Complex{0.6, 0.8});
    CHECK(std::sqrt(sig.power()) == doctest::Approx(2.0 * 1.0).epsilon(1e-12));
}

TEST_CASE("symbol blocks carry exact BPSK entries with their indices") {
    RngStream rng(31);
    const SymbolBlock block = draw_symbol_block(rng, 2, 7, 500);
    CHECK(block.user == 2);
    CHECK(block.slot == 7);
    REQUIRE(block.symbols.size() == 500);
    bool saw_plus = false;
    bool saw_minus = false;
    for (std::int8_t s : block.symbols) {
        CHECK((s == 1 || s == -1));
        saw_plus |= s == 1;
        saw_minus |= s == -1;
    }
    CHECK(saw_plus);
    CHECK(saw_minus);
}

TEST_CASE("source-phase superposition is linear in the symbols") {
    const auto codes = generate_codes(2, 8, 11);
    RngStream rng(17);
    const Complex h1 = draw_fading(rng, ChannelLaw::UniformRing);
    const Complex h2 = draw_fading(rng, ChannelLaw::UniformRing);
    const std::vector<EffectiveSignature> sigs = {effective_signature(1.0, codes[0], h1),
                                                  effective_signature(1.0, codes[1], h2)};

    CVec single(8, Complex{0.0, 0.0});
    const std::vector<double> b1 = {1.0, 0.0};
    add_superposition(single, sigs, b1);
    for (int i = 0; i < 8; ++i)
        CHECK(std::abs(single[i] - sigs[0].v[i]) < 1e-15);

    CVec sum(8, Complex{0.0, 0.0});
    const std::vector<double> b2 = {1.0, -1.0};
    add_superposition(sum, sigs, b2);
    for (int i = 0; i < 8; ++i)
        CHECK(std::abs(sum[i] - (sigs[0].v[i] - sigs[1].v[i])) < 1e-14);

    // scaling the symbols scales the noiseless signal
    CVec scaled(8, Complex{0.0, 0.0});
    const std::vector<double> b3 = {3.0, -3.0};
    add_superposition(scaled, sigs, b3);
    for (int i = 0; i < 8; ++i)
        CHECK(std::abs(scaled[i] - 3.0 * sum[i]) < 1e-14);
}

TEST_CASE("transmitted noise power matches the configured variance") {
    const auto codes = generate_codes(1, 16, 21);
    RngStream rng(23);
    NoiseModel noise(1.0, rng);
    const std::vector<EffectiveSignature> sigs = {
        effective_signature(1.0, codes[0], Complex{0.3, -0.4})};
    const std::vector<double> b = {1.0};

    CVec clean(16, Complex{0.0, 0.0});
    add_superposition(clean, sigs, b);

    double acc = 0.0;
    const int trials = 6250;  // 1e5 noise samples total
    for (int t = 0; t < trials; ++t) {
        const CVec y = transmit_source_phase(sigs, b, noise);
        for (int i = 0; i < 16; ++i)
            acc += std::norm(y[i] - clean[i]);
    }
    CHECK(acc / (16.0 * trials) == doctest::Approx(1.0).epsilon(0.03));
}

TEST_CASE("noise model rejects non-positive variance and is seed-deterministic") {
    RngStream rng(1);
    CHECK_THROWS_AS(NoiseModel(0.0, rng), ConfigError);
    CHECK_THROWS_AS(NoiseModel(-1.0, rng), ConfigError);

    RngStream a(77);
    RngStream b(77);
    NoiseModel na(0.5, a);
    NoiseModel nb(0.5, b);
    for (int i = 0; i < 100; ++i)
        CHECK(na.sample() == nb.sample());
}

TEST_CASE("transmit rejects mismatched dimensions") {
    const auto codes = generate_codes(2, 8, 31);
    RngStream rng(3);
    NoiseModel noise(1.0, rng);
    const std::vector<EffectiveSignature> sigs = {effective_signature(1.0, codes[0], {1.0, 0.0}),
                                                  effective_signature(1.0, codes[1], {1.0, 0.0})};
    const std::vector<double> one_symbol = {1.0};
    CHECK_THROWS_AS(transmit_source_phase(sigs, one_symbol, noise), ModelError);
}
