#include <doctest.h>

#include <cmath>

#include "dstcsim/link_quality.hpp"

using namespace dstcsim;

namespace {

// Literal term-by-term evaluation of the pair SINR: numerator sums
// w^H rho w over both pair relays and all users, denominator sums the other
// relays' w^H rho w plus the pair's sigma^2 w^H w, once per user. Written
// directly from the formulas, independent of the library's aggregate path.
double oracle_pair_sinr(const SignatureSet& set, const FilterBank& bank, int m, int n,
                        double noise_var) {
    double num = 0.0;
    double den = 0.0;
    for (int k = 0; k < set.users; ++k) {
        const CVec& wm = bank.at(k, m).w;
        const CVec& wn = bank.at(k, n).w;
        const double rho_m = hdot(set.at(k, m).v, set.at(k, m).v).real();
        const double rho_n = hdot(set.at(k, n).v, set.at(k, n).v).real();
        num += (hdot(wm, wm) * rho_m).real();
        num += (hdot(wn, wn) * rho_n).real();
        for (int l = 0; l < set.relays; ++l) {
            if (l == m || l == n)
                continue;
            const CVec& wl = bank.at(k, l).w;
            const double rho_l = hdot(set.at(k, l).v, set.at(k, l).v).real();
            den += (hdot(wl, wl) * rho_l).real();
        }
        den += noise_var * hdot(wm, wm).real();
        den += noise_var * hdot(wn, wn).real();
    }
    return num / den;
}

double oracle_single_sinr(const SignatureSet& set, const FilterBank& bank, int p,
                          double noise_var) {
    double num = 0.0;
    double den = 0.0;
    for (int k = 0; k < set.users; ++k) {
        const CVec& wp = bank.at(k, p).w;
        const double rho_p = hdot(set.at(k, p).v, set.at(k, p).v).real();
        num += (hdot(wp, wp) * rho_p).real();
        for (int l = 0; l < set.relays; ++l) {
            if (l == p)
                continue;
            const CVec& wl = bank.at(k, l).w;
            const double rho_l = hdot(set.at(k, l).v, set.at(k, l).v).real();
            den += (hdot(wl, wl) * rho_l).real();
        }
        den += noise_var * hdot(wp, wp).real();
    }
    return num / den;
}

SignatureSet unit_signature_set(int users, int relays, int chips) {
    const auto codes = generate_codes(users, chips, 1);
    SignatureSet set;
    set.users = users;
    set.relays = relays;
    for (int k = 0; k < users; ++k)
        for (int l = 0; l < relays; ++l)
            set.sigs.push_back(effective_signature(1.0, codes[k], Complex{1.0, 0.0}));
    return set;
}

SignatureSet random_signature_set(int users, int relays, int chips, RngStream& rng) {
    const auto codes = generate_codes(users, chips, 1);
    SignatureSet set;
    set.users = users;
    set.relays = relays;
    for (int k = 0; k < users; ++k)
        for (int l = 0; l < relays; ++l)
            set.sigs.push_back(
                effective_signature(1.0, codes[k], draw_fading(rng, ChannelLaw::UniformRing)));
    return set;
}

}  // namespace

TEST_CASE("pair index enumerates unordered pairs lexicographically") {
    CHECK(pair_index(0, 1, 6) == 0);
    CHECK(pair_index(0, 5, 6) == 4);
    CHECK(pair_index(1, 2, 6) == 5);
    CHECK(pair_index(4, 5, 6) == 14);
    CHECK(pair_index(5, 4, 6) == 14);  // order-free
    CHECK(pair_count(6) == 15);
    CHECK(pair_count(4) == 6);
    CHECK(pair_count(2) == 1);
    CHECK_THROWS_AS(pair_index(2, 2, 6), ModelError);
}

TEST_CASE("unit two-relay single-user case gives the closed-form SINR") {
    const SignatureSet set = unit_signature_set(1, 2, 16);
    const FilterBank bank = build_filter_bank(set, FilterKind::Rake, 1.0);
    // numerator 2, denominator 2 at unit noise
    CHECK(pair_sinr(set, bank, 0, 1, 1.0) == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(pair_sinr(set, bank, 0, 1, 0.5) == doctest::Approx(2.0).epsilon(1e-12));
    CHECK_THROWS_AS(pair_sinr(set, bank, 1, 1, 1.0), ModelError);
}

TEST_CASE("single-link SINR degenerates to 1 over the noise variance") {
    const SignatureSet set = unit_signature_set(1, 1, 16);
    const FilterBank bank = build_filter_bank(set, FilterKind::Rake, 1.0);
    CHECK(single_sinr(set, bank, 0, 0.25) == doctest::Approx(4.0).epsilon(1e-12));
}

TEST_CASE("an interfering relay strictly lowers the single-link SINR") {
    RngStream rng(2);
    SignatureSet two = random_signature_set(1, 2, 16, rng);
    const FilterBank bank2 = build_filter_bank(two, FilterKind::Rake, 0.5);
    const double with_interference = single_sinr(two, bank2, 0, 0.5);

    SignatureSet lone = two;
    lone.relays = 1;
    lone.sigs = {two.at(0, 0)};
    const FilterBank bank1 = build_filter_bank(lone, FilterKind::Rake, 0.5);
    CHECK(single_sinr(lone, bank1, 0, 0.5) > with_interference);
}

TEST_CASE("pair SINR is symmetric in the pair") {
    RngStream rng(3);
    const SignatureSet set = random_signature_set(3, 6, 16, rng);
    const FilterBank bank = build_filter_bank(set, FilterKind::Mmse, 0.1);
    for (int m = 0; m < 6; ++m)
        for (int n = m + 1; n < 6; ++n)
            CHECK(pair_sinr(set, bank, m, n, 0.1) == pair_sinr(set, bank, n, m, 0.1));
}

TEST_CASE("library SINRs match the literal evaluation to 1e-12 relative") {
    RngStream rng(17);
    for (int instance = 0; instance < 10; ++instance) {
        const SignatureSet set = random_signature_set(3, 6, 16, rng);
        const double noise_var = rng.uniform(0.02, 1.0);
        for (FilterKind kind : {FilterKind::Rake, FilterKind::Mmse}) {
            const FilterBank bank = build_filter_bank(set, kind, noise_var);
            for (int m = 0; m < 6; ++m) {
                for (int n = m + 1; n < 6; ++n) {
                    const double lib = pair_sinr(set, bank, m, n, noise_var);
                    const double ref = oracle_pair_sinr(set, bank, m, n, noise_var);
                    CHECK(std::abs(lib - ref) <= 1e-12 * ref);
                }
            }
            for (int p = 0; p < 6; ++p) {
                const double lib = single_sinr(set, bank, p, noise_var);
                const double ref = oracle_single_sinr(set, bank, p, noise_var);
                CHECK(std::abs(lib - ref) <= 1e-12 * ref);
            }
        }
    }
}

TEST_CASE("table covers every pair and link of both hops and counts evaluations") {
    RngStream rng(23);
    const SignatureSet sr = random_signature_set(3, 6, 16, rng);
    const SignatureSet rd = random_signature_set(3, 6, 16, rng);
    const FilterBank sr_bank = build_filter_bank(sr, FilterKind::Rake, 0.1);
    const FilterBank rd_bank = build_filter_bank(rd, FilterKind::Rake, 0.1);
    const LinkQualityTable table = build_table(sr, sr_bank, rd, rd_bank, 0.1, 42);

    CHECK(table.epoch == 42);
    CHECK(table.pair_sr.size() == 15);
    CHECK(table.pair_rd.size() == 15);
    CHECK(table.pair_evaluations == 30);
    CHECK(table.single_evaluations == 12);
    for (double s : table.pair_sr) {
        CHECK(s >= 0.0);
        CHECK(std::isfinite(s));
    }
    for (int m = 0; m < 6; ++m)
        for (int n = m + 1; n < 6; ++n) {
            CHECK(table.pair(Phase::SourceRelay, m, n) ==
                  doctest::Approx(pair_sinr(sr, sr_bank, m, n, 0.1)).epsilon(1e-14));
            CHECK(table.pair(Phase::RelayDest, m, n) ==
                  doctest::Approx(pair_sinr(rd, rd_bank, m, n, 0.1)).epsilon(1e-14));
        }

    // smaller systems get the binomial pair counts
    RngStream rng4(5);
    const SignatureSet sr4 = random_signature_set(2, 4, 8, rng4);
    const SignatureSet rd4 = random_signature_set(2, 4, 8, rng4);
    const FilterBank b4s = build_filter_bank(sr4, FilterKind::Rake, 0.2);
    const FilterBank b4r = build_filter_bank(rd4, FilterKind::Rake, 0.2);
    CHECK(build_table(sr4, b4s, rd4, b4r, 0.2).pair_sr.size() == 6);

    RngStream rng2(6);
    const SignatureSet sr2 = random_signature_set(2, 2, 8, rng2);
    const SignatureSet rd2 = random_signature_set(2, 2, 8, rng2);
    const FilterBank b2s = build_filter_bank(sr2, FilterKind::Rake, 0.2);
    const FilterBank b2r = build_filter_bank(rd2, FilterKind::Rake, 0.2);
    CHECK(build_table(sr2, b2s, rd2, b2r, 0.2).pair_sr.size() == 1);
}

TEST_CASE("zeroing a non-pair relay never lowers a pair's SINR") {
    RngStream rng(29);
    for (int trial = 0; trial < 20; ++trial) {
        SignatureSet set = random_signature_set(3, 6, 16, rng);
        const FilterBank bank = build_filter_bank(set, FilterKind::Rake, 0.3);
        const double before = pair_sinr(set, bank, 0, 1, 0.3);

        SignatureSet muted = set;
        for (int k = 0; k < 3; ++k)
            for (Complex& c : muted.sigs[static_cast<std::size_t>(k) * 6 + 4].v)
                c = Complex{0.0, 0.0};
        const FilterBank muted_bank = build_filter_bank(muted, FilterKind::Rake, 0.3);
        const double after = pair_sinr(muted, muted_bank, 0, 1, 0.3);
        CHECK(after >= before - 1e-12);
    }
}
