#pragma once

#include <algorithm>
#include <optional>
#include <vector>

#include "dstcsim/common.hpp"
#include "dstcsim/link_quality.hpp"
#include "dstcsim/rng.hpp"

namespace dstcsim {

enum class SelectionStrategy { Exhaustive, Greedy, Random, None };

// Buffer feasibility snapshot handed to selection: a source-relay decision
// needs both pair buffers not full, a relay-destination decision both not
// empty.
struct BufferAvailability {
    std::vector<std::uint8_t> not_full;
    std::vector<std::uint8_t> not_empty;

    static BufferAvailability all_free(int relays) {
        BufferAvailability a;
        a.not_full.assign(relays, 1);
        a.not_empty.assign(relays, 1);
        return a;
    }

    bool feasible(Phase phase, int m, int n) const {
        if (phase == Phase::SourceRelay)
            return not_full[m] && not_full[n];
        return not_empty[m] && not_empty[n];
    }
};

// Outcome of one epoch's pair selection. An idle decision means every
// candidate was infeasible after full fallback.
struct PairDecision {
    bool idle = true;
    int p = -1;
    int q = -1;
    Phase phase = Phase::SourceRelay;
    double sinr = 0.0;
    int fallbacks_taken = 0;
    int pairs_examined = 0;
};

// Greedy search state: the current base relay and the single-link entries
// already dropped by base resets.
struct BaseRelayState {
    int base = -1;
    Phase base_phase = Phase::SourceRelay;
    std::vector<std::uint8_t> dropped_links;  // [phase * L + p]
};

namespace detail {

struct Candidate {
    double sinr;
    Phase phase;
    int m;
    int n;
};

// Descending SINR; ties resolve to the lexicographically lowest pair with the
// source-relay phase first, which keeps every argmax deterministic.
inline bool better(const Candidate& a, const Candidate& b) {
    if (a.sinr != b.sinr)
        return a.sinr > b.sinr;
    if (a.m != b.m)
        return a.m < b.m;
    if (a.n != b.n)
        return a.n < b.n;
    return a.phase == Phase::SourceRelay && b.phase == Phase::RelayDest;
}

}  // namespace detail

// Exhaustive search over all pairs and both phases, dropping infeasible
// maxima one by one until a feasible entry remains. The table is frozen for
// the whole fallback walk.
inline PairDecision select_exhaustive(const LinkQualityTable& table,
                                      const BufferAvailability& avail) {
    const int relays = table.relays;
    std::vector<detail::Candidate> entries;
    entries.reserve(2 * pair_count(relays));
    for (int m = 0; m < relays; ++m) {
        for (int n = m + 1; n < relays; ++n) {
            entries.push_back({table.pair(Phase::SourceRelay, m, n), Phase::SourceRelay, m, n});
            entries.push_back({table.pair(Phase::RelayDest, m, n), Phase::RelayDest, m, n});
        }
    }
    std::sort(entries.begin(), entries.end(), detail::better);

    PairDecision decision;
    decision.pairs_examined = pair_count(relays);
    for (const detail::Candidate& c : entries) {
        if (avail.feasible(c.phase, c.m, c.n)) {
            decision.idle = false;
            decision.p = c.m;
            decision.q = c.n;
            decision.phase = c.phase;
            decision.sinr = c.sinr;
            return decision;
        }
        ++decision.fallbacks_taken;
    }
    return decision;  // nothing feasible this epoch
}

// Greedy stage-wise search: pick the best single link, examine the pairs
// containing its relay in SINR order, and reset the base relay to the next
// best single link when a stage exhausts. Pairs examined at earlier stages
// are not re-evaluated, so at most L(L-1)/2 pairs are touched per epoch.
inline PairDecision select_greedy(const LinkQualityTable& table, const BufferAvailability& avail,
                                  BaseRelayState* state_out = nullptr) {
    const int relays = table.relays;
    BaseRelayState state;
    state.dropped_links.assign(static_cast<std::size_t>(2) * relays, 0);
    std::vector<std::uint8_t> pair_seen(pair_count(relays), 0);

    PairDecision decision;
    for (int stage = 0; stage < 2 * relays; ++stage) {
        // Base relay: argmax over the remaining single-link SINRs, both hops.
        int base = -1;
        Phase base_phase = Phase::SourceRelay;
        double base_sinr = -1.0;
        for (int p = 0; p < relays; ++p) {
            for (Phase phase : {Phase::SourceRelay, Phase::RelayDest}) {
                const std::size_t slot =
                    static_cast<std::size_t>(phase == Phase::RelayDest) * relays + p;
                if (state.dropped_links[slot])
                    continue;
                const double s = table.single(phase, p);
                if (s > base_sinr) {
                    base_sinr = s;
                    base = p;
                    base_phase = phase;
                }
            }
        }
        if (base < 0)
            break;  // every single link dropped
        state.base = base;
        state.base_phase = base_phase;

        // Candidate pairs of this stage: pairs containing the base relay that
        // no earlier stage has examined.
        std::vector<detail::Candidate> entries;
        for (int p = 0; p < relays; ++p) {
            if (p == base)
                continue;
            const int m = std::min(p, base);
            const int n = std::max(p, base);
            const int idx = pair_index(m, n, relays);
            if (pair_seen[idx])
                continue;
            pair_seen[idx] = 1;
            ++decision.pairs_examined;
            entries.push_back({table.pair(Phase::SourceRelay, m, n), Phase::SourceRelay, m, n});
            entries.push_back({table.pair(Phase::RelayDest, m, n), Phase::RelayDest, m, n});
        }
        std::sort(entries.begin(), entries.end(), detail::better);

        for (const detail::Candidate& c : entries) {
            if (avail.feasible(c.phase, c.m, c.n)) {
                decision.idle = false;
                decision.p = c.m;
                decision.q = c.n;
                decision.phase = c.phase;
                decision.sinr = c.sinr;
                if (state_out)
                    *state_out = state;
                return decision;
            }
            ++decision.fallbacks_taken;
        }

        // Stage exhausted: drop this base link and reseed from the rest.
        state.dropped_links[static_cast<std::size_t>(base_phase == Phase::RelayDest) * relays +
                            base] = 1;
    }
    if (state_out)
        *state_out = state;
    return decision;
}

// Baseline: uniformly random feasible pair, phase forced by the buffer state
// (a fair coin decides when both phases are feasible).
inline PairDecision select_random(int relays, const BufferAvailability& avail, RngStream& rng) {
    std::vector<std::pair<int, int>> feasible;
    for (int m = 0; m < relays; ++m)
        for (int n = m + 1; n < relays; ++n)
            if (avail.feasible(Phase::SourceRelay, m, n) || avail.feasible(Phase::RelayDest, m, n))
                feasible.emplace_back(m, n);

    PairDecision decision;
    if (feasible.empty())
        return decision;
    const auto [m, n] = feasible[rng.uniform_index(feasible.size())];
    const bool can_sr = avail.feasible(Phase::SourceRelay, m, n);
    const bool can_rd = avail.feasible(Phase::RelayDest, m, n);
    decision.idle = false;
    decision.p = m;
    decision.q = n;
    if (can_sr && can_rd)
        decision.phase = (rng.uniform() < 0.5) ? Phase::SourceRelay : Phase::RelayDest;
    else
        decision.phase = can_sr ? Phase::SourceRelay : Phase::RelayDest;
    return decision;
}

// Baseline without selection: consecutive relays form static pairs that the
// harness rotates through round-robin.
inline std::vector<std::pair<int, int>> no_selection_schedule(int relays) {
    if (relays < 2 || relays % 2 != 0)
        throw ConfigError("no_selection_schedule: relay count must be even and >= 2");
    std::vector<std::pair<int, int>> pairs;
    pairs.reserve(relays / 2);
    for (int m = 0; m + 1 < relays; m += 2)
        pairs.emplace_back(m, m + 1);
    return pairs;
}

}  // namespace dstcsim
