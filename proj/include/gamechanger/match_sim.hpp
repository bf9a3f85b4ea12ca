#pragma once

// Synthetic telemetry generator: plays the game model forward one round per
// minute and renders the trajectory as a match record with plausible kill
// feeds, so the calibration pipeline can be validated against known ground
// truth end to end.

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "gamechanger/calibration.hpp"
#include "gamechanger/moba.hpp"
#include "gamechanger/rng.hpp"

namespace gamechanger::calib {

struct SimOptions {
    // Bonus credited to the capturing team's telemetry wealth at each
    // objective kill. The model trajectory itself is unchanged, so stripping
    // this amount recovers the model-pure series exactly.
    double gc_reward = 0.0;
    // Chance per farm minute of a kill burst that is not a teamfight (a solo
    // pick or an even trade); the labeler must ignore these.
    double noise_rate = 0.15;
};

namespace detail {

enum class RoundEvent { kFarm, kEndA, kEndB, kContA, kContB };

// Mirrors the branch layout of moba::transition for the same (r, q) guards,
// so a sampled branch index maps directly onto what happened in the round.
inline std::vector<RoundEvent> branch_events(double r, double q) {
    std::vector<RoundEvent> ev;
    if (r < 1.0) ev.push_back(RoundEvent::kFarm);
    if (r > 0.0) {
        if (q > 0.0) {
            ev.push_back(RoundEvent::kEndA);
            ev.push_back(RoundEvent::kEndB);
        }
        if (q < 1.0) {
            ev.push_back(RoundEvent::kContA);
            ev.push_back(RoundEvent::kContB);
        }
    }
    return ev;
}

// Kill burst for a teamfight won by `winner`: 2-3 kills for the winner and
// strictly fewer for the loser, gaps of 3-4 seconds, all inside the minute
// and at least 30 seconds clear of neighboring minutes' bursts.
inline void emit_teamfight_kills(std::vector<KillEvent>& kills, CounterRng& rng,
                                 double minute_base, Team winner) {
    const std::uint64_t nw = 2 + rng.below(2);
    const std::uint64_t nl = rng.below(nw);
    std::vector<Team> killers(nw, winner);
    killers.insert(killers.end(), nl, other(winner));
    for (std::size_t i = killers.size(); i > 1; --i)
        std::swap(killers[i - 1], killers[rng.below(i)]);
    double t = minute_base + 10.0 + static_cast<double>(rng.below(3));
    for (const Team k : killers) {
        kills.push_back({t, k, other(k)});
        t += 3.0 + static_cast<double>(rng.below(2));
    }
}

// Non-teamfight noise: a solo kill or an even two-kill trade, both of which
// the teamfight extractor must drop.
inline void emit_noise_kills(std::vector<KillEvent>& kills, CounterRng& rng,
                             double minute_base) {
    const Team first = rng.below(2) == 0 ? Team::A : Team::B;
    const double t0 = minute_base + 12.0 + static_cast<double>(rng.below(3));
    kills.push_back({t0, first, other(first)});
    if (rng.below(2) == 0) {
        const Team second = other(first);
        kills.push_back({t0 + 5.0 + static_cast<double>(rng.below(3)), second, other(second)});
    }
}

} // namespace detail

// Simulates one match from the model's exact transition law. Deterministic
// per seed: one RNG stream drives both the chain and the kill-feed dressing;
// match_id is a passthrough label.
inline MatchRecord simulate_match_record(const moba::MobaModel& m, std::uint64_t seed,
                                         std::string match_id, const SimOptions& opt = {}) {
    CounterRng rng(seed);
    moba::MobaState s{0, m.w0_A, m.w0_B, std::max<std::int64_t>(0, m.gc_spawn_round - 1)};

    MatchRecord rec;
    rec.match_id = std::move(match_id);
    rec.has_gc_kills = true;
    double bonus_a = 0.0, bonus_b = 0.0;

    for (;;) {
        const std::int64_t u = s.t + 1;
        const double minute_base = 60.0 * static_cast<double>(u - 1);
        const auto branches = moba::transition(m, s);
        const auto events = detail::branch_events(m.r_at(u), m.q_at(u));
        if (events.size() != branches.size())
            throw OracleError("match sim: branch layout mismatch");

        double x = rng.next_double();
        std::size_t pick = branches.size() - 1;
        for (std::size_t i = 0; i < branches.size(); ++i) {
            if (x < branches[i].prob) {
                pick = i;
                break;
            }
            x -= branches[i].prob;
        }
        const auto ev = events[pick];
        const auto& br = branches[pick];

        using detail::RoundEvent;
        if (ev == RoundEvent::kFarm) {
            if (rng.bernoulli(opt.noise_rate)) detail::emit_noise_kills(rec.kills, rng, minute_base);
        } else {
            const Team winner =
                (ev == RoundEvent::kEndA || ev == RoundEvent::kContA) ? Team::A : Team::B;
            detail::emit_teamfight_kills(rec.kills, rng, minute_base, winner);
            const bool captured = (ev == RoundEvent::kContA || ev == RoundEvent::kContB) &&
                                  moba::detail::gc_available(m, s.gc_clock, u);
            if (captured) {
                rec.gc_kills.push_back({minute_base + 30.0, winner});
                (winner == Team::A ? bonus_a : bonus_b) += opt.gc_reward;
            }
        }

        rec.wealth_A.push_back(br.next.w_a + bonus_a);
        rec.wealth_B.push_back(br.next.w_b + bonus_b);

        if (br.outcome != moba::Outcome::kContinue) {
            rec.duration = u;
            rec.winner = br.outcome == moba::Outcome::kAWins ? Team::A : Team::B;
            break;
        }
        s = br.next;
    }
    rec.validate();
    return rec;
}

} // namespace gamechanger::calib
