#pragma once

#include <cmath>
#include <cstdint>
#include <string>
#include <vector>

#include "gamechanger/errors.hpp"
#include "gamechanger/quidditch.hpp"
#include "gamechanger/rng.hpp"

namespace gamechanger::quidditch {

// Exact-DP and Monte Carlo engines, independent of the closed forms: the DP
// solves the belief fixed point by iterative sweeps on a truncated window and
// accumulates visits by forward mass flow; the simulator replays the round
// dynamics directly.

struct DpSolution {
    std::int64_t window;  // states cover delta in [-window, window]
    std::vector<double> belief_table;
    std::vector<double> visit_table;
    double expected_surprise;
    double residual; // final sweep max-delta
    std::int64_t sweeps;

    double belief_at(std::int64_t delta) const {
        if (delta > window) return 1.0;
        if (delta < -window) return 0.0;
        return belief_table[static_cast<std::size_t>(delta + window)];
    }
    double visit_at(std::int64_t delta) const {
        if (delta > window || delta < -window) return 0.0;
        return visit_table[static_cast<std::size_t>(delta + window)];
    }
};

struct EpisodeTrace {
    std::vector<std::int64_t> states; // score difference at each round start
    std::vector<double> beliefs;      // belief curve incl. the absorbing 0/1
    double surprise_total;
    bool a_wins;
};

struct McEstimate {
    double mean;
    double std_error; // 0 when episodes == 1 (undefined-as-zero)
    std::int64_t episodes;
};

namespace detail {

inline std::int64_t default_window(const QuidditchParams& params, std::int64_t x) {
    return x + static_cast<std::int64_t>(std::ceil(40.0 / params.q));
}

// P[team A wins | catch at difference delta]: the catcher's x points decide
// inside |delta| <= x (ties to the catcher), outside the lead stands.
inline double catch_outcome(double p, std::int64_t x, std::int64_t delta) {
    if (delta > x) return 1.0;
    if (delta < -x) return 0.0;
    return p;
}

} // namespace detail

inline DpSolution dp_solve(const QuidditchParams& params, std::int64_t x, std::int64_t window = -1) {
    if (x < 0) throw ValidationError("dp_solve: snitch score x must be >= 0");
    if (window < 0) window = detail::default_window(params, x);
    if (window < x + 1) throw ValidationError("dp_solve: window must be at least x + 1");

    const double p = params.p, q = params.q;
    const std::size_t n = static_cast<std::size_t>(2 * window + 1);
    const auto idx = [window](std::int64_t d) { return static_cast<std::size_t>(d + window); };

    DpSolution sol;
    sol.window = window;
    sol.belief_table.assign(n, 0.0);
    for (std::int64_t d = -window; d <= window; ++d)
        sol.belief_table[idx(d)] = detail::catch_outcome(p, x, d);

    // Gauss-Seidel with clamped boundaries (beyond the window the game is
    // effectively decided). Alternating sweep direction speeds mixing.
    const double tol = 1e-12;
    const std::int64_t max_sweeps = 1000000;
    double residual = 0.0;
    std::int64_t sweep = 0;
    auto& b = sol.belief_table;
    const auto update = [&](std::int64_t d) {
        const double up = d + 1 > window ? 1.0 : b[idx(d + 1)];
        const double dn = d - 1 < -window ? 0.0 : b[idx(d - 1)];
        const double nb = (1.0 - q) * (p * up + (1.0 - p) * dn)
                        + q * detail::catch_outcome(p, x, d);
        const double diff = std::fabs(nb - b[idx(d)]);
        if (diff > residual) residual = diff;
        b[idx(d)] = nb;
    };
    for (; sweep < max_sweeps; ++sweep) {
        residual = 0.0;
        if (sweep % 2 == 0)
            for (std::int64_t d = -window; d <= window; ++d) update(d);
        else
            for (std::int64_t d = window; d >= -window; --d) update(d);
        if (residual < tol) break;
    }
    if (residual >= tol)
        throw OracleError("dp_solve: belief sweep did not converge; residual " +
                          std::to_string(residual));
    sol.residual = residual;
    sol.sweeps = sweep + 1;

    // Visits by forward mass flow: occupancy starts as a point mass at 0,
    // each round survives with 1-q and splits p/(1-p) to the neighbors.
    sol.visit_table.assign(n, 0.0);
    std::vector<double> mass(n, 0.0), next(n, 0.0);
    mass[idx(0)] = 1.0;
    double total = 1.0;
    while (total > 1e-16) {
        for (std::size_t i = 0; i < n; ++i) sol.visit_table[i] += mass[i];
        std::fill(next.begin(), next.end(), 0.0);
        for (std::int64_t d = -window; d <= window; ++d) {
            const double m = mass[idx(d)];
            if (m == 0.0) continue;
            const double survive = m * (1.0 - q);
            if (d + 1 <= window) next[idx(d + 1)] += survive * p;
            if (d - 1 >= -window) next[idx(d - 1)] += survive * (1.0 - p);
        }
        mass.swap(next);
        total = 0.0;
        for (double m : mass) total += m;
    }

    // Expected surprise from DP quantities only (no closed forms).
    double sum = 0.0, comp = 0.0;
    for (std::int64_t d = -window; d <= window; ++d) {
        const double bd = sol.belief_at(d);
        const double c = detail::catch_outcome(p, x, d);
        const double s_final = q * (c * (1.0 - bd) + (1.0 - c) * bd);
        const double s_non = (1.0 - q) * (p * std::fabs(sol.belief_at(d + 1) - bd)
                                          + (1.0 - p) * std::fabs(bd - sol.belief_at(d - 1)));
        const double term = (s_final + s_non) * sol.visit_at(d);
        const double y = term - comp;
        const double t = sum + y;
        comp = (t - sum) - y;
        sum = t;
    }
    sol.expected_surprise = sum;
    return sol;
}

namespace detail {

// Belief lookup table over the truncation window, clamped outside.
struct BeliefTable {
    std::int64_t window;
    std::vector<double> values;

    BeliefTable(const QuidditchParams& params, std::int64_t x, std::int64_t w)
        : window(w), values(static_cast<std::size_t>(2 * w + 1)) {
        for (std::int64_t d = -w; d <= w; ++d)
            values[static_cast<std::size_t>(d + w)] = belief(params, x, d);
    }
    double at(std::int64_t d) const {
        if (d > window) return 1.0;
        if (d < -window) return 0.0;
        return values[static_cast<std::size_t>(d + window)];
    }
};

inline constexpr std::int64_t kEpisodeCap = 10000000;

template <typename BeliefFn>
EpisodeTrace run_episode(const QuidditchParams& params, std::int64_t x, CounterRng& rng,
                         const BeliefFn& belief_of, bool record_states) {
    const double p = params.p, q = params.q;
    EpisodeTrace tr;
    tr.surprise_total = 0.0;
    std::int64_t d = 0;
    double prev_belief = belief_of(0);
    if (record_states) {
        tr.states.push_back(0);
        tr.beliefs.push_back(prev_belief);
    }
    for (std::int64_t round = 0;; ++round) {
        if (round >= kEpisodeCap)
            throw OracleError("simulate_episode: round cap exceeded");
        if (rng.bernoulli(q)) {
            const bool a_catches = rng.bernoulli(p);
            const std::int64_t final_d = d + (a_catches ? x : -x);
            tr.a_wins = final_d > 0 || (final_d == 0 && a_catches);
            const double outcome = tr.a_wins ? 1.0 : 0.0;
            tr.surprise_total += std::fabs(outcome - prev_belief);
            if (record_states) tr.beliefs.push_back(outcome);
            return tr;
        }
        d += rng.bernoulli(p) ? 1 : -1;
        const double bel = belief_of(d);
        tr.surprise_total += std::fabs(bel - prev_belief);
        prev_belief = bel;
        if (record_states) {
            tr.states.push_back(d);
            tr.beliefs.push_back(bel);
        }
    }
}

} // namespace detail

// One full game trajectory with its belief curve; deterministic per seed.
inline EpisodeTrace simulate_episode(const QuidditchParams& params, std::int64_t x,
                                     std::uint64_t seed) {
    if (x < 0) throw ValidationError("simulate_episode: snitch score x must be >= 0");
    const detail::BeliefTable table(params, x, detail::default_window(params, x) + 10);
    CounterRng rng(seed, 0);
    return detail::run_episode(params, x, rng, [&](std::int64_t d) { return table.at(d); }, true);
}

// Mean and standard error of total surprise over independent episodes.
// Episode i draws from stream (seed, i), so results are order-independent.
inline McEstimate mc_surprise(const QuidditchParams& params, std::int64_t x,
                              std::int64_t episodes, std::uint64_t seed) {
    if (episodes < 1) throw ValidationError("mc_surprise: episodes must be >= 1");
    if (x < 0) throw ValidationError("mc_surprise: snitch score x must be >= 0");
    const detail::BeliefTable table(params, x, detail::default_window(params, x) + 10);
    double mean = 0.0, m2 = 0.0;
    for (std::int64_t i = 0; i < episodes; ++i) {
        CounterRng rng(seed, static_cast<std::uint64_t>(i));
        const EpisodeTrace tr = detail::run_episode(
            params, x, rng, [&](std::int64_t d) { return table.at(d); }, false);
        const double delta = tr.surprise_total - mean;
        mean += delta / static_cast<double>(i + 1);
        m2 += delta * (tr.surprise_total - mean);
    }
    double se = 0.0;
    if (episodes > 1) {
        const double var = m2 / static_cast<double>(episodes - 1);
        se = std::sqrt(var / static_cast<double>(episodes));
    }
    return {mean, se, episodes};
}

} // namespace gamechanger::quidditch
