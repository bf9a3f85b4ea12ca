#pragma once

// Telemetry calibration pipeline: teamfight detection by kill clustering,
// per-minute round labeling, original-bonus stripping, and piecewise-linear
// least-squares fits of the game-model curves plus the sigmoid steepness.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <limits>
#include <string>
#include <vector>

#include "gamechanger/errors.hpp"
#include "gamechanger/moba.hpp"
#include "gamechanger/piecewise.hpp"

namespace gamechanger::calib {

enum class Team { A, B };

inline Team other(Team t) { return t == Team::A ? Team::B : Team::A; }

struct KillEvent {
    double time = 0.0; // seconds from game start
    Team killer = Team::A;
    Team victim = Team::B;
};

struct GcKill {
    double time = 0.0;
    Team team = Team::A;
};

struct MatchRecord {
    std::string match_id;
    std::int64_t duration = 0; // minutes
    Team winner = Team::A;
    std::vector<double> wealth_A; // wealth at the end of minute t, index t-1
    std::vector<double> wealth_B;
    std::vector<KillEvent> kills; // time-ordered
    bool has_gc_kills = false;
    std::vector<GcKill> gc_kills;

    void validate() const {
        if (duration < 1) throw ValidationError("match: duration must be >= 1 minute");
        if (std::ssize(wealth_A) != duration || std::ssize(wealth_B) != duration)
            throw ValidationError("match: wealth series length must equal duration");
        for (std::size_t i = 0; i < kills.size(); ++i) {
            if (kills[i].time < 0.0) throw ValidationError("match: kill time must be >= 0");
            if (kills[i].killer == kills[i].victim)
                throw ValidationError("match: killer and victim must differ");
            if (i > 0 && kills[i].time < kills[i - 1].time)
                throw ValidationError("match: kills must be time-ordered");
        }
    }
};

// Minute t covers the half-open second interval (60(t-1), 60t], 1-indexed.
// Times at or below zero land in minute 1; times past the end land in the
// final minute (overtime seconds belong to the last telemetry row).
inline std::int64_t minute_of(double seconds, std::int64_t duration) {
    const auto m = static_cast<std::int64_t>(std::ceil(seconds / 60.0));
    return std::clamp<std::int64_t>(m, 1, duration);
}

struct ClusterRange {
    std::size_t begin = 0; // kill indices [begin, end)
    std::size_t end = 0;
};

// Greedy sequential clustering: a kill joins the current cluster iff its gap
// to the previous kill is strictly less than 30 seconds.
inline std::vector<ClusterRange> cluster_kills(const std::vector<KillEvent>& kills) {
    for (std::size_t i = 1; i < kills.size(); ++i)
        if (kills[i].time < kills[i - 1].time)
            throw ValidationError("cluster_kills: kills must be time-sorted");
    std::vector<ClusterRange> out;
    std::size_t start = 0;
    for (std::size_t i = 1; i <= kills.size(); ++i) {
        if (i == kills.size() || kills[i].time - kills[i - 1].time >= 30.0) {
            out.push_back({start, i});
            start = i;
        }
    }
    return out;
}

struct Teamfight {
    std::size_t begin = 0; // kill indices [begin, end)
    std::size_t end = 0;
    double end_time = 0.0; // time of the last kill
    int deaths_a = 0;
    int deaths_b = 0;
    Team winner = Team::A; // fewer deaths
};

// Drops single-death and equal-death clusters; the remaining clusters are
// teamfights won by the team with fewer deaths.
inline std::vector<Teamfight> extract_teamfights(const std::vector<KillEvent>& kills,
                                                 const std::vector<ClusterRange>& clusters) {
    std::vector<Teamfight> out;
    for (const auto& c : clusters) {
        const auto size = c.end - c.begin;
        if (size < 2) continue;
        int da = 0, db = 0;
        for (std::size_t i = c.begin; i < c.end; ++i)
            (kills[i].victim == Team::A ? da : db) += 1;
        if (da == db) continue;
        out.push_back({c.begin, c.end, kills[c.end - 1].time, da, db,
                       da < db ? Team::A : Team::B});
    }
    return out;
}

struct RoundLabel {
    bool fight = false;
    Team winner = Team::A; // meaningful only when fight
};

// Minute t is a teamfight round iff some teamfight ends in minute t; the
// round winner comes from the last such teamfight.
inline std::vector<RoundLabel> label_rounds(const MatchRecord& match,
                                            const std::vector<Teamfight>& fights) {
    std::vector<RoundLabel> labels(static_cast<std::size_t>(match.duration));
    for (const auto& tf : fights) {
        const auto t = minute_of(tf.end_time, match.duration);
        labels[static_cast<std::size_t>(t - 1)] = {true, tf.winner};
    }
    return labels;
}

// Full labeling pass over one match: cluster, extract, label.
inline std::vector<RoundLabel> label_match(const MatchRecord& m) {
    const auto clusters = cluster_kills(m.kills);
    const auto fights = extract_teamfights(m.kills, clusters);
    return label_rounds(m, fights);
}

enum class Game { kLol, kDota2 };

struct StripConfig {
    double lol_reward = 1500.0;       // Baron: 300 per player, team total
    double dota_reward = 920.0;       // Roshan team bounty in expectation
    double roshan_item_value = 0.0;   // consumable drops; no published value
};

inline double team_reward(Game game, const StripConfig& cfg) {
    return game == Game::kLol ? cfg.lol_reward : cfg.dota_reward + cfg.roshan_item_value;
}

namespace detail {
inline MatchRecord shift_gc_rewards(const MatchRecord& match, Game game,
                                    const StripConfig& cfg, double sign) {
    if (!match.has_gc_kills)
        throw ValidationError("strip_gc_rewards: match has no gc_kills list");
    MatchRecord out = match;
    const double reward = sign * team_reward(game, cfg);
    for (const auto& gk : match.gc_kills) {
        auto& w = gk.team == Team::A ? out.wealth_A : out.wealth_B;
        const auto from = minute_of(gk.time, match.duration);
        for (std::int64_t t = from; t <= match.duration; ++t)
            w[static_cast<std::size_t>(t - 1)] -= reward;
    }
    return out;
}
} // namespace detail

// Removes the original Game-Changer bonus from the killing team's wealth at
// and after each kill minute, so fitted incomes describe the bonus-free game.
inline MatchRecord strip_gc_rewards(const MatchRecord& match, Game game,
                                    const StripConfig& cfg = {}) {
    return detail::shift_gc_rewards(match, game, cfg, 1.0);
}

// Exact inverse of strip_gc_rewards.
inline MatchRecord unstrip_gc_rewards(const MatchRecord& match, Game game,
                                      const StripConfig& cfg = {}) {
    return detail::shift_gc_rewards(match, game, cfg, -1.0);
}

// Per-minute empirical aggregates across a corpus. Index t-1 holds minute t.
// Income estimates use wealth deltas and therefore start at minute 2; the
// final minute of each match is excluded from them as well, because the game
// ends partway through it and its wealth snapshot is truncated.
struct MinuteStats {
    std::vector<std::int64_t> n_alive;  // matches lasting >= t minutes
    std::vector<std::int64_t> n_fight;  // of those, minute t labeled teamfight
    std::vector<std::int64_t> n_end;    // teamfight minutes that end the game
    std::vector<double> r_hat;          // n_fight / n_alive
    std::vector<double> q_hat;          // n_end / n_fight (nan if no fights)
    std::vector<double> df_hat;         // mean per-team farm income
    std::vector<double> dw_hat;         // mean winner income in fight minutes
    std::vector<double> dl_hat;         // mean loser income
    std::vector<std::int64_t> n_farm;   // farm-income observations
    std::vector<std::int64_t> n_fight_inc; // fight-income observations
};

inline MinuteStats minute_estimates(const std::vector<MatchRecord>& matches,
                                    const std::vector<std::vector<RoundLabel>>& labels) {
    if (matches.size() != labels.size())
        throw ValidationError("minute_estimates: one label vector per match required");
    std::int64_t horizon = 0;
    for (const auto& m : matches) horizon = std::max(horizon, m.duration);
    MinuteStats s;
    const auto n = static_cast<std::size_t>(horizon);
    s.n_alive.assign(n, 0);
    s.n_fight.assign(n, 0);
    s.n_end.assign(n, 0);
    s.r_hat.assign(n, 0.0);
    s.q_hat.assign(n, std::numeric_limits<double>::quiet_NaN());
    s.df_hat.assign(n, 0.0);
    s.dw_hat.assign(n, 0.0);
    s.dl_hat.assign(n, 0.0);
    s.n_farm.assign(n, 0);
    s.n_fight_inc.assign(n, 0);

    for (std::size_t mi = 0; mi < matches.size(); ++mi) {
        const auto& m = matches[mi];
        const auto& lab = labels[mi];
        if (std::ssize(lab) != m.duration)
            throw ValidationError("minute_estimates: label vector length mismatch");
        for (std::int64_t t = 1; t <= m.duration; ++t) {
            const auto i = static_cast<std::size_t>(t - 1);
            s.n_alive[i] += 1;
            if (!lab[i].fight) {
                if (t >= 2 && t < m.duration) {
                    const double ga = m.wealth_A[i] - m.wealth_A[i - 1];
                    const double gb = m.wealth_B[i] - m.wealth_B[i - 1];
                    s.df_hat[i] += 0.5 * (ga + gb);
                    s.n_farm[i] += 1;
                }
                continue;
            }
            s.n_fight[i] += 1;
            if (t == m.duration) s.n_end[i] += 1;
            if (t >= 2 && t < m.duration) {
                const double ga = m.wealth_A[i] - m.wealth_A[i - 1];
                const double gb = m.wealth_B[i] - m.wealth_B[i - 1];
                const double win = lab[i].winner == Team::A ? ga : gb;
                const double lose = lab[i].winner == Team::A ? gb : ga;
                s.dw_hat[i] += win;
                s.dl_hat[i] += lose;
                s.n_fight_inc[i] += 1;
            }
        }
    }
    for (std::size_t i = 0; i < n; ++i) {
        if (s.n_alive[i] > 0) s.r_hat[i] = double(s.n_fight[i]) / double(s.n_alive[i]);
        if (s.n_fight[i] > 0) s.q_hat[i] = double(s.n_end[i]) / double(s.n_fight[i]);
        if (s.n_farm[i] > 0) s.df_hat[i] /= double(s.n_farm[i]);
        if (s.n_fight_inc[i] > 0) {
            s.dw_hat[i] /= double(s.n_fight_inc[i]);
            s.dl_hat[i] /= double(s.n_fight_inc[i]);
        }
    }
    return s;
}

namespace detail {

struct WPoint {
    double t = 0.0;
    double y = 0.0;
    double w = 1.0;
};

// Weighted least squares for the breakpoint values of a piecewise-linear
// function with fixed knot locations (hat-function basis). Returns the
// fitted values per knot; solves the small normal system by elimination.
inline std::vector<double> fit_knot_values(const std::vector<WPoint>& pts,
                                           const std::vector<double>& knots) {
    const std::size_t k = knots.size();
    std::vector<double> a(k * k, 0.0), b(k, 0.0);
    const auto basis = [&](std::size_t j, double t) {
        if (j > 0 && t <= knots[j - 1]) return 0.0;
        if (j + 1 < k && t >= knots[j + 1]) return 0.0;
        if (t == knots[j]) return 1.0;
        if (t < knots[j]) {
            if (j == 0) return 1.0;
            return (t - knots[j - 1]) / (knots[j] - knots[j - 1]);
        }
        if (j + 1 == k) return 1.0;
        return (knots[j + 1] - t) / (knots[j + 1] - knots[j]);
    };
    for (const auto& p : pts) {
        std::array<double, 8> phi{};
        for (std::size_t j = 0; j < k; ++j) phi[j] = basis(j, p.t);
        for (std::size_t i = 0; i < k; ++i) {
            if (phi[i] == 0.0) continue;
            b[i] += p.w * phi[i] * p.y;
            for (std::size_t j = 0; j < k; ++j) a[i * k + j] += p.w * phi[i] * phi[j];
        }
    }
    // ridge epsilon keeps knots with no support from producing a singular system
    for (std::size_t i = 0; i < k; ++i) a[i * k + i] += 1e-9;
    for (std::size_t col = 0; col < k; ++col) {
        std::size_t piv = col;
        for (std::size_t r = col + 1; r < k; ++r)
            if (std::fabs(a[r * k + col]) > std::fabs(a[piv * k + col])) piv = r;
        if (piv != col) {
            for (std::size_t j = 0; j < k; ++j) std::swap(a[col * k + j], a[piv * k + j]);
            std::swap(b[col], b[piv]);
        }
        const double d = a[col * k + col];
        for (std::size_t r = 0; r < k; ++r) {
            if (r == col || a[r * k + col] == 0.0) continue;
            const double f = a[r * k + col] / d;
            for (std::size_t j = col; j < k; ++j) a[r * k + j] -= f * a[col * k + j];
            b[r] -= f * b[col];
        }
    }
    std::vector<double> v(k);
    for (std::size_t i = 0; i < k; ++i) v[i] = b[i] / a[i * k + i];
    return v;
}

inline double eval_knots(const std::vector<double>& knots, const std::vector<double>& vals,
                         double t) {
    if (t <= knots.front()) return vals.front();
    if (t >= knots.back()) return vals.back();
    for (std::size_t j = 1; j < knots.size(); ++j)
        if (t <= knots[j]) {
            const double f = (t - knots[j - 1]) / (knots[j] - knots[j - 1]);
            return vals[j - 1] + f * (vals[j] - vals[j - 1]);
        }
    return vals.back();
}

inline double wsse(const std::vector<WPoint>& pts, const std::vector<double>& knots,
                   const std::vector<double>& vals) {
    double acc = 0.0;
    for (const auto& p : pts) {
        const double e = p.y - eval_knots(knots, vals, p.t);
        acc += p.w * e * e;
    }
    return acc;
}

// Pool-adjacent-violators on knot values (weights: accumulated basis mass),
// used to repair a nondecreasing fit after unconstrained least squares.
inline void isotonic(std::vector<double>& v, const std::vector<double>& w) {
    const std::size_t n = v.size();
    std::vector<double> val(v), wt(w);
    std::vector<std::size_t> len(n, 1);
    std::size_t m = 0;
    for (std::size_t i = 0; i < n; ++i) {
        val[m] = v[i];
        wt[m] = w[i];
        len[m] = 1;
        while (m > 0 && val[m - 1] > val[m]) {
            const double tw = wt[m - 1] + wt[m];
            val[m - 1] = (wt[m - 1] * val[m - 1] + wt[m] * val[m]) / tw;
            wt[m - 1] = tw;
            len[m - 1] += len[m];
            --m;
        }
        ++m;
    }
    std::size_t idx = 0;
    for (std::size_t blk = 0; blk < m; ++blk)
        for (std::size_t j = 0; j < len[blk]; ++j) v[idx++] = val[blk];
}

struct CurveFit {
    std::vector<double> knots;
    std::vector<double> vals;
    double sse = std::numeric_limits<double>::infinity();
};

// Scans interior knot placements (integer minutes) and keeps the weighted
// least-squares winner. nondecreasing additionally applies isotonic repair;
// lo/hi clamp the fitted values into the curve's codomain.
inline CurveFit fit_piecewise(const std::vector<WPoint>& pts, int segments,
                              bool nondecreasing, double lo, double hi) {
    if (pts.size() < 2) throw ValidationError("fit: need at least two usable minutes");
    const double t0 = pts.front().t;
    const double t1 = pts.back().t;
    const auto clamp_vals = [&](std::vector<double>& v) {
        for (auto& x : v) x = std::clamp(x, lo, hi);
    };
    CurveFit best;
    const auto consider = [&](const std::vector<double>& knots) {
        auto vals = fit_knot_values(pts, knots);
        if (nondecreasing) {
            std::vector<double> mass(knots.size(), 1e-12);
            for (const auto& p : pts) {
                for (std::size_t j = 0; j < knots.size(); ++j)
                    if ((j == 0 || p.t > knots[j - 1]) &&
                        (j + 1 == knots.size() || p.t < knots[j + 1]))
                        mass[j] += p.w;
            }
            isotonic(vals, mass);
        }
        clamp_vals(vals);
        const double sse = wsse(pts, knots, vals);
        if (sse < best.sse) best = {knots, vals, sse};
    };
    if (segments <= 1 || t1 - t0 < double(segments)) {
        consider({t0, t1});
        return best;
    }
    if (segments == 2) {
        for (double k = std::ceil(t0) + 1.0; k < t1; k += 1.0) consider({t0, k, t1});
        consider({t0, t1});
        return best;
    }
    for (double k1 = std::ceil(t0) + 1.0; k1 < t1 - 1.0; k1 += 1.0)
        for (double k2 = k1 + 1.0; k2 < t1; k2 += 1.0) consider({t0, k1, k2, t1});
    consider({t0, t1});
    return best;
}

// Ramp-then-plateau: value a at t0 rising (or falling) linearly to c at knot
// k, constant c afterwards. Two linear parameters per candidate knot.
inline CurveFit fit_ramp_plateau(const std::vector<WPoint>& pts, double lo, double hi) {
    if (pts.size() < 2) throw ValidationError("fit: need at least two usable minutes");
    const double t0 = pts.front().t;
    const double t1 = pts.back().t;
    CurveFit best;
    for (double k = std::ceil(t0) + 1.0; k <= t1; k += 1.0) {
        // basis: phi(t) = ramp from 1 at t0 to 0 at k (0 after), psi = 1-phi
        double aa = 0, ab = 0, bb = 0, ay = 0, by = 0;
        for (const auto& p : pts) {
            const double phi = p.t >= k ? 0.0 : (k - p.t) / (k - t0);
            const double psi = 1.0 - phi;
            aa += p.w * phi * phi;
            ab += p.w * phi * psi;
            bb += p.w * psi * psi;
            ay += p.w * phi * p.y;
            by += p.w * psi * p.y;
        }
        aa += 1e-9;
        bb += 1e-9;
        const double det = aa * bb - ab * ab;
        if (std::fabs(det) < 1e-30) continue;
        const double a = std::clamp((ay * bb - by * ab) / det, lo, hi);
        const double c = std::clamp((by * aa - ay * ab) / det, lo, hi);
        std::vector<double> knots = k < t1 ? std::vector<double>{t0, k, t1}
                                           : std::vector<double>{t0, k};
        std::vector<double> vals = k < t1 ? std::vector<double>{a, c, c}
                                          : std::vector<double>{a, c};
        const double sse = wsse(pts, knots, vals);
        if (sse < best.sse) best = {std::move(knots), std::move(vals), sse};
    }
    return best;
}

inline PiecewiseLinear to_piecewise(const CurveFit& f) {
    std::vector<std::pair<double, double>> pts;
    pts.reserve(f.knots.size());
    for (std::size_t i = 0; i < f.knots.size(); ++i) pts.emplace_back(f.knots[i], f.vals[i]);
    return PiecewiseLinear(std::move(pts));
}

} // namespace detail

// Segment counts above 3 are capped at 3 (four breakpoints), which is as
// much structure as per-minute aggregates support.
struct FitConfig {
    int r_segments = 2;      // ramp then plateau
    int q_segments = 3;      // nondecreasing
    int income_segments = 3;
    std::int64_t min_usable_minutes = 10;
};

struct FittedParams {
    PiecewiseLinear r_curve = PiecewiseLinear::constant(0.0);
    PiecewiseLinear q_curve = PiecewiseLinear::constant(0.0);
    PiecewiseLinear dF_curve = PiecewiseLinear::constant(0.0);
    PiecewiseLinear dW_curve = PiecewiseLinear::constant(0.0);
    PiecewiseLinear dL_curve = PiecewiseLinear::constant(0.0);
    double theta = 0.0; // filled by fit_theta
    std::vector<std::int64_t> sample_counts; // per-minute alive counts
};

// Fits r from alive-minute fractions, q from fight-minute endings, and the
// three income curves from wealth deltas; weights are observation counts.
inline FittedParams fit_curves(const std::vector<MatchRecord>& matches,
                               const std::vector<std::vector<RoundLabel>>& labels,
                               const FitConfig& cfg = {}) {
    const MinuteStats s = minute_estimates(matches, labels);
    const auto horizon = s.n_alive.size();

    std::vector<detail::WPoint> rp, qp, fp, wp, lp;
    for (std::size_t i = 0; i < horizon; ++i) {
        const double t = double(i + 1);
        if (s.n_alive[i] > 0) rp.push_back({t, s.r_hat[i], double(s.n_alive[i])});
        if (s.n_fight[i] > 0) qp.push_back({t, s.q_hat[i], double(s.n_fight[i])});
        if (s.n_farm[i] > 0) fp.push_back({t, s.df_hat[i], double(s.n_farm[i])});
        if (s.n_fight_inc[i] > 0) {
            wp.push_back({t, s.dw_hat[i], double(s.n_fight_inc[i])});
            lp.push_back({t, s.dl_hat[i], double(s.n_fight_inc[i])});
        }
    }
    if (std::ssize(rp) < cfg.min_usable_minutes)
        throw ValidationError("fit_curves: fewer than the minimum usable minutes");

    constexpr double kInf = std::numeric_limits<double>::infinity();
    FittedParams out;
    out.r_curve = detail::to_piecewise(cfg.r_segments == 2
                                           ? detail::fit_ramp_plateau(rp, 0.0, 1.0)
                                           : detail::fit_piecewise(rp, cfg.r_segments,
                                                                   false, 0.0, 1.0));
    out.q_curve = detail::to_piecewise(
        detail::fit_piecewise(qp, cfg.q_segments, true, 0.0, 1.0));
    out.dF_curve = detail::to_piecewise(
        detail::fit_piecewise(fp, cfg.income_segments, false, 0.0, kInf));
    out.dW_curve = detail::to_piecewise(
        detail::fit_piecewise(wp, cfg.income_segments, false, 0.0, kInf));
    out.dL_curve = detail::to_piecewise(
        detail::fit_piecewise(lp, cfg.income_segments, false, 0.0, kInf));
    out.sample_counts = s.n_alive;
    return out;
}

// Maximum-likelihood sigmoid steepness at fixed lambda=1. Observations are
// fight minutes from minute 2 on: pre-fight wealth is the end of the
// previous minute. Golden-section search over theta in (0, 100].
inline double fit_theta(const std::vector<MatchRecord>& matches,
                        const std::vector<std::vector<RoundLabel>>& labels) {
    if (matches.size() != labels.size())
        throw ValidationError("fit_theta: one label vector per match required");
    struct Obs {
        double wa, wb;
        bool a_won;
    };
    std::vector<Obs> obs;
    bool any_a = false, any_b = false, any_gap = false;
    for (std::size_t mi = 0; mi < matches.size(); ++mi) {
        const auto& m = matches[mi];
        const auto& lab = labels[mi];
        for (std::int64_t t = 2; t <= m.duration; ++t) {
            const auto i = static_cast<std::size_t>(t - 1);
            if (!lab[i].fight) continue;
            const double wa = m.wealth_A[i - 1];
            const double wb = m.wealth_B[i - 1];
            if (wa <= 0.0 || wb <= 0.0) continue;
            const bool a_won = lab[i].winner == Team::A;
            obs.push_back({wa, wb, a_won});
            (a_won ? any_a : any_b) = true;
            if (std::fabs(wa - wb) > 1e-9 * std::max(wa, wb)) any_gap = true;
        }
    }
    if (obs.empty()) throw ValidationError("fit_theta: no usable teamfight observations");
    if (!any_a || !any_b)
        throw ValidationError("fit_theta: degenerate data, every teamfight has the same outcome");
    if (!any_gap)
        throw ValidationError("fit_theta: degenerate data, all teamfights are wealth-balanced");

    const auto nll = [&](double theta) {
        double acc = 0.0;
        for (const auto& o : obs) {
            const double p = moba::teamfight_win_prob(o.wa, o.wb, 1.0, theta);
            const double lik = o.a_won ? p : 1.0 - p;
            acc -= std::log(std::max(lik, 1e-300));
        }
        return acc;
    };
    double lo = 1e-4, hi = 100.0;
    const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
    double x1 = hi - inv_phi * (hi - lo);
    double x2 = lo + inv_phi * (hi - lo);
    double f1 = nll(x1), f2 = nll(x2);
    while (hi - lo > 1e-4) {
        if (f1 < f2) {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - inv_phi * (hi - lo);
            f1 = nll(x1);
        } else {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + inv_phi * (hi - lo);
            f2 = nll(x2);
        }
    }
    return 0.5 * (lo + hi);
}

} // namespace gamechanger::calib
