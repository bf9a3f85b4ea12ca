#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <utility>
#include <vector>

#include "gamechanger/errors.hpp"
#include "gamechanger/piecewise.hpp"
#include "gamechanger/rng.hpp"

namespace gamechanger::moba {

// Team wealth race in rounds u = 1..horizon. Round u is a teamfight with
// probability r(u), otherwise both teams farm delta_F(u). A teamfight ends
// the game with probability q_end(u); if it does not, the winner takes
// delta_W(u) plus delta_GC while the Game Changer is up, the loser takes
// delta_L(u). The final round is a forced showdown (r = q_end = 1) so the
// chain always absorbs within the horizon.
struct MobaModel {
    PiecewiseLinear r;
    PiecewiseLinear q_end;
    PiecewiseLinear delta_F;
    PiecewiseLinear delta_W;
    PiecewiseLinear delta_L;
    double theta;
    double lambda;
    double delta_GC;
    std::int64_t gc_spawn_round;
    std::int64_t gc_respawn_delay;
    double w0_A;
    double w0_B;
    std::int64_t horizon;

    void validate() const {
        if (horizon < 1) throw ValidationError("moba: horizon must be >= 1");
        if (!(theta > 0.0)) throw ValidationError("moba: theta must be > 0");
        if (!(lambda > 0.0)) throw ValidationError("moba: lambda must be > 0");
        if (!(delta_GC >= 0.0)) throw ValidationError("moba: delta_GC must be >= 0");
        if (gc_spawn_round < 0) throw ValidationError("moba: gc_spawn_round must be >= 0");
        if (gc_respawn_delay < 0) throw ValidationError("moba: gc_respawn_delay must be >= 0");
        if (!(w0_A > 0.0) || !(w0_B > 0.0))
            throw ValidationError("moba: initial wealth must be positive");
        for (const auto& p : r.points())
            if (!(p.second >= 0.0) || !(p.second <= 1.0))
                throw ValidationError("moba: r values must lie in [0,1]");
        for (const auto& p : q_end.points())
            if (!(p.second >= 0.0) || !(p.second <= 1.0))
                throw ValidationError("moba: q_end values must lie in [0,1]");
        for (std::int64_t u = 1; u <= horizon; ++u) {
            const double t = static_cast<double>(u);
            if (!(delta_F(t) >= 0.0))
                throw ValidationError("moba: delta_F must be >= 0 on [1, horizon]");
            if (!(delta_L(t) >= 0.0))
                throw ValidationError("moba: delta_L must be >= 0 on [1, horizon]");
            if (!(delta_W(t) > delta_L(t)))
                throw ValidationError("moba: delta_W must exceed delta_L on [1, horizon]");
        }
    }

    // Effective per-round curves; the horizon round is a forced showdown.
    double r_at(std::int64_t u) const {
        return u >= horizon ? 1.0 : r(static_cast<double>(u));
    }
    double q_at(std::int64_t u) const {
        return u >= horizon ? 1.0 : q_end(static_cast<double>(u));
    }
};

// Probability that team A wins one teamfight at wealths (w_a, w_b) with
// rating ratio lambda. Relative-difference sigmoid, branch chosen so the
// argument is formed from the weaker side's perspective; both branches give
// exactly 1/2 at lambda*w_a == w_b.
inline double teamfight_win_prob(double w_a, double w_b, double lambda, double theta) {
    if (!(w_a > 0.0) || !(w_b > 0.0))
        throw ValidationError("moba: teamfight wealth must be positive on both sides");
    if (!(lambda > 0.0) || !(theta > 0.0))
        throw ValidationError("moba: lambda and theta must be positive");
    const double adv = lambda * w_a;
    if (adv >= w_b) return 1.0 / (1.0 + std::exp(-theta * (adv - w_b) / w_b));
    return 1.0 - 1.0 / (1.0 + std::exp(-theta * (w_b - adv) / adv));
}

struct MobaState {
    std::int64_t t;        // rounds already played
    double w_a, w_b;       // team wealth
    std::int64_t gc_clock; // rounds until the Game Changer is available (0 = up)
};

enum class Outcome { kContinue, kAWins, kBWins };

struct TransitionBranch {
    double prob;
    Outcome outcome;
    MobaState next; // meaningful only for kContinue
};

namespace detail {

inline bool gc_available(const MobaModel& m, std::int64_t clock, std::int64_t u) {
    return clock == 0 && u >= m.gc_spawn_round;
}

inline std::int64_t clock_after_farm(std::int64_t clock) {
    return clock > 0 ? clock - 1 : 0;
}

} // namespace detail

// One-round transition law from state s (round u = s.t + 1 plays next).
// Branches with structurally zero probability (r or q at 0 or 1) are omitted.
inline std::vector<TransitionBranch> transition(const MobaModel& m, const MobaState& s) {
    if (s.t >= m.horizon)
        throw ValidationError("moba: transition requires t < horizon");
    const std::int64_t u = s.t + 1;
    const double r = m.r_at(u), q = m.q_at(u);
    const double f = m.delta_F(static_cast<double>(u));
    const double w = m.delta_W(static_cast<double>(u));
    const double l = m.delta_L(static_cast<double>(u));
    const bool avail = detail::gc_available(m, s.gc_clock, u);
    const std::int64_t cf = detail::clock_after_farm(s.gc_clock);
    const std::int64_t ck = avail ? m.gc_respawn_delay : cf;
    const double gw = avail ? w + m.delta_GC : w;

    std::vector<TransitionBranch> out;
    if (r < 1.0)
        out.push_back({1.0 - r, Outcome::kContinue, {u, s.w_a + f, s.w_b + f, cf}});
    if (r > 0.0) {
        const double pt = teamfight_win_prob(s.w_a, s.w_b, m.lambda, m.theta);
        if (q > 0.0) {
            out.push_back({r * pt * q, Outcome::kAWins, {u, s.w_a, s.w_b, s.gc_clock}});
            out.push_back({r * (1.0 - pt) * q, Outcome::kBWins, {u, s.w_a, s.w_b, s.gc_clock}});
        }
        if (q < 1.0) {
            out.push_back({r * pt * (1.0 - q), Outcome::kContinue,
                           {u, s.w_a + gw, s.w_b + l, ck}});
            out.push_back({r * (1.0 - pt) * (1.0 - q), Outcome::kContinue,
                           {u, s.w_a + l, s.w_b + gw, ck}});
        }
    }
    return out;
}

struct SolveOptions {
    double grid_step = 250.0;
    std::int64_t lookahead = 5;
    bool lookahead_sur = true;  // false: lookahead applies to winp only, sur is one-step
    bool retain_layers = false; // keep materialized layers (needed for mc_solve beliefs)
};

namespace detail {

// Nearest grid index for a wealth value; ties toward the lower index.
inline std::int64_t grid_round(double x) {
    return static_cast<std::int64_t>(std::ceil(x - 0.5));
}

struct RoundTables {
    std::vector<double> r, q, f, w, l;
    std::vector<double> lo_shift, hi_shift; // per-team wealth change bounds per round
};

inline RoundTables make_tables(const MobaModel& m) {
    RoundTables rt;
    const std::size_t n = static_cast<std::size_t>(m.horizon) + 1;
    rt.r.resize(n);
    rt.q.resize(n);
    rt.f.resize(n);
    rt.w.resize(n);
    rt.l.resize(n);
    rt.lo_shift.resize(n);
    rt.hi_shift.resize(n);
    for (std::int64_t u = 1; u <= m.horizon; ++u) {
        const double t = static_cast<double>(u);
        rt.r[u] = m.r_at(u);
        rt.q[u] = m.q_at(u);
        rt.f[u] = m.delta_F(t);
        rt.w[u] = m.delta_W(t);
        rt.l[u] = m.delta_L(t);
        const double wg = rt.w[u] + (u >= m.gc_spawn_round ? m.delta_GC : 0.0);
        rt.lo_shift[u] = std::min(rt.f[u], rt.l[u]);
        rt.hi_shift[u] = std::max(rt.f[u], wg);
    }
    return rt;
}

// Possible Game-Changer clock values among states at time t: deterministic
// countdown before the spawn round, {0..respawn} once kills are possible.
inline std::pair<std::int64_t, std::int64_t> clock_range(const MobaModel& m, std::int64_t t) {
    if (t < m.gc_spawn_round - 1) {
        const std::int64_t c = m.gc_spawn_round - 1 - t;
        return {c, c};
    }
    return {0, m.gc_respawn_delay};
}

struct Layer {
    std::int64_t t = 0;
    std::int64_t ia_lo = 0, ia_hi = 0;
    std::int64_t ib_lo = 0, ib_hi = 0;
    std::int64_t c_lo = 0, c_hi = 0;
    std::vector<double> winp, sur;

    std::int64_t na() const { return ia_hi - ia_lo + 1; }
    std::int64_t nb() const { return ib_hi - ib_lo + 1; }
    std::int64_t nc() const { return c_hi - c_lo + 1; }
    std::size_t cells() const {
        return static_cast<std::size_t>(na()) * static_cast<std::size_t>(nb()) *
               static_cast<std::size_t>(nc());
    }
    std::size_t index(std::int64_t c, std::int64_t ia, std::int64_t ib) const {
        return (static_cast<std::size_t>(c - c_lo) * static_cast<std::size_t>(na()) +
                static_cast<std::size_t>(ia - ia_lo)) *
                   static_cast<std::size_t>(nb()) +
               static_cast<std::size_t>(ib - ib_lo);
    }
};

struct Solver {
    const MobaModel& m;
    const SolveOptions& opt;
    RoundTables rt;
    double step;
    std::int64_t T;

    Solver(const MobaModel& model, const SolveOptions& options)
        : m(model), opt(options), rt(make_tables(model)), step(options.grid_step),
          T(model.horizon) {}

    // Grid lookup with index clamping: trees rooted at exact (off-grid)
    // wealth can land one index outside the box propagated from on-grid
    // sources; the box edge is the correct saturation value there.
    std::pair<double, double> lookup(const Layer& ly, double wa, double wb,
                                     std::int64_t c) const {
        const std::int64_t ia = std::clamp(grid_round(wa / step), ly.ia_lo, ly.ia_hi);
        const std::int64_t ib = std::clamp(grid_round(wb / step), ly.ib_lo, ly.ib_hi);
        const std::int64_t cc = std::clamp(c, ly.c_lo, ly.c_hi);
        const std::size_t i = ly.index(cc, ia, ib);
        return {ly.winp[i], ly.sur[i]};
    }

    // Exact transition tree from (t, wa, wb, c); wealth is rounded to the
    // grid only on reaching `stop` (nullptr: run to absorption). Returns
    // (winp, sur). States with equal wealth at lambda=1 are pinned to 1/2,
    // which is exact by exchange symmetry of the whole game.
    std::pair<double, double> eval(std::int64_t t, double wa, double wb, std::int64_t c,
                                   const Layer* stop) const {
        if (stop && t == stop->t) return lookup(*stop, wa, wb, c);
        const std::int64_t u = t + 1;
        const double r = rt.r[u], q = rt.q[u];
        double pt = 0.0;
        if (r > 0.0) pt = teamfight_win_prob(wa, wb, m.lambda, m.theta);
        if (u == T) {
            double winp = pt;
            if (m.lambda == 1.0 && wa == wb) winp = 0.5;
            return {winp, pt * (1.0 - winp) + (1.0 - pt) * winp};
        }
        const bool avail = gc_available(m, c, u);
        const std::int64_t cf = clock_after_farm(c);
        const std::int64_t ck = avail ? m.gc_respawn_delay : cf;
        const double gw = avail ? rt.w[u] + m.delta_GC : rt.w[u];

        double wf = 0.0, sf = 0.0, waw = 0.0, saw = 0.0, wbw = 0.0, sbw = 0.0;
        if (r < 1.0) {
            const auto fr = eval(u, wa + rt.f[u], wb + rt.f[u], cf, stop);
            wf = fr.first;
            sf = fr.second;
        }
        if (r > 0.0 && q < 1.0) {
            const auto ar = eval(u, wa + gw, wb + rt.l[u], ck, stop);
            waw = ar.first;
            saw = ar.second;
            const auto br = eval(u, wa + rt.l[u], wb + gw, ck, stop);
            wbw = br.first;
            sbw = br.second;
        }
        double winp = (1.0 - r) * wf +
                      r * (pt * (q + (1.0 - q) * waw) + (1.0 - pt) * (1.0 - q) * wbw);
        if (m.lambda == 1.0 && wa == wb) winp = 0.5;
        const double sur =
            (1.0 - r) * (std::fabs(winp - wf) + sf) +
            r * pt * (q * (1.0 - winp) + (1.0 - q) * (std::fabs(winp - waw) + saw)) +
            r * (1.0 - pt) * (q * winp + (1.0 - q) * (std::fabs(winp - wbw) + sbw));
        return {winp, sur};
    }

    // winp-only tree for the one-step-surprise scheme.
    double eval_winp(std::int64_t t, double wa, double wb, std::int64_t c,
                     const Layer* stop) const {
        if (stop && t == stop->t) return lookup(*stop, wa, wb, c).first;
        const std::int64_t u = t + 1;
        const double r = rt.r[u], q = rt.q[u];
        double pt = 0.0;
        if (r > 0.0) pt = teamfight_win_prob(wa, wb, m.lambda, m.theta);
        if (u == T) return (m.lambda == 1.0 && wa == wb) ? 0.5 : pt;
        const bool avail = gc_available(m, c, u);
        const std::int64_t cf = clock_after_farm(c);
        const std::int64_t ck = avail ? m.gc_respawn_delay : cf;
        const double gw = avail ? rt.w[u] + m.delta_GC : rt.w[u];
        double wf = 0.0, waw = 0.0, wbw = 0.0;
        if (r < 1.0) wf = eval_winp(u, wa + rt.f[u], wb + rt.f[u], cf, stop);
        if (r > 0.0 && q < 1.0) {
            waw = eval_winp(u, wa + gw, wb + rt.l[u], ck, stop);
            wbw = eval_winp(u, wa + rt.l[u], wb + gw, ck, stop);
        }
        double winp = (1.0 - r) * wf +
                      r * (pt * (q + (1.0 - q) * waw) + (1.0 - pt) * (1.0 - q) * wbw);
        if (m.lambda == 1.0 && wa == wb) winp = 0.5;
        return winp;
    }

    // One-step surprise from a state whose winp is already known; successor
    // values come from the (winp, sur) arrays of the next layer.
    double one_step_sur(std::int64_t t, double wa, double wb, std::int64_t c, double winp,
                        const Layer* next) const {
        const std::int64_t u = t + 1;
        const double r = rt.r[u], q = rt.q[u];
        double pt = 0.0;
        if (r > 0.0) pt = teamfight_win_prob(wa, wb, m.lambda, m.theta);
        if (u == T) return pt * (1.0 - winp) + (1.0 - pt) * winp;
        const bool avail = gc_available(m, c, u);
        const std::int64_t cf = clock_after_farm(c);
        const std::int64_t ck = avail ? m.gc_respawn_delay : cf;
        const double gw = avail ? rt.w[u] + m.delta_GC : rt.w[u];
        double wf = 0.0, sf = 0.0, waw = 0.0, saw = 0.0, wbw = 0.0, sbw = 0.0;
        if (r < 1.0) {
            const auto fr = lookup(*next, wa + rt.f[u], wb + rt.f[u], cf);
            wf = fr.first;
            sf = fr.second;
        }
        if (r > 0.0 && q < 1.0) {
            const auto ar = lookup(*next, wa + gw, wb + rt.l[u], ck);
            waw = ar.first;
            saw = ar.second;
            const auto br = lookup(*next, wa + rt.l[u], wb + gw, ck);
            wbw = br.first;
            sbw = br.second;
        }
        return (1.0 - r) * (std::fabs(winp - wf) + sf) +
               r * pt * (q * (1.0 - winp) + (1.0 - q) * (std::fabs(winp - waw) + saw)) +
               r * (1.0 - pt) * (q * winp + (1.0 - q) * (std::fabs(winp - wbw) + sbw));
    }
};

// Box metadata for the layer at time `t`, reachable from wealth bounds
// [lo_a, hi_a] x [lo_b, hi_b] at time `from`. One index of padding absorbs
// the rounding slack between exact path sums and grid hops; indices below 1
// are unreachable because wealth never decreases and w0 >= step.
inline Layer make_box(const MobaModel& m, const RoundTables& rt, double step,
                      std::int64_t from, std::int64_t t, double lo_a, double hi_a,
                      double lo_b, double hi_b) {
    double bmin = 0.0, bmax = 0.0;
    for (std::int64_t u = from + 1; u <= t; ++u) {
        bmin += rt.lo_shift[u];
        bmax += rt.hi_shift[u];
    }
    Layer ly;
    ly.t = t;
    ly.ia_lo = std::max<std::int64_t>(1, grid_round((lo_a + bmin) / step) - 1);
    ly.ia_hi = grid_round((hi_a + bmax) / step) + 1;
    ly.ib_lo = std::max<std::int64_t>(1, grid_round((lo_b + bmin) / step) - 1);
    ly.ib_hi = grid_round((hi_b + bmax) / step) + 1;
    const auto cr = clock_range(m, t);
    ly.c_lo = cr.first;
    ly.c_hi = cr.second;
    return ly;
}

} // namespace detail

struct SolveResult {
    double root_winp = 0.0;
    double root_surprise = 0.0;
    // Max |winp(s) - sum tran * winp(succ)| over re-expanded sample states,
    // successors evaluated pre-rounding. Nonzero only through the symmetric
    // pin at lambda=1; bounded by 1e-10 or solve throws.
    double martingale_residual = 0.0;
    // Half the max adjacent-cell winp gap on the first materialized layer: a
    // local-variation bound on the error a single grid rounding can inject.
    double rounding_residual = 0.0;
    double grid_step = 0.0;
    std::int64_t lookahead = 0;
    std::vector<detail::Layer> layers; // ascending t; filled when retain_layers
};

namespace detail {

inline void check_solve_inputs(const MobaModel& m, const SolveOptions& opt,
                               const RoundTables& rt) {
    m.validate();
    if (!(opt.grid_step > 0.0))
        throw ValidationError("moba: grid_step must be positive");
    if (opt.lookahead < 1)
        throw ValidationError("moba: lookahead must be >= 1");
    if (opt.retain_layers && !opt.lookahead_sur)
        throw ValidationError("moba: retain_layers requires the lookahead surprise scheme");
    double max_income = 0.0;
    for (std::int64_t u = 1; u <= m.horizon; ++u)
        max_income = std::max(max_income, rt.hi_shift[u]);
    if (max_income / opt.grid_step < 10.0)
        throw ValidationError(
            "moba: grid too coarse (fewer than 10 grid points span one round's max income)");
    if (m.w0_A < opt.grid_step || m.w0_B < opt.grid_step)
        throw ValidationError("moba: initial wealth must be at least one grid step");
}

// Backward induction with layers materialized every `lookahead` rounds; both
// winp and sur expand the exact transition tree between layers.
inline SolveResult solve_blockwise(const MobaModel& m, const SolveOptions& opt) {
    Solver sv(m, opt);
    const std::int64_t T = m.horizon, L = opt.lookahead;
    const std::int64_t K = (T - 1) / L; // layer times L, 2L, ..., K*L, all < T

    SolveResult res;
    res.grid_step = opt.grid_step;
    res.lookahead = L;

    std::vector<Layer> boxes(static_cast<std::size_t>(K) + 1);
    {
        double lo_a = m.w0_A, hi_a = m.w0_A, lo_b = m.w0_B, hi_b = m.w0_B;
        std::int64_t prev = 0;
        for (std::int64_t k = 1; k <= K; ++k) {
            boxes[k] = make_box(m, sv.rt, sv.step, prev, k * L, lo_a, hi_a, lo_b, hi_b);
            lo_a = static_cast<double>(boxes[k].ia_lo) * sv.step;
            hi_a = static_cast<double>(boxes[k].ia_hi) * sv.step;
            lo_b = static_cast<double>(boxes[k].ib_lo) * sv.step;
            hi_b = static_cast<double>(boxes[k].ib_hi) * sv.step;
            prev = k * L;
        }
    }

    std::vector<Layer> kept;
    if (opt.retain_layers) kept.reserve(static_cast<std::size_t>(K));
    Layer roll_a, roll_b; // ping-pong storage when layers are not retained
    const Layer* next = nullptr;
    double mart = 0.0;

    for (std::int64_t k = K; k >= 1; --k) {
        Layer cur = boxes[k];
        cur.winp.assign(cur.cells(), 0.0);
        cur.sur.assign(cur.cells(), 0.0);
        for (std::int64_t c = cur.c_lo; c <= cur.c_hi; ++c) {
            for (std::int64_t ia = cur.ia_lo; ia <= cur.ia_hi; ++ia) {
                const double wa = static_cast<double>(ia) * sv.step;
                for (std::int64_t ib = cur.ib_lo; ib <= cur.ib_hi; ++ib) {
                    const double wb = static_cast<double>(ib) * sv.step;
                    const auto v = sv.eval(cur.t, wa, wb, c, next);
                    const std::size_t i = cur.index(c, ia, ib);
                    cur.winp[i] = v.first;
                    cur.sur[i] = v.second;
                }
            }
        }

        // Martingale reconstruction on a strided sample: re-expand one step
        // with subtree-evaluated successors and compare with the stored value.
        {
            const std::int64_t stride_a = std::max<std::int64_t>(1, cur.na() / 8);
            const std::int64_t stride_b = std::max<std::int64_t>(1, cur.nb() / 8);
            for (std::int64_t c = cur.c_lo; c <= cur.c_hi; ++c)
                for (std::int64_t ia = cur.ia_lo; ia <= cur.ia_hi; ia += stride_a)
                    for (std::int64_t ib = cur.ib_lo; ib <= cur.ib_hi; ib += stride_b) {
                        const double wa = static_cast<double>(ia) * sv.step;
                        const double wb = static_cast<double>(ib) * sv.step;
                        const std::int64_t u = cur.t + 1;
                        double rec;
                        if (u == T) {
                            rec = sv.eval(cur.t, wa, wb, c, next).first;
                        } else {
                            const double r = sv.rt.r[u], q = sv.rt.q[u];
                            const double pt =
                                r > 0.0 ? teamfight_win_prob(wa, wb, m.lambda, m.theta) : 0.0;
                            const bool avail = gc_available(m, c, u);
                            const std::int64_t cf = clock_after_farm(c);
                            const std::int64_t ck = avail ? m.gc_respawn_delay : cf;
                            const double gw = avail ? sv.rt.w[u] + m.delta_GC : sv.rt.w[u];
                            double wf = 0.0, waw = 0.0, wbw = 0.0;
                            if (r < 1.0)
                                wf = sv.eval(u, wa + sv.rt.f[u], wb + sv.rt.f[u], cf, next).first;
                            if (r > 0.0 && q < 1.0) {
                                waw = sv.eval(u, wa + gw, wb + sv.rt.l[u], ck, next).first;
                                wbw = sv.eval(u, wa + sv.rt.l[u], wb + gw, ck, next).first;
                            }
                            rec = (1.0 - r) * wf +
                                  r * (pt * (q + (1.0 - q) * waw) + (1.0 - pt) * (1.0 - q) * wbw);
                        }
                        mart = std::max(mart, std::fabs(rec - cur.winp[cur.index(c, ia, ib)]));
                    }
        }

        if (k == 1) {
            double gap = 0.0;
            for (std::int64_t c = cur.c_lo; c <= cur.c_hi; ++c)
                for (std::int64_t ia = cur.ia_lo; ia <= cur.ia_hi; ++ia)
                    for (std::int64_t ib = cur.ib_lo; ib <= cur.ib_hi; ++ib) {
                        const std::size_t i = cur.index(c, ia, ib);
                        if (ia < cur.ia_hi)
                            gap = std::max(gap,
                                           std::fabs(cur.winp[cur.index(c, ia + 1, ib)] -
                                                     cur.winp[i]));
                        if (ib < cur.ib_hi)
                            gap = std::max(gap,
                                           std::fabs(cur.winp[cur.index(c, ia, ib + 1)] -
                                                     cur.winp[i]));
                    }
            res.rounding_residual = gap / 2.0;
        }

        if (opt.retain_layers) {
            kept.push_back(std::move(cur));
            next = &kept.back();
        } else if (k % 2 == 0) {
            roll_a = std::move(cur);
            next = &roll_a;
        } else {
            roll_b = std::move(cur);
            next = &roll_b;
        }
    }

    const std::int64_t c0 = std::max<std::int64_t>(0, m.gc_spawn_round - 1);
    const auto root = sv.eval(0, m.w0_A, m.w0_B, c0, next);
    res.root_winp = root.first;
    res.root_surprise = root.second;

    // Root martingale reconstruction against subtree-evaluated children.
    {
        const std::int64_t u = 1;
        double rec;
        if (u == T) {
            rec = root.first;
        } else {
            const double r = sv.rt.r[u], q = sv.rt.q[u];
            const double pt =
                r > 0.0 ? teamfight_win_prob(m.w0_A, m.w0_B, m.lambda, m.theta) : 0.0;
            const bool avail = gc_available(m, c0, u);
            const std::int64_t cf = clock_after_farm(c0);
            const std::int64_t ck = avail ? m.gc_respawn_delay : cf;
            const double gw = avail ? sv.rt.w[u] + m.delta_GC : sv.rt.w[u];
            double wf = 0.0, waw = 0.0, wbw = 0.0;
            if (r < 1.0)
                wf = sv.eval(u, m.w0_A + sv.rt.f[u], m.w0_B + sv.rt.f[u], cf, next).first;
            if (r > 0.0 && q < 1.0) {
                waw = sv.eval(u, m.w0_A + gw, m.w0_B + sv.rt.l[u], ck, next).first;
                wbw = sv.eval(u, m.w0_A + sv.rt.l[u], m.w0_B + gw, ck, next).first;
            }
            rec = (1.0 - r) * wf +
                  r * (pt * (q + (1.0 - q) * waw) + (1.0 - pt) * (1.0 - q) * wbw);
        }
        mart = std::max(mart, std::fabs(rec - res.root_winp));
    }
    res.martingale_residual = mart;
    if (mart > 1e-10)
        throw OracleError("moba: martingale residual exceeded 1e-10 before rounding");

    if (opt.retain_layers) {
        std::reverse(kept.begin(), kept.end()); // ascending t
        res.layers = std::move(kept);
    }
    return res;
}

// Variant with layers at every round: winp still expands the exact tree
// `lookahead` rounds deep, but surprise uses the plain one-step recursion.
inline SolveResult solve_onestep_sur(const MobaModel& m, const SolveOptions& opt) {
    Solver sv(m, opt);
    const std::int64_t T = m.horizon, L = opt.lookahead;

    SolveResult res;
    res.grid_step = opt.grid_step;
    res.lookahead = L;

    std::vector<Layer> boxes(static_cast<std::size_t>(T));
    {
        double lo_a = m.w0_A, hi_a = m.w0_A, lo_b = m.w0_B, hi_b = m.w0_B;
        for (std::int64_t t = 1; t <= T - 1; ++t) {
            boxes[t] = make_box(m, sv.rt, sv.step, t - 1, t, lo_a, hi_a, lo_b, hi_b);
            lo_a = static_cast<double>(boxes[t].ia_lo) * sv.step;
            hi_a = static_cast<double>(boxes[t].ia_hi) * sv.step;
            lo_b = static_cast<double>(boxes[t].ib_lo) * sv.step;
            hi_b = static_cast<double>(boxes[t].ib_hi) * sv.step;
        }
    }

    // ring[d] holds the layer at time t + 1 + d (winp always, sur at d = 0).
    std::vector<Layer> ring;
    for (std::int64_t t = T - 1; t >= 1; --t) {
        Layer cur = boxes[t];
        cur.winp.assign(cur.cells(), 0.0);
        cur.sur.assign(cur.cells(), 0.0);
        const Layer* winp_leaf = nullptr;
        if (t + L <= T - 1) winp_leaf = &ring[static_cast<std::size_t>(L) - 1];
        const Layer* next = ring.empty() ? nullptr : &ring[0];
        for (std::int64_t c = cur.c_lo; c <= cur.c_hi; ++c)
            for (std::int64_t ia = cur.ia_lo; ia <= cur.ia_hi; ++ia)
                for (std::int64_t ib = cur.ib_lo; ib <= cur.ib_hi; ++ib) {
                    const double wa = static_cast<double>(ia) * sv.step;
                    const double wb = static_cast<double>(ib) * sv.step;
                    const double wp = sv.eval_winp(t, wa, wb, c, winp_leaf);
                    const std::size_t i = cur.index(c, ia, ib);
                    cur.winp[i] = wp;
                    cur.sur[i] = sv.one_step_sur(t, wa, wb, c, wp, next);
                }
        ring.insert(ring.begin(), std::move(cur));
        if (std::cmp_greater(ring.size(), L)) ring.pop_back();
    }

    const std::int64_t c0 = std::max<std::int64_t>(0, m.gc_spawn_round - 1);
    const Layer* winp_leaf = nullptr;
    if (L <= T - 1) winp_leaf = &ring[static_cast<std::size_t>(L) - 1];
    const Layer* next = ring.empty() ? nullptr : &ring[0];
    res.root_winp = sv.eval_winp(0, m.w0_A, m.w0_B, c0, winp_leaf);
    res.root_surprise = sv.one_step_sur(0, m.w0_A, m.w0_B, c0, res.root_winp, next);
    return res;
}

} // namespace detail

// Backward-induction solution of the MOBA game on a wealth grid. Between
// materialized layers the transition tree is expanded with exact wealth;
// successor wealth is rounded to the grid only at layer boundaries.
inline SolveResult solve(const MobaModel& m, const SolveOptions& opt = {}) {
    const detail::RoundTables rt = detail::make_tables(m);
    detail::check_solve_inputs(m, opt, rt);
    if (opt.lookahead_sur) return detail::solve_blockwise(m, opt);
    return detail::solve_onestep_sur(m, opt);
}

struct McResult {
    double winp = 0.0;
    double winp_se = 0.0;
    double surprise = 0.0;
    double surprise_se = 0.0;
    std::int64_t episodes = 0;
};

// Monte Carlo oracle: simulates the exact (ungridded) chain and evaluates
// the belief at every visited state from the solver's retained layers via
// the same exact-tree rule, so on-grid models reproduce solve() bit for bit
// in expectation. Deterministic per (seed, episode index).
inline McResult mc_solve(const MobaModel& m, std::int64_t episodes, std::uint64_t seed,
                         SolveOptions opt = {}) {
    if (episodes < 1) throw ValidationError("moba: episodes must be >= 1");
    opt.retain_layers = true;
    opt.lookahead_sur = true;
    const SolveResult sol = solve(m, opt);
    detail::Solver sv(m, opt);

    const auto belief_layer = [&](std::int64_t t) -> const detail::Layer* {
        for (const auto& ly : sol.layers)
            if (ly.t > t) return &ly;
        return nullptr;
    };

    double mean_w = 0.0, m2_w = 0.0, mean_s = 0.0, m2_s = 0.0;
    for (std::int64_t e = 0; e < episodes; ++e) {
        CounterRng rng(seed, static_cast<std::uint64_t>(e));
        MobaState s{0, m.w0_A, m.w0_B, std::max<std::int64_t>(0, m.gc_spawn_round - 1)};
        double b = sol.root_winp;
        double sur_sum = 0.0;
        double win = 0.0;
        for (;;) {
            const auto branches = transition(m, s);
            double u = rng.next_double();
            const TransitionBranch* pick = &branches.back();
            for (const auto& br : branches) {
                if (u < br.prob) {
                    pick = &br;
                    break;
                }
                u -= br.prob;
            }
            if (pick->outcome == Outcome::kAWins) {
                sur_sum += std::fabs(1.0 - b);
                win = 1.0;
                break;
            }
            if (pick->outcome == Outcome::kBWins) {
                sur_sum += b;
                break;
            }
            const double bn =
                sv.eval(pick->next.t, pick->next.w_a, pick->next.w_b, pick->next.gc_clock,
                        belief_layer(pick->next.t))
                    .first;
            sur_sum += std::fabs(bn - b);
            b = bn;
            s = pick->next;
        }
        const double n = static_cast<double>(e + 1);
        const double dw = win - mean_w;
        mean_w += dw / n;
        m2_w += dw * (win - mean_w);
        const double ds = sur_sum - mean_s;
        mean_s += ds / n;
        m2_s += ds * (sur_sum - mean_s);
    }

    McResult out;
    out.episodes = episodes;
    out.winp = mean_w;
    out.surprise = mean_s;
    if (episodes > 1) {
        const double n = static_cast<double>(episodes);
        out.winp_se = std::sqrt(m2_w / (n - 1.0) / n);
        out.surprise_se = std::sqrt(m2_s / (n - 1.0) / n);
    }
    return out;
}

struct GcCurvePoint {
    double delta_gc;
    double surprise;
};

struct OptimizeResult {
    double delta_gc_star = 0.0;
    std::vector<GcCurvePoint> curve;
};

// Evaluates solve() across candidate Game-Changer rewards; argmax with ties
// toward the smaller reward.
inline OptimizeResult optimize_gc(const MobaModel& tmpl, const std::vector<double>& gc_grid,
                                  const SolveOptions& opt = {}) {
    if (gc_grid.empty())
        throw ValidationError("moba: gc_grid must be nonempty");
    OptimizeResult out;
    double best = -1.0;
    for (const double g : gc_grid) {
        MobaModel m = tmpl;
        m.delta_GC = g;
        const SolveResult r = solve(m, opt);
        out.curve.push_back({g, r.root_surprise});
        if (r.root_surprise > best ||
            (r.root_surprise == best && g < out.delta_gc_star)) {
            best = r.root_surprise;
            out.delta_gc_star = g;
        }
    }
    return out;
}

struct LambdaRow {
    double lambda;
    double delta_gc_star;
    double max_surprise;
    std::vector<GcCurvePoint> curve;
};

// Per-lambda reward optimization (lambda >= 1 by convention: team A is the
// stronger side).
inline std::vector<LambdaRow> sweep_lambda(const MobaModel& tmpl,
                                           const std::vector<double>& lambdas,
                                           const std::vector<double>& gc_grid,
                                           const SolveOptions& opt = {}) {
    if (lambdas.empty())
        throw ValidationError("moba: lambda list must be nonempty");
    std::vector<LambdaRow> rows;
    for (const double lam : lambdas) {
        if (!(lam >= 1.0))
            throw ValidationError("moba: sweep requires lambda >= 1");
        MobaModel m = tmpl;
        m.lambda = lam;
        const OptimizeResult r = optimize_gc(m, gc_grid, opt);
        double best = 0.0;
        for (const auto& pt : r.curve)
            if (pt.delta_gc == r.delta_gc_star) best = pt.surprise;
        rows.push_back({lam, r.delta_gc_star, best, r.curve});
    }
    return rows;
}

struct ConvergenceRow {
    double grid_step;
    double root_winp;
    double root_surprise;
};

// Root values across successive halvings of the grid step.
inline std::vector<ConvergenceRow> convergence_table(const MobaModel& m,
                                                     const SolveOptions& base,
                                                     int halvings) {
    if (halvings < 0)
        throw ValidationError("moba: halvings must be >= 0");
    std::vector<ConvergenceRow> rows;
    SolveOptions opt = base;
    for (int i = 0; i <= halvings; ++i) {
        const SolveResult r = solve(m, opt);
        rows.push_back({opt.grid_step, r.root_winp, r.root_surprise});
        opt.grid_step /= 2.0;
    }
    return rows;
}

} // namespace gamechanger::moba
