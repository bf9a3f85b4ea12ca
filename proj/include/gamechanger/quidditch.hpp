#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>

#include "gamechanger/errors.hpp"

namespace gamechanger::quidditch {

// Random-walk game: each round the Snitch is caught with probability q
// (ending the game, x points to the catcher, catcher wins ties); otherwise a
// goal round, team A scoring with probability p. The analysis below works in
// the canonical orientation p <= 1/2; inputs with p > 1/2 are mirrored
// (p -> 1-p, score difference delta -> -delta) and results mapped back.
struct QuidditchParams {
    double p;
    double q;
    bool swapped; // true when analysis internally runs on (1-p, -delta)

    QuidditchParams(double p_, double q_) : p(p_), q(q_), swapped(p_ > 0.5) {
        if (!(p > 0.0) || !(p < 1.0))
            throw ValidationError("quidditch: p must lie strictly in (0,1)");
        if (!(q > 0.0) || !(q < 1.0))
            throw ValidationError("quidditch: q must lie strictly in (0,1)");
    }

    double canonical_p() const { return swapped ? 1.0 - p : p; }
};

struct SpectralConstants {
    double kappa;
    double alpha;
    double beta;
    double alpha_hat;
    double beta_hat;
};

struct SurpriseExpansion {
    double c0, c1, c2, c3;
    double c1_hat, c2_hat, c3_hat;
};

struct RoundSurprise {
    double final_part;     // catch this round: belief jumps to the realized outcome
    double non_final_part; // goal round: belief steps to a neighbor difference
};

struct RootBounds {
    double theta1;
    double theta2;
    double upper_bound; // max(1, theta1); surprise strictly decreases past it
};

namespace detail {

// Integer power with exponent >= 0; underflow to 0 is fine (terms vanish).
inline double ipow(double b, std::int64_t e) {
    double r = 1.0;
    while (e > 0) {
        if (e & 1) r *= b;
        b *= b;
        e >>= 1;
    }
    return r;
}

} // namespace detail

// kappa via 1 - 4p(1-p)(1-q)^2 = q(2-q) + ((1-2p)(1-q))^2, which avoids the
// cancellation near p=1/2, q->0. beta forms multiply by (1+kappa)/(1+kappa)
// so they stay stable as kappa -> 1 and give beta = beta_hat = 0 at q = 1.
inline SpectralConstants spectral_constants(double p, double q) {
    const double s = (1.0 - 2.0 * p) * (1.0 - q);
    const double kappa = std::sqrt(q * (2.0 - q) + s * s);
    const double beta = 2.0 * (1.0 - p) * (1.0 - q) / (1.0 + kappa);
    const double beta_hat = 2.0 * p * (1.0 - q) / (1.0 + kappa);
    return {kappa, 1.0 / beta_hat, beta, 1.0 / beta, beta_hat};
}

inline SpectralConstants spectral_constants(const QuidditchParams& params) {
    return spectral_constants(params.p, params.q);
}

namespace detail {

// Belief in canonical orientation (p <= 1/2, delta as given). Three branches
// that agree at delta = +-x.
inline double belief_canonical(double p, double q, std::int64_t x, std::int64_t delta) {
    const SpectralConstants sc = spectral_constants(p, q);
    const double b = sc.beta, bh = sc.beta_hat;
    const double m = 1.0 - b * bh;
    if (delta >= x)
        return 1.0 - ipow(b, delta - x) * (1.0 - bh) * (1.0 - p + ipow(b, 2 * x + 1) * p) / m;
    if (delta <= -x)
        return ipow(bh, -delta - x) * (1.0 - b) * (p + (1.0 - p) * ipow(bh, 2 * x + 1)) / m;
    return p + (ipow(bh, x - delta + 1) * (1.0 - b) * (1.0 - p)
                - ipow(b, x + delta + 1) * (1.0 - bh) * p) / m;
}

} // namespace detail

// Probability that team A wins from score difference delta with Snitch score
// x. Exact team-swap duality and exact b(delta) + b(-delta) = 1 at p = 1/2
// hold because the mirrored evaluations share one canonical code path.
inline double belief(const QuidditchParams& params, std::int64_t x, std::int64_t delta) {
    if (x < 0) throw ValidationError("quidditch: snitch score x must be >= 0");
    const double pc = params.canonical_p();
    if (params.swapped)
        return 1.0 - detail::belief_canonical(pc, params.q, x, -delta);
    if (pc == 0.5 && delta < 0)
        return 1.0 - detail::belief_canonical(pc, params.q, x, -delta);
    return detail::belief_canonical(pc, params.q, x, delta);
}

// Expected number of rounds spent at score difference delta, starting from 0.
// Independent of x: the difference walk does not see the Snitch score.
inline double visits(const QuidditchParams& params, std::int64_t delta) {
    const double pc = params.canonical_p();
    const std::int64_t d = params.swapped ? -delta : delta;
    const SpectralConstants sc = spectral_constants(pc, params.q);
    if (d >= 0) return detail::ipow(sc.beta_hat, d) / sc.kappa;
    return detail::ipow(sc.beta, -d) / sc.kappa;
}

// Per-round expected surprise contributions at score difference delta.
inline RoundSurprise round_surprise(const QuidditchParams& params, std::int64_t x, std::int64_t delta) {
    if (x < 0) throw ValidationError("quidditch: snitch score x must be >= 0");
    const double pc = params.canonical_p();
    const double q = params.q;
    const std::int64_t d = params.swapped ? -delta : delta;

    const double b = detail::belief_canonical(pc, q, x, d);
    // Catch outcome: |delta| <= x means the catcher's x points decide (ties
    // go to the catcher), so A wins iff A catches, with probability p.
    double catch_win;
    if (d > x) catch_win = 1.0;
    else if (d < -x) catch_win = 0.0;
    else catch_win = pc;
    const double final_part = q * (catch_win * (1.0 - b) + (1.0 - catch_win) * b);

    const double b_up = detail::belief_canonical(pc, q, x, d + 1);
    const double b_dn = detail::belief_canonical(pc, q, x, d - 1);
    const double non_final =
        (1.0 - q) * (pc * std::fabs(b_up - b) + (1.0 - pc) * std::fabs(b - b_dn));
    return {final_part, non_final};
}

// Term-by-term expected overall surprise, sum over delta of s_delta * v_delta
// with compensated summation. Cross-check path for the closed form.
inline double surprise_series(const QuidditchParams& params, std::int64_t x) {
    if (x < 0) throw ValidationError("quidditch: snitch score x must be >= 0");
    const std::int64_t window =
        x + static_cast<std::int64_t>(std::ceil(40.0 / params.q)) + 10;
    double sum = 0.0, comp = 0.0;
    for (std::int64_t d = -window; d <= window; ++d) {
        const RoundSurprise s = round_surprise(params, x, d);
        const double term = (s.final_part + s.non_final_part) * visits(params, d);
        const double y = term - comp;
        const double t = sum + y;
        comp = (t - sum) - y;
        sum = t;
    }
    return sum;
}

namespace detail {

// Expansion coefficients in canonical orientation. Grouping of the closed
// form E[surprise](x) = C0 + (C1 + C2 x) beta^x + C3 (beta^2 beta_hat)^x
//                          + (C1h + C2h x) beta_hat^x + C3h (beta beta_hat^2)^x.
inline SurpriseExpansion expansion_canonical(double p, double q) {
    const SpectralConstants sc = spectral_constants(p, q);
    const double b = sc.beta, bh = sc.beta_hat, k = sc.kappa;
    const double m = 1.0 - b * bh;
    const double A = (1.0 - q) * (1.0 - b) * (1.0 - bh) / (k * m);
    const double B = q / (k * m);
    const double one_m_2p = 1.0 - 2.0 * p;

    SurpriseExpansion e{};
    e.c0 = 2.0 * p * (1.0 - p);
    e.c1 = A * p * (b * (p + (1.0 - p) * bh) + p * b + (1.0 - p)) / m
         - B * one_m_2p * (1.0 - bh) * p * b / m
         - B * 2.0 * p * (1.0 - p) * b * m / (1.0 - b)
         + B * p * b * bh * (1.0 - b) / m;
    e.c2 = A * p * (p * b + 1.0 - p) - B * one_m_2p * (1.0 - bh) * p * b;
    e.c3 = B * 2.0 * p * (1.0 - p) * b * b * bh * (1.0 - bh) / m;
    if (p == 0.5) {
        // Mathematically identical at p = 1/2 (beta == beta_hat bitwise);
        // copy so the hatted/unhatted halves coincide exactly.
        e.c1_hat = e.c1;
        e.c2_hat = e.c2;
        e.c3_hat = e.c3;
    } else {
        e.c1_hat = A * (1.0 - p) * ((p + (1.0 - p) * bh) + bh * (p * b + 1.0 - p)) / m
                 + B * (b * (1.0 - bh) * (1.0 - p) * bh / m
                        - 2.0 * p * (1.0 - p) * bh * m / (1.0 - bh)
                        + one_m_2p * (1.0 - b) * (1.0 - p) * bh / m);
        e.c3_hat = B * 2.0 * p * (1.0 - p) * b * bh * bh * (1.0 - b) / m;
        e.c2_hat = A * (1.0 - p) * (p + (1.0 - p) * bh) + B * one_m_2p * (1.0 - b) * (1.0 - p) * bh;
    }
    return e;
}

} // namespace detail

// Coefficients valid for the params' own orientation: for p > 1/2 the
// canonical coefficients swap roles (C_i <-> C_i_hat), matching the swap
// beta <-> beta_hat in spectral_constants.
inline SurpriseExpansion expansion_coefficients(const QuidditchParams& params) {
    const SurpriseExpansion e = detail::expansion_canonical(params.canonical_p(), params.q);
    if (!params.swapped) return e;
    return {e.c0, e.c1_hat, e.c2_hat, e.c3_hat, e.c1, e.c2, e.c3};
}

inline double assemble_expansion(const SurpriseExpansion& e, const SpectralConstants& sc, double x) {
    const double bx = std::pow(sc.beta, x);
    const double bhx = std::pow(sc.beta_hat, x);
    return e.c0 + (e.c1 + e.c2 * x) * bx + e.c3 * bx * bx * bhx
         + (e.c1_hat + e.c2_hat * x) * bhx + e.c3_hat * bx * bhx * bhx;
}

// Expected overall surprise as a function of (real) Snitch score x.
inline double surprise_closed_form(const QuidditchParams& params, double x) {
    if (!(x >= 0.0)) throw ValidationError("quidditch: snitch score x must be >= 0");
    const double pc = params.canonical_p();
    const SpectralConstants sc = spectral_constants(pc, params.q);
    if (!(sc.beta < 1.0) || !(sc.beta_hat < 1.0))
        throw ValidationError("quidditch: invalid spectral state (beta >= 1)");
    const SurpriseExpansion e = detail::expansion_canonical(pc, params.q);
    return assemble_expansion(e, sc, x);
}

inline double dsurprise_dx(const QuidditchParams& params, double x) {
    const double pc = params.canonical_p();
    const SpectralConstants sc = spectral_constants(pc, params.q);
    const SurpriseExpansion e = detail::expansion_canonical(pc, params.q);
    const double lb = std::log(sc.beta), lbh = std::log(sc.beta_hat);
    const double bx = std::pow(sc.beta, x);
    const double bhx = std::pow(sc.beta_hat, x);
    return (e.c1 * lb + e.c2 + e.c2 * lb * x) * bx
         + e.c3 * (2.0 * lb + lbh) * bx * bx * bhx
         + (e.c1_hat * lbh + e.c2_hat + e.c2_hat * lbh * x) * bhx
         + e.c3_hat * (lb + 2.0 * lbh) * bx * bhx * bhx;
}

// theta1/theta2 are the vanishing points of the dominant derivative factors;
// the optimum cannot exceed U = max(1, theta1).
inline RootBounds root_bounds(const QuidditchParams& params) {
    const double pc = params.canonical_p();
    const SpectralConstants sc = spectral_constants(pc, params.q);
    const SurpriseExpansion e = detail::expansion_canonical(pc, params.q);
    const double theta1 = -e.c1 / e.c2 - 1.0 / std::log(sc.beta);
    const double theta2 = -e.c1_hat / e.c2_hat - 1.0 / std::log(sc.beta_hat);
    return {theta1, theta2, std::max(1.0, theta1)};
}

// Small-q approximation of theta1. Meaningless at p = 1/2 (it collapses to 0
// while the interval (p, 1/2] behaves differently), hence rejected.
inline double taylor_theta1(const QuidditchParams& params) {
    if (params.p >= 0.5)
        throw ValidationError("quidditch: taylor_theta1 requires p < 1/2");
    return (1.0 / (2.0 * params.q)) * ((1.0 - params.p) / params.p - 1.0);
}

namespace detail {

// Argmax of the closed form over integers [0, x_hi]; ties to the smaller x.
// Incremental power updates keep the scan O(1) per step.
inline std::int64_t argmax_surprise(double p, double q, std::int64_t x_hi) {
    const SpectralConstants sc = spectral_constants(p, q);
    const SurpriseExpansion e = expansion_canonical(p, q);
    const double b = sc.beta, bh = sc.beta_hat;
    double bx = 1.0, bhx = 1.0;
    double best = -std::numeric_limits<double>::infinity();
    std::int64_t best_x = 0;
    for (std::int64_t x = 0; x <= x_hi; ++x) {
        const double v = e.c0 + (e.c1 + e.c2 * static_cast<double>(x)) * bx
                       + e.c3 * bx * bx * bhx
                       + (e.c1_hat + e.c2_hat * static_cast<double>(x)) * bhx
                       + e.c3_hat * bx * bhx * bhx;
        if (v > best) {
            best = v;
            best_x = x;
        }
        bx *= b;
        bhx *= bh;
    }
    return best_x;
}

} // namespace detail

// Estimator of the optimal Snitch score: argmax over {0, ..., ceil(U)}.
inline std::int64_t x_tilde(const QuidditchParams& params) {
    const RootBounds rb = root_bounds(params);
    const auto hi = static_cast<std::int64_t>(std::ceil(rb.upper_bound));
    return detail::argmax_surprise(params.canonical_p(), params.q, hi);
}

// Reference argmax over [0, x_max]; x_max < 0 selects the default margin
// 4*ceil(U) + 10, comfortably past the proven decrease threshold.
inline std::int64_t optimal_x_bruteforce(const QuidditchParams& params, std::int64_t x_max = -1) {
    if (x_max < 0) {
        const RootBounds rb = root_bounds(params);
        x_max = 4 * static_cast<std::int64_t>(std::ceil(rb.upper_bound)) + 10;
    }
    return detail::argmax_surprise(params.canonical_p(), params.q, x_max);
}

// Scalar factor whose positivity on q in (0,1) certifies that the symmetric
// game loses surprise when the Snitch score moves off zero.
inline double claim3_expression(double q) {
    const double root = std::sqrt(q * (2.0 - q));
    const double denom_inner = q - 2.0 + root;
    return -q * (q * q - 2.0 * q - 1.0 + 2.0 * root)
         / (2.0 * root * denom_inner * denom_inner);
}

} // namespace gamechanger::quidditch
