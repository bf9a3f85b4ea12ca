#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "gamechanger/quidditch.hpp"

using namespace gamechanger;
using namespace gamechanger::quidditch;

namespace {
// Independently evaluated at 50-digit precision, truncated to 20 digits.
constexpr double kKappa_03_01 = 0.56533176100410279355;
constexpr double kAlpha_03_01 = 2.8987625203779681362;
constexpr double kBeta_03_01 = 0.80494118332573556751;
constexpr double kAlphaHat_03_01 = 1.2423267944477006298;
constexpr double kBetaHat_03_01 = 0.34497479285388667179;

bool close_rel(double a, double b, double tol = 1e-14) {
    return std::fabs(a - b) <= tol * std::max(std::fabs(a), std::fabs(b));
}
} // namespace

TEST_CASE("parameter validation rejects boundaries") {
    REQUIRE_THROWS_AS(QuidditchParams(0.0, 0.5), ValidationError);
    REQUIRE_THROWS_AS(QuidditchParams(1.0, 0.5), ValidationError);
    REQUIRE_THROWS_AS(QuidditchParams(0.5, 0.0), ValidationError);
    REQUIRE_THROWS_AS(QuidditchParams(0.5, 1.0), ValidationError);
    REQUIRE(QuidditchParams(0.7, 0.1).swapped);
    REQUIRE_FALSE(QuidditchParams(0.5, 0.1).swapped);
}

TEST_CASE("spectral constants match high-precision references") {
    const SpectralConstants sc = spectral_constants(QuidditchParams(0.3, 0.1));
    REQUIRE(close_rel(sc.kappa, kKappa_03_01));
    REQUIRE(close_rel(sc.alpha, kAlpha_03_01));
    REQUIRE(close_rel(sc.beta, kBeta_03_01));
    REQUIRE(close_rel(sc.alpha_hat, kAlphaHat_03_01));
    REQUIRE(close_rel(sc.beta_hat, kBetaHat_03_01));
    REQUIRE(sc.kappa > 0.0);
    REQUIRE(sc.kappa <= 1.0);
    REQUIRE(sc.beta < 1.0);
    REQUIRE(sc.beta_hat < 1.0);
}

TEST_CASE("spectral limit cases") {
    // Certain catch each round: no walk at all.
    const SpectralConstants one = spectral_constants(0.5, 1.0);
    REQUIRE(one.kappa == 1.0);
    REQUIRE(one.beta == 0.0);
    REQUIRE(one.beta_hat == 0.0);
    // Near-never-ending symmetric game: kappa -> 0+.
    const SpectralConstants tiny = spectral_constants(0.5, 1e-9);
    REQUIRE(tiny.kappa > 0.0);
    REQUIRE(tiny.kappa < 1e-4);
}

TEST_CASE("spectral duality under p -> 1-p") {
    // Bitwise when the complement pair is exactly representable.
    const SpectralConstants a = spectral_constants(0.25, 0.1);
    const SpectralConstants b = spectral_constants(0.75, 0.1);
    REQUIRE(a.beta == b.beta_hat);
    REQUIRE(a.beta_hat == b.beta);
    REQUIRE(a.kappa == b.kappa);
    // Otherwise the rounding of the literals themselves caps the agreement.
    const SpectralConstants c = spectral_constants(0.3, 0.1);
    const SpectralConstants d = spectral_constants(0.7, 0.1);
    REQUIRE(c.beta == Catch::Approx(d.beta_hat).epsilon(1e-14));
    REQUIRE(c.kappa == Catch::Approx(d.kappa).epsilon(1e-14));
}

TEST_CASE("belief reference values") {
    const QuidditchParams params(0.3, 0.1);
    REQUIRE(close_rel(belief(params, 2, 0), 0.16587296821001566897));
    REQUIRE(close_rel(belief(params, 2, 5), 0.62098127146368619644));
    REQUIRE(close_rel(belief(params, 2, -4), 0.0097511902370270278448));
    REQUIRE(close_rel(belief(QuidditchParams(0.5, 0.2), 0, 1), 0.75));
}

TEST_CASE("belief symmetry is exact at p=1/2") {
    const QuidditchParams params(0.5, 0.2);
    REQUIRE(belief(params, 3, 0) == 0.5);
    for (std::int64_t d = 1; d <= 12; ++d)
        REQUIRE(belief(params, 3, d) + belief(params, 3, -d) == 1.0);
}

TEST_CASE("team-swap duality is exact") {
    const QuidditchParams a(0.25, 0.1), b(0.75, 0.1);
    for (std::int64_t d = -8; d <= 8; ++d)
        REQUIRE(belief(b, 2, d) == 1.0 - belief(a, 2, -d));
    const QuidditchParams c(0.3, 0.1), e(0.7, 0.1);
    for (std::int64_t d = -8; d <= 8; ++d)
        REQUIRE(belief(e, 2, d) == Catch::Approx(1.0 - belief(c, 2, -d)).margin(1e-14));
}

TEST_CASE("belief branches agree at the overlap points") {
    // Outer-branch and middle-branch expressions evaluated side by side.
    const double p = 0.3, q = 0.1;
    const SpectralConstants sc = spectral_constants(p, q);
    const double b = sc.beta, bh = sc.beta_hat, m = 1.0 - b * bh;
    for (std::int64_t x : {0, 1, 2, 5, 9}) {
        const double up_outer = 1.0 - (1.0 - bh) * (1.0 - p + std::pow(b, 2 * x + 1) * p) / m;
        const double up_mid = p + (std::pow(bh, 1) * (1.0 - b) * (1.0 - p)
                                   - std::pow(b, 2 * x + 1) * (1.0 - bh) * p) / m;
        REQUIRE(up_outer == Catch::Approx(up_mid).epsilon(1e-12));
        const double dn_outer = (1.0 - b) * (p + (1.0 - p) * std::pow(bh, 2 * x + 1)) / m;
        const double dn_mid = p + (std::pow(bh, 2 * x + 1) * (1.0 - b) * (1.0 - p)
                                   - std::pow(b, 1) * (1.0 - bh) * p) / m;
        REQUIRE(dn_outer == Catch::Approx(dn_mid).epsilon(1e-12));
    }
}

TEST_CASE("belief is monotone with correct limits") {
    for (const double p : {0.2, 0.5, 0.65}) {
        for (const double q : {0.05, 0.3}) {
            const QuidditchParams params(p, q);
            const std::int64_t x = 4;
            double prev = -1.0;
            for (std::int64_t d = -x - 210; d <= x + 210; ++d) {
                const double bd = belief(params, x, d);
                REQUIRE(bd >= prev - 1e-15);
                REQUIRE(bd >= 0.0);
                REQUIRE(bd <= 1.0);
                prev = bd;
            }
            REQUIRE(belief(params, x, x + 200) > 1.0 - 1e-6);
            REQUIRE(belief(params, x, -x - 200) < 1e-6);
        }
    }
}

TEST_CASE("belief satisfies the one-step recurrence") {
    for (const double p : {0.15, 0.4, 0.5, 0.8}) {
        for (const double q : {0.02, 0.2, 0.6}) {
            const QuidditchParams params(p, q);
            const std::int64_t x = 3;
            for (std::int64_t d = -3 * x - 20; d <= 3 * x + 20; ++d) {
                double c;
                if (d > x) c = 1.0;
                else if (d < -x) c = 0.0;
                else c = p;
                const double lhs = belief(params, x, d);
                const double rhs = (1.0 - q) * (p * belief(params, x, d + 1)
                                                + (1.0 - p) * belief(params, x, d - 1))
                                 + q * c;
                REQUIRE(std::fabs(lhs - rhs) < 1e-10);
            }
        }
    }
}

TEST_CASE("visit reference values and normalization") {
    const QuidditchParams params(0.3, 0.1);
    REQUIRE(close_rel(visits(params, 0), 1.768872844193062558));
    REQUIRE(close_rel(visits(params, 3), 0.072620410965423969625));
    REQUIRE(close_rel(visits(params, -3), 0.92254818374594154005));
    const SpectralConstants sc = spectral_constants(params);
    REQUIRE(visits(params, 0) == 1.0 / sc.kappa);

    for (const double p : {0.3, 0.5, 0.75}) {
        for (const double q : {0.05, 0.2, 0.5}) {
            const QuidditchParams pr(p, q);
            double sum = 0.0;
            for (std::int64_t d = -4000; d <= 4000; ++d) sum += visits(pr, d);
            REQUIRE(std::fabs(sum - 1.0 / q) < 1e-9);
        }
    }
}

TEST_CASE("round surprise components") {
    const QuidditchParams sym(0.5, 0.2);
    const RoundSurprise rs = round_surprise(sym, 0, 0);
    REQUIRE(rs.final_part == 0.2 / 2.0);
    for (std::int64_t d = -6; d <= 6; ++d) {
        const RoundSurprise r = round_surprise(QuidditchParams(0.3, 0.1), 2, d);
        REQUIRE(r.final_part >= 0.0);
        REQUIRE(r.final_part <= 1.0);
        REQUIRE(r.non_final_part >= 0.0);
        REQUIRE(r.non_final_part <= 1.0);
    }
}

TEST_CASE("closed-form surprise reference values") {
    REQUIRE(close_rel(surprise_closed_form(QuidditchParams(0.3, 0.1), 2.0),
                      0.45533902884424216637, 1e-13));
    REQUIRE(close_rel(surprise_closed_form(QuidditchParams(0.5, 0.2), 3.0),
                      0.67599826388888888889, 1e-13));
    REQUIRE(close_rel(surprise_closed_form(QuidditchParams(0.2, 0.1), 16.0),
                      0.33004535972317647876, 1e-13));
    REQUIRE(close_rel(surprise_closed_form(QuidditchParams(0.2, 0.3), 5.0),
                      0.32229899555934170195, 1e-13));
    REQUIRE(close_rel(surprise_closed_form(QuidditchParams(0.45, 0.05), 1.0),
                      1.4793362437579566847, 1e-13));
}

TEST_CASE("closed form equals the term-by-term series") {
    for (const double p : {0.2, 0.45, 0.5, 0.7}) {
        for (const double q : {0.05, 0.3}) {
            const QuidditchParams params(p, q);
            for (const std::int64_t x : {0, 1, 3, 10}) {
                const double cf = surprise_closed_form(params, static_cast<double>(x));
                const double series = surprise_series(params, x);
                REQUIRE(cf == Catch::Approx(series).epsilon(1e-11));
            }
        }
    }
}

TEST_CASE("surprise is team-symmetric") {
    REQUIRE(surprise_closed_form(QuidditchParams(0.75, 0.1), 4.0)
            == surprise_closed_form(QuidditchParams(0.25, 0.1), 4.0));
    REQUIRE(surprise_closed_form(QuidditchParams(0.7, 0.1), 4.0)
            == Catch::Approx(surprise_closed_form(QuidditchParams(0.3, 0.1), 4.0))
                   .epsilon(1e-14));
}

TEST_CASE("expansion coefficient reference values") {
    const SurpriseExpansion e = expansion_coefficients(QuidditchParams(0.3, 0.1));
    REQUIRE(e.c0 == Catch::Approx(0.42).margin(1e-15));
    REQUIRE(close_rel(e.c1, -0.16143087453983377293, 1e-12));
    REQUIRE(close_rel(e.c2, 0.064042656504736675017, 1e-12));
    REQUIRE(close_rel(e.c3, 0.020848058116720843089, 1e-12));
    REQUIRE(close_rel(e.c1_hat, 0.24683465308751006503, 1e-12));
    REQUIRE(close_rel(e.c2_hat, 0.11135179292526233209, 1e-12));
    REQUIRE(close_rel(e.c3_hat, 0.0026607029787372606774, 1e-12));
}

TEST_CASE("expansion duality and p=1/2 degeneracy") {
    const SurpriseExpansion a = expansion_coefficients(QuidditchParams(0.25, 0.1));
    const SurpriseExpansion b = expansion_coefficients(QuidditchParams(0.75, 0.1));
    REQUIRE(a.c1 == b.c1_hat);
    REQUIRE(a.c2 == b.c2_hat);
    REQUIRE(a.c3 == b.c3_hat);
    REQUIRE(a.c1_hat == b.c1);

    const SurpriseExpansion s = expansion_coefficients(QuidditchParams(0.5, 0.25));
    REQUIRE(s.c1 == s.c1_hat);
    REQUIRE(s.c2 == s.c2_hat);
    REQUIRE(s.c3 == s.c3_hat);
    const SpectralConstants sc = spectral_constants(QuidditchParams(0.5, 0.25));
    REQUIRE(sc.beta == sc.beta_hat);
}

TEST_CASE("expansion reassembles the closed form") {
    for (const double p : {0.2, 0.5, 0.8}) {
        const QuidditchParams params(p, 0.15);
        const SurpriseExpansion e = expansion_coefficients(params);
        const SpectralConstants sc = spectral_constants(params);
        for (std::int64_t x = 0; x <= 50; ++x) {
            const double lhs = assemble_expansion(e, sc, static_cast<double>(x));
            const double rhs = surprise_closed_form(params, static_cast<double>(x));
            REQUIRE(lhs == Catch::Approx(rhs).epsilon(1e-10));
        }
    }
}

TEST_CASE("coefficient signs on a coarse grid") {
    for (double p = 0.05; p < 0.5 + 1e-9; p += 0.05) {
        for (double q = 0.05; q < 0.95 + 1e-9; q += 0.05) {
            const SurpriseExpansion e = expansion_coefficients(QuidditchParams(p, q));
            CAPTURE(p, q);
            REQUIRE(e.c0 > 0.0);
            REQUIRE(e.c2 > 0.0);
            REQUIRE(e.c3 > 0.0);
            REQUIRE(e.c1_hat > 0.0);
            REQUIRE(e.c2_hat > 0.0);
            REQUIRE(e.c3_hat > 0.0);
        }
    }
}

TEST_CASE("root bounds reference values") {
    REQUIRE(close_rel(root_bounds(QuidditchParams(0.25, 0.01)).theta1,
                      100.53150972289766049, 1e-11));
    REQUIRE(close_rel(root_bounds(QuidditchParams(0.3, 0.1)).theta1,
                      7.1292681694749179325, 1e-12));
    const RootBounds rb = root_bounds(QuidditchParams(0.3, 0.1));
    REQUIRE(rb.upper_bound == std::max(1.0, rb.theta1));
}

TEST_CASE("theta roots coincide at p=1/2 and theta2 stays small") {
    for (const double q : {0.05, 0.3, 0.8}) {
        const RootBounds rb = root_bounds(QuidditchParams(0.5, q));
        REQUIRE(rb.theta1 == rb.theta2);
        REQUIRE(rb.upper_bound >= 1.0);
    }
    for (const double p : {0.1, 0.3, 0.5}) {
        for (const double q : {0.05, 0.4, 0.9}) {
            REQUIRE(root_bounds(QuidditchParams(p, q)).theta2 <= 0.5);
        }
    }
}

TEST_CASE("taylor approximation of theta1") {
    REQUIRE(taylor_theta1(QuidditchParams(0.25, 0.05)) == 20.0);
    REQUIRE_THROWS_AS(taylor_theta1(QuidditchParams(0.5, 0.1)), ValidationError);
    REQUIRE_THROWS_AS(taylor_theta1(QuidditchParams(0.75, 0.1)), ValidationError);
    REQUIRE(std::fabs(taylor_theta1(QuidditchParams(0.499, 0.2))) < 0.02);
    // Remainder stays bounded as q shrinks at fixed p.
    for (const double q : {1e-2, 1e-3, 1e-4, 1e-5}) {
        const QuidditchParams params(0.3, q);
        const double diff = root_bounds(params).theta1 - taylor_theta1(params);
        REQUIRE(std::fabs(diff) < 25.0);
    }
}

TEST_CASE("optimal score searches") {
    for (double q = 0.1; q < 0.95; q += 0.2)
        REQUIRE(x_tilde(QuidditchParams(0.5, q)) == 0);
    REQUIRE(optimal_x_bruteforce(QuidditchParams(0.5, 0.3), 20) == 0);
    REQUIRE(optimal_x_bruteforce(QuidditchParams(0.5, 0.3), 40) == 0);
    REQUIRE(optimal_x_bruteforce(QuidditchParams(0.45, 0.05)) == 0);
    REQUIRE(optimal_x_bruteforce(QuidditchParams(0.3, 0.1)) == 0);

    const QuidditchParams interior(0.2, 0.1);
    REQUIRE(optimal_x_bruteforce(interior) == 16);
    REQUIRE(x_tilde(interior) == 16);
    const double at_opt = surprise_closed_form(interior, 16.0);
    REQUIRE(at_opt > surprise_closed_form(interior, 0.0));
    REQUIRE(at_opt > 2.0 * 0.2 * 0.8);
}

TEST_CASE("surprise dominates the final-jump lower bound and its limit") {
    for (const double p : {0.2, 0.35, 0.5}) {
        for (const double q : {0.05, 0.3, 0.7}) {
            const QuidditchParams params(p, q);
            for (const std::int64_t x : {0, 1, 5, 40}) {
                const double b0 = belief(params, x, 0);
                REQUIRE(surprise_closed_form(params, static_cast<double>(x))
                        >= 2.0 * b0 * (1.0 - b0) - 1e-12);
            }
            REQUIRE(std::fabs(surprise_closed_form(params, 1e4) - 2.0 * p * (1.0 - p)) < 1e-4);
        }
    }
}

TEST_CASE("derivative matches finite differences") {
    for (const double p : {0.2, 0.45}) {
        for (const double q : {0.1, 0.5}) {
            const QuidditchParams params(p, q);
            for (const double x : {0.5, 2.0, 7.0}) {
                const double h = 1e-6;
                const double fd = (surprise_closed_form(params, x + h)
                                   - surprise_closed_form(params, x - h)) / (2.0 * h);
                const double an = dsurprise_dx(params, x);
                REQUIRE(an == Catch::Approx(fd).margin(1e-7));
            }
        }
    }
}

TEST_CASE("claim-3 factor is positive away from the endpoints") {
    for (double q = 0.01; q < 1.0; q += 0.01)
        REQUIRE(claim3_expression(q) > 0.0);
}
