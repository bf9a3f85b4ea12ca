#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "gamechanger/quidditch.hpp"
#include "gamechanger/quidditch_oracle.hpp"

using namespace gamechanger;
using namespace gamechanger::quidditch;

TEST_CASE("dp beliefs agree with the closed form") {
    for (const double p : {0.2, 0.45, 0.5, 0.7}) {
        for (const double q : {0.05, 0.3}) {
            const QuidditchParams params(p, q);
            const std::int64_t x = 3;
            const DpSolution dp = dp_solve(params, x);
            for (std::int64_t d = -dp.window; d <= dp.window; ++d) {
                CAPTURE(p, q, d);
                REQUIRE(std::fabs(dp.belief_at(d) - belief(params, x, d)) < 1e-9);
            }
        }
    }
}

TEST_CASE("dp visits agree with the closed form") {
    const QuidditchParams params(0.3, 0.1);
    const DpSolution dp = dp_solve(params, 2);
    for (std::int64_t d = -20; d <= 20; ++d)
        REQUIRE(std::fabs(dp.visit_at(d) - visits(params, d)) < 1e-10);
}

TEST_CASE("dp expected surprise agrees with the closed form") {
    for (const double p : {0.2, 0.3, 0.5, 0.65}) {
        for (const double q : {0.1, 0.4}) {
            const QuidditchParams params(p, q);
            for (const std::int64_t x : {0, 2, 8}) {
                const DpSolution dp = dp_solve(params, x);
                const double cf = surprise_closed_form(params, static_cast<double>(x));
                CAPTURE(p, q, x);
                REQUIRE(std::fabs(dp.expected_surprise - cf) < 1e-8);
            }
        }
    }
}

TEST_CASE("dp at the symmetric point") {
    const DpSolution dp = dp_solve(QuidditchParams(0.5, 0.2), 3);
    REQUIRE(dp.belief_at(0) == Catch::Approx(0.5).margin(1e-12));
    REQUIRE(dp.residual < 1e-12);
}

TEST_CASE("dp rejects a window smaller than the catch band") {
    REQUIRE_THROWS_AS(dp_solve(QuidditchParams(0.3, 0.1), 5, 4), ValidationError);
}

TEST_CASE("episodes are deterministic and well-formed") {
    const QuidditchParams params(0.35, 0.15);
    const EpisodeTrace a = simulate_episode(params, 2, 99);
    const EpisodeTrace b = simulate_episode(params, 2, 99);
    REQUIRE(a.states == b.states);
    REQUIRE(a.surprise_total == b.surprise_total);
    REQUIRE(a.a_wins == b.a_wins);

    const EpisodeTrace c = simulate_episode(params, 2, 100);
    REQUIRE(a.states.size() >= 1);
    REQUIRE(c.states.size() >= 1);

    // Belief path starts at the closed-form prior and ends at certainty.
    REQUIRE(a.beliefs.front() == Catch::Approx(belief(params, 2, 0)).margin(1e-12));
    const double last = a.beliefs.back();
    REQUIRE((last == 0.0 || last == 1.0));
    REQUIRE(last == (a.a_wins ? 1.0 : 0.0));

    double total = 0.0;
    for (std::size_t i = 1; i < a.beliefs.size(); ++i)
        total += std::fabs(a.beliefs[i] - a.beliefs[i - 1]);
    REQUIRE(total == Catch::Approx(a.surprise_total).margin(1e-12));
}

TEST_CASE("single-episode estimate has zero standard error") {
    const McEstimate est = mc_surprise(QuidditchParams(0.4, 0.2), 1, 1, 7);
    REQUIRE(est.episodes == 1);
    REQUIRE(est.std_error == 0.0);
}

TEST_CASE("monte carlo agrees with the closed form within 3 sigma") {
    struct Case { double p, q; std::int64_t x; };
    for (const Case c : {Case{0.3, 0.1, 2}, Case{0.5, 0.2, 3}, Case{0.2, 0.3, 5},
                         Case{0.45, 0.05, 1}, Case{0.7, 0.25, 4}}) {
        const QuidditchParams params(c.p, c.q);
        const McEstimate est = mc_surprise(params, c.x, 40000, 20260815);
        const double cf = surprise_closed_form(params, static_cast<double>(c.x));
        CAPTURE(c.p, c.q, c.x, est.mean, est.std_error, cf);
        REQUIRE(std::fabs(est.mean - cf) < 3.0 * est.std_error);
    }
}

TEST_CASE("empirical win frequency matches the prior belief") {
    const QuidditchParams params(0.35, 0.2);
    const std::int64_t x = 2;
    const int n = 40000;
    int wins = 0;
    for (int i = 0; i < n; ++i)
        if (simulate_episode(params, x, 1000 + i).a_wins) ++wins;
    const double freq = static_cast<double>(wins) / n;
    const double b0 = belief(params, x, 0);
    const double se = std::sqrt(b0 * (1.0 - b0) / n);
    REQUIRE(std::fabs(freq - b0) < 3.0 * se);
}

TEST_CASE("standard error shrinks like the square root of the sample size") {
    const QuidditchParams params(0.3, 0.15);
    const McEstimate small = mc_surprise(params, 2, 2000, 5);
    const McEstimate large = mc_surprise(params, 2, 32000, 5);
    const double ratio = small.std_error / large.std_error;
    REQUIRE(ratio > 4.0 * 0.8);
    REQUIRE(ratio < 4.0 * 1.2);
}
