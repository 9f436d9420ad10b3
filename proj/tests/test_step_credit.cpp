#include <doctest.h>

#include "oracles.hpp"
#include "xva/credit.hpp"
#include "xva/step_function.hpp"

using namespace xva;

TEST_CASE("step function evaluates right-continuously") {
    StepFunction f({0.0, 1.0, 2.5}, {0.01, 0.02, 0.03});
    CHECK(f(0.0) == 0.01);
    CHECK(f(0.999) == 0.01);
    CHECK(f(1.0) == 0.02);
    CHECK(f(2.5) == 0.03);
    CHECK(f(100.0) == 0.03);
}

TEST_CASE("step function integral is exact and matches quadrature") {
    StepFunction f({0.0, 1.0, 2.5}, {0.01, 0.02, 0.03});
    CHECK(f.integral(0.0, 1.0) == doctest::Approx(0.01).epsilon(1e-15));
    CHECK(f.integral(0.5, 3.0) == doctest::Approx(0.005 + 0.03 + 0.015).epsilon(1e-14));
    double numeric = oracle::simpson([&](double t) { return f(t); }, 0.2, 4.0, 20000);
    CHECK(f.integral(0.2, 4.0) == doctest::Approx(numeric).epsilon(1e-6));
}

TEST_CASE("step function rejects malformed inputs") {
    CHECK_THROWS_AS(StepFunction({0.5}, {0.1}), std::invalid_argument);
    CHECK_THROWS_AS(StepFunction({0.0, 0.0}, {0.1, 0.2}), std::invalid_argument);
    CHECK_THROWS_AS(StepFunction({0.0}, {0.1, 0.2}), std::invalid_argument);
}

TEST_CASE("survival probability and first-default density are consistent") {
    auto creditB = PartyCredit::constant(0.02, 0.4);
    auto creditC = PartyCredit::constant(0.015, 0.4);

    CHECK(survival_probability(creditB, creditC, 0.0) == 1.0);
    CHECK(survival_probability(creditB, creditC, 1.0) ==
          doctest::Approx(std::exp(-0.035)).epsilon(1e-15));

    // P(tau <= T) = int_0^T (f_B + f_C), so the densities integrate to the
    // total default probability.
    double total = oracle::simpson(
        [&](double u) {
            return first_default_density(Party::B, creditB, creditC, u) +
                   first_default_density(Party::C, creditB, creditC, u);
        },
        0.0, 5.0, 4000);
    CHECK(total == doctest::Approx(1.0 - std::exp(-0.035 * 5.0)).epsilon(1e-10));
}

TEST_CASE("first-default density handles time-dependent intensities") {
    PartyCredit creditB{StepFunction({0.0, 1.0}, {0.01, 0.03}), 0.4};
    auto creditC = PartyCredit::constant(0.02, 0.4);
    double u = 1.7;
    double expected = 0.03 * std::exp(-(0.01 + 0.02) * 1.0 - (0.03 + 0.02) * 0.7);
    CHECK(first_default_density(Party::B, creditB, creditC, u) ==
          doctest::Approx(expected).epsilon(1e-14));
}

TEST_CASE("interval default probabilities telescope to the total") {
    auto creditB = PartyCredit::constant(0.02, 0.4);
    auto creditC = PartyCredit::constant(0.00015, 0.4);

    // Summing marginal interval probabilities for both parties over a grid
    // reproduces P(tau <= T) when intensities are constant: each interval
    // contributes survival(t0) * (1 - e^{-lambda_i dT}); cross terms of the
    // product expansion are second order and vanish under the convention.
    double sumB = 0.0;
    for (int j = 1; j <= 20; ++j)
        sumB += default_in_interval_prob(Party::B, creditB, creditC, 0.5 * (j - 1), 0.5 * j);
    double direct = oracle::simpson(
        [&](double u) { return first_default_density(Party::B, creditB, creditC, u); }, 0.0,
        10.0, 8000);
    // The settlement convention attributes the whole interval to B's
    // marginal default, so it slightly over-counts relative to the exact
    // first-to-default split; they agree to O(lambda^2 dT).
    CHECK(sumB == doctest::Approx(direct).epsilon(2e-4));
}

TEST_CASE("interval default probability matches the printed formula") {
    auto creditB = PartyCredit::constant(0.02, 0.4);
    auto creditC = PartyCredit::constant(0.015, 0.4);
    double p = default_in_interval_prob(Party::B, creditB, creditC, 1.0, 1.5);
    double expected = std::exp(-0.035 * 1.0) * (1.0 - std::exp(-0.02 * 0.5));
    CHECK(p == doctest::Approx(expected).epsilon(1e-15));
}
