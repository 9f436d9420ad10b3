#include <doctest.h>

#include <cstdlib>

#include "xva/cva.hpp"
#include "xva/fva.hpp"

using namespace xva;

namespace {

MarketEnvironment example_env() {
    MarketEnvironment env;
    env.riskFreeRate = 0.03;
    env.volatility = 0.20;
    env.repoSpread = 0.0075;
    return env;
}

const EquityOptionSpec kAtmCall{100.0, 100.0, 1.0, OptionSide::Call};

} // namespace

TEST_CASE("FVA_S matches the survival-weighted delta carry") {
    auto env = example_env();
    auto creditB = PartyCredit::constant(0.02, 0.4);
    auto creditC = PartyCredit::constant(0.015, 0.4);
    // lambda_S * int_0^1 e^{-0.035 u} du * S0 * delta
    double weight = (1.0 - std::exp(-0.035)) / 0.035;
    double expected = 0.0075 * weight * 100.0 * bs_delta(kAtmCall, env);
    CHECK(fva_s(kAtmCall, env, creditB, creditC) == doctest::Approx(expected).epsilon(1e-13));
    CHECK(fva_s(kAtmCall, env, creditB, creditC) == doctest::Approx(0.4413).epsilon(2e-4));

    auto noRisk = PartyCredit::constant(0.0, 1.0);
    CHECK(fva_s(kAtmCall, env, noRisk, noRisk) ==
          doctest::Approx(0.0075 * 100.0 * bs_delta(kAtmCall, env)).epsilon(1e-13));
    MarketEnvironment noRepo = env;
    noRepo.repoSpread = 0.0;
    CHECK(fva_s(kAtmCall, noRepo, creditB, creditC) == 0.0);
}

TEST_CASE("margin evolution accrues no cost when the balance covers the call") {
    auto env = example_env();
    auto creditB = PartyCredit::constant(0.02, 0.4);
    auto creditC = PartyCredit::constant(0.015, 0.4);
    // Replication identity: beta_B tracks hatV exactly; with c <= hatV the
    // shortfall is never negative, so the seller-side cost vanishes.
    std::vector<PathPoint> path = {
        {100.0, 9.0, 7.0, 0.6}, {101.0, 9.5, 7.5, 0.62}, {99.0, 8.0, 6.0, 0.58}};
    auto out = evolve_margins(path, env, creditB, creditC, 9.0, 1.0 / 52,
                              MarginMode::ReplicationIdentity);
    CHECK(out.costB == 0.0);
    CHECK(out.betaB[1] == 9.5);
    // The buyer never owes collateral on a positive-value trade.
    CHECK(out.costC == 0.0);
    CHECK(out.betaC[2] == 0.0);
}

TEST_CASE("margin evolution charges the unsecured shortfall") {
    auto env = example_env();
    env.marketFundingSpread = 0.0;
    auto creditB = PartyCredit::constant(0.02, 0.4);
    auto creditC = PartyCredit::constant(0.015, 0.4);
    double dt = 0.5;
    // Negative-value trade: the buyer posts collateral c = hatV < 0 and
    // funds it at x_C; the first step accrues x_C [betaC + c]^- dt.
    std::vector<PathPoint> path = {{100.0, -5.0, -5.0, 0.0}, {100.0, -5.0, -5.0, 0.0}};
    double v0 = -5.0;
    auto out =
        evolve_margins(path, env, creditB, creditC, v0, dt, MarginMode::ReplicationIdentity);
    double xC = funding_spread(creditC, env);
    // betaC(0) = -min(v0,0) = 5, c = -5 -> shortfall = min(5 - 5, 0) = 0.
    CHECK(out.costC == 0.0);

    // Start the buyer margin short of the call instead.
    auto out2 = evolve_margins(path, env, creditB, creditC, -2.0, dt,
                               MarginMode::ReplicationIdentity);
    // betaC(0) = 2, c = -5 -> shortfall = -3, survival weight 1 at t=0.
    CHECK(out2.costC == doctest::Approx(xC * -3.0 * dt).epsilon(1e-12));
    CHECK(out2.costC < 0.0);
}

TEST_CASE("Monte Carlo FVA is deterministic and respects the signs") {
    auto env = example_env();
    auto creditB = PartyCredit::constant(0.02, 0.4);
    auto creditC = PartyCredit::constant(0.015, 0.4);
    CollateralTerms terms(4.0, 2.0);
    McConfig mc;
    mc.nPaths = 4000;
    mc.marginMode = MarginMode::FullEuler; // nonzero costs make the check meaningful

    FvaEstimate a = fva_bc(kAtmCall, env, creditB, creditC, terms, 9.4, mc);
    FvaEstimate b = fva_bc(kAtmCall, env, creditB, creditC, terms, 9.4, mc);
    CHECK(a.fvaB == b.fvaB);
    CHECK(a.fvaC == b.fvaC);
    CHECK(a.fvaB >= 0.0);
    CHECK(a.fvaC <= 0.0);

    // Forcing a single worker must not change the estimate.
    setenv("XVA_THREADS", "1", 1);
    FvaEstimate serial = fva_bc(kAtmCall, env, creditB, creditC, terms, 9.4, mc);
    unsetenv("XVA_THREADS");
    CHECK(serial.fvaB == a.fvaB);
    CHECK(serial.fvaC == a.fvaC);

    mc.seed = 43;
    FvaEstimate other = fva_bc(kAtmCall, env, creditB, creditC, terms, 9.4, mc);
    CHECK((other.fvaB != a.fvaB || other.fvaC != a.fvaC || a.fvaB == 0.0));
}

TEST_CASE("Monte Carlo FVA validates its grid") {
    auto env = example_env();
    auto credit = PartyCredit::constant(0.02, 0.4);
    CollateralTerms terms(4.0, 2.0);
    McConfig mc;
    mc.dt = 0.37; // does not divide T = 1
    CHECK_THROWS(fva_bc(kAtmCall, env, credit, credit, terms, 9.4, mc));
    mc.dt = 1.0 / 52;
    mc.nPaths = 0;
    CHECK_THROWS(fva_bc(kAtmCall, env, credit, credit, terms, 9.4, mc));
}

TEST_CASE("premium solve reduces to the risk-free price without risk") {
    MarketEnvironment env;
    env.riskFreeRate = 0.03;
    env.volatility = 0.20;
    auto noRisk = PartyCredit::constant(0.0, 1.0);
    PremiumSolverConfig cfg;
    ValuationReport r = solve_premium(kAtmCall, env, noRisk, noRisk, CollateralTerms(0.0, 0.0), cfg);
    CHECK(r.v0 == black_scholes_price(kAtmCall, env));
    CHECK(r.residual == 0.0);
    CHECK(r.cvaB == 0.0);
    CHECK(r.cvaC == 0.0);
    CHECK(r.fvaS == 0.0);
    CHECK(r.fvaB == 0.0);
    CHECK(r.fvaC == 0.0);
}

TEST_CASE("premium solve assembles the decomposition identity") {
    auto env = example_env();
    auto creditB = PartyCredit::constant(0.02, 0.4);
    auto creditC = PartyCredit::constant(0.015, 0.4);
    PremiumSolverConfig cfg;
    cfg.mc.nPaths = 4000;
    ValuationReport r =
        solve_premium(kAtmCall, env, creditB, creditC, CollateralTerms(4.0, 2.0), cfg);
    double lhs = r.v0 - r.fvaB - r.fvaC;
    double rhs = r.ve + r.cvaB + r.cvaC + r.fvaS;
    CHECK(std::abs(lhs - rhs) <= 1e-8 * kAtmCall.spot + r.residual);
    CHECK(r.solverIterations >= 1);
}

TEST_CASE("premium map is monotone under common random numbers") {
    auto env = example_env();
    auto creditB = PartyCredit::constant(0.02, 0.4);
    auto creditC = PartyCredit::constant(0.015, 0.4);
    CollateralTerms terms(4.0, 2.0);
    McConfig mc;
    mc.nPaths = 2000;
    mc.marginMode = MarginMode::FullEuler;

    double prev = -1e300;
    for (int i = 0; i <= 20; ++i) {
        double v0 = 5.0 + 0.5 * i;
        FvaEstimate est = fva_bc(kAtmCall, env, creditB, creditC, terms, v0, mc);
        double mapped = v0 - est.fvaB - est.fvaC;
        CHECK(mapped > prev);
        prev = mapped;
    }
}
