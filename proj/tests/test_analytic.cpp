#include <doctest.h>

#include <random>

#include "oracles.hpp"
#include "xva/analytic.hpp"

using namespace xva;

namespace {

MarketEnvironment flat_env(double r, double q, double sigma) {
    MarketEnvironment env;
    env.riskFreeRate = r;
    env.dividendYield = q;
    env.volatility = sigma;
    return env;
}

const EquityOptionSpec kAtmCall{100.0, 100.0, 1.0, OptionSide::Call};

} // namespace

TEST_CASE("normal CDF hits the tabulated value") {
    CHECK(norm_cdf(0.0) == doctest::Approx(0.5).epsilon(1e-15));
    CHECK(norm_cdf(0.25) == doctest::Approx(0.5987063).epsilon(1e-7));
    CHECK(norm_cdf(-0.25) == doctest::Approx(1.0 - 0.5987063).epsilon(1e-7));
}

TEST_CASE("bivariate normal CDF matches the one-dimensional reduction") {
    std::mt19937_64 gen(7);
    std::uniform_real_distribution<double> arg(-3.0, 3.0);
    std::uniform_real_distribution<double> corr(-0.99, 0.99);
    for (int i = 0; i < 200; ++i) {
        double x = arg(gen), y = arg(gen), rho = corr(gen);
        double got = bivariate_normal_cdf(x, y, rho);
        double want = oracle::bvn(x, y, rho);
        CHECK(got == doctest::Approx(want).epsilon(5e-11));
    }
}

TEST_CASE("bivariate normal CDF symmetries and limits") {
    CHECK(bivariate_normal_cdf(0.7, -0.3, 0.5) ==
          doctest::Approx(bivariate_normal_cdf(-0.3, 0.7, 0.5)).epsilon(1e-15));
    // rho = 0 factorizes.
    CHECK(bivariate_normal_cdf(0.4, 1.1, 0.0) ==
          doctest::Approx(norm_cdf(0.4) * norm_cdf(1.1)).epsilon(1e-14));
    // Perfect correlation collapses to the min; anti-correlation to the sum.
    CHECK(bivariate_normal_cdf(0.4, 1.1, 1.0) == doctest::Approx(norm_cdf(0.4)).epsilon(1e-15));
    CHECK(bivariate_normal_cdf(0.4, 1.1, -1.0) ==
          doctest::Approx(norm_cdf(0.4) + norm_cdf(1.1) - 1.0).epsilon(1e-14));
    // Infinite arguments reduce to the univariate CDF.
    CHECK(bivariate_normal_cdf(1e308, 0.4, 0.6) == doctest::Approx(norm_cdf(0.4)).epsilon(1e-15));
    CHECK(bivariate_normal_cdf(-40.0, 0.4, 0.6) == doctest::Approx(0.0).epsilon(1e-300));
    CHECK_THROWS(bivariate_normal_cdf(0.0, 0.0, 1.5));
}

TEST_CASE("Black-Scholes reproduces the one-year ATM call value") {
    auto env = flat_env(0.03, 0.0, 0.20);
    CHECK(black_scholes_price(kAtmCall, env) == doctest::Approx(9.4134).epsilon(5e-6));
    CHECK(black_scholes_price(kAtmCall, env) ==
          doctest::Approx(oracle::bs(100, 100, 0.03, 0.0, 0.20, 1.0, true)).epsilon(1e-14));
}

TEST_CASE("put-call parity holds under flat and curve discounting") {
    auto env = flat_env(0.03, 0.01, 0.25);
    EquityOptionSpec call{90.0, 100.0, 2.0, OptionSide::Call};
    EquityOptionSpec put = call;
    put.side = OptionSide::Put;
    double lhs = black_scholes_price(call, env) - black_scholes_price(put, env);
    double rhs = call.spot * std::exp(-0.01 * 2.0) - call.strike * std::exp(-0.03 * 2.0);
    CHECK(lhs == doctest::Approx(rhs).epsilon(1e-12));

    MarketEnvironment curved;
    curved.curve = DiscountCurve({1.0, 2.0, 3.0}, {0.975, 0.945, 0.91});
    curved.volatility = 0.25;
    curved.dividendYield = 0.01;
    double lhs2 = black_scholes_price(call, curved) - black_scholes_price(put, curved);
    double rhs2 = call.spot * std::exp(-0.01 * 2.0) - call.strike * curved.discount(2.0);
    CHECK(lhs2 == doctest::Approx(rhs2).epsilon(1e-12));
}

TEST_CASE("delta matches a central difference") {
    auto env = flat_env(0.03, 0.01, 0.2);
    EquityOptionSpec spec{105.0, 95.0, 0.75, OptionSide::Put};
    double h = 1e-4;
    EquityOptionSpec up = spec, dn = spec;
    up.spot += h;
    dn.spot -= h;
    double fd = (black_scholes_price(up, env) - black_scholes_price(dn, env)) / (2 * h);
    CHECK(bs_delta(spec, env) == doctest::Approx(fd).epsilon(1e-7));
}

TEST_CASE("bs_value_at discounts the remaining life only") {
    auto env = flat_env(0.03, 0.0, 0.2);
    // Seen at u with spot S, the option is a (T-u)-maturity claim.
    double direct = oracle::bs(110.0, 100.0, 0.03, 0.0, 0.2, 0.6, true);
    CHECK(bs_value_at(kAtmCall, env, 110.0, 0.4) == doctest::Approx(direct).epsilon(1e-13));
    // At expiry it collapses to intrinsic value.
    CHECK(bs_value_at(kAtmCall, env, 112.0, 1.0) == doctest::Approx(12.0));
    CHECK(bs_value_at(kAtmCall, env, 95.0, 1.0) == 0.0);
}

TEST_CASE("repo adjustment lowers the cash-flow discounting carry") {
    auto env = flat_env(0.03, 0.0, 0.2);
    env.repoSpread = 0.0075;
    double adjusted = repo_adjusted_value(kAtmCall, env);
    double plain = black_scholes_price(kAtmCall, env);
    // Financing the hedge at r + lambda_S raises the call value by about
    // lambda_S * T * S0 * delta.
    CHECK(adjusted > plain);
    double estimate = plain + 0.0075 * 1.0 * 100.0 * bs_delta(kAtmCall, env);
    CHECK(adjusted == doctest::Approx(estimate).epsilon(2e-3));
    CHECK(adjusted ==
          doctest::Approx(oracle::bs(100, 100, 0.03, -0.0075, 0.2, 1.0, true)).epsilon(1e-14));
}

TEST_CASE("critical stock inverts the residual option value") {
    auto env = flat_env(0.03, 0.0, 0.2);
    double u = 0.5, H = 4.0;
    double sStar = critical_stock(kAtmCall, env, u, H);
    CHECK(bs_value_at(kAtmCall, env, sStar, u) == doctest::Approx(H).epsilon(1e-9));
    // H = 0 puts the whole domain in the exercise region for a call.
    CHECK(critical_stock(kAtmCall, env, u, 0.0) == 0.0);

    EquityOptionSpec put = kAtmCall;
    put.side = OptionSide::Put;
    double sStarPut = critical_stock(put, env, u, H);
    CHECK(bs_value_at(put, env, sStarPut, u) == doctest::Approx(H).epsilon(1e-9));
}

TEST_CASE("compound exposure with zero threshold is the forward option value") {
    auto env = flat_env(0.03, 0.0, 0.2);
    // E[hatV_e(u)] is a martingale in discounted units: CC(S0,u,0,0) = V_e(0).
    double ve = black_scholes_price(kAtmCall, env);
    for (double u : {0.05, 0.25, 0.5, 0.9, 0.999}) {
        CompoundQuery q{kAtmCall, u, 0.0, 0.0, false};
        CHECK(compound_call_plus_digital(q, env) == doctest::Approx(ve).epsilon(1e-9));
    }
}

TEST_CASE("compound exposure matches the Monte Carlo oracle") {
    struct Case {
        double s0, k, r, q, sigma, T, u, H, X;
        bool call;
    };
    // Frozen draws spanning moneyness, maturity and thresholds.
    const Case cases[] = {
        {100, 100, 0.03, 0.00, 0.20, 1.0, 0.50, 4.0, 2.0, true},
        {100, 100, 0.03, 0.00, 0.20, 1.0, 0.25, 0.0, 0.0, true},
        {100, 110, 0.02, 0.01, 0.30, 2.0, 1.00, 6.0, 1.0, true},
        {100, 90, 0.05, 0.00, 0.15, 1.5, 0.75, 10.0, 5.0, true},
        {80, 100, 0.01, 0.02, 0.40, 3.0, 2.00, 2.0, 2.0, true},
        {120, 100, 0.04, 0.00, 0.25, 1.0, 0.10, 15.0, 3.0, true},
        {100, 100, 0.03, 0.00, 0.20, 1.0, 0.50, 4.0, 2.0, false},
        {100, 90, 0.02, 0.01, 0.35, 2.0, 1.20, 3.0, 1.5, false},
        {90, 110, 0.03, 0.00, 0.20, 1.5, 0.60, 8.0, 4.0, false},
        {110, 100, 0.00, 0.00, 0.30, 1.0, 0.90, 1.0, 0.5, false},
        {100, 100, 0.03, 0.00, 0.20, 1.0, 0.9999, 4.0, 2.0, true},
    };
    std::uint64_t seed = 1234;
    for (const auto& c : cases) {
        MarketEnvironment env = flat_env(c.r, c.q, c.sigma);
        EquityOptionSpec inner{c.s0, c.k, c.T, c.call ? OptionSide::Call : OptionSide::Put};
        CompoundQuery q{inner, c.u, c.H, c.X, false};
        double closed = compound_call_plus_digital(q, env);
        auto [mc, se] = oracle::cc_mc(c.s0, c.k, c.r, c.q, c.sigma, c.T, c.u, c.H, c.X, c.call,
                                      1000000, seed++);
        INFO("case u=" << c.u << " H=" << c.H << " call=" << c.call);
        CHECK(std::abs(closed - mc) < 3.0 * se + 1e-9);
    }
}

TEST_CASE("liability-side exposure mirrors the asset side") {
    auto env = flat_env(0.03, 0.0, 0.2);
    CompoundQuery longQ{kAtmCall, 0.5, 4.0, 2.0, false};
    // A long option position has no liability-side exposure...
    CHECK(compound_put_plus_digital(longQ, env) == 0.0);
    // ...and a short position has no asset-side exposure.
    CompoundQuery shortQ = longQ;
    shortQ.shortPosition = true;
    CHECK(compound_call_plus_digital(shortQ, env) == 0.0);
    // The short position's liability exposure is minus the long CC.
    double cc = compound_call_plus_digital(longQ, env);
    double cp = compound_put_plus_digital(shortQ, env);
    CHECK(cp == doctest::Approx(-cc).epsilon(1e-12));
    CHECK(cp <= 0.0);
}

TEST_CASE("compound exposure is monotone in the threshold") {
    auto env = flat_env(0.03, 0.0, 0.2);
    double prev = 1e300;
    for (double h : {0.0, 1.0, 2.0, 4.0, 8.0, 16.0}) {
        CompoundQuery q{kAtmCall, 0.5, h, 0.0, false};
        double cc = compound_call_plus_digital(q, env);
        CHECK(cc <= prev + 1e-12);
        prev = cc;
    }
}
