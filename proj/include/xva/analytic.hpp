#pragma once

#include "xva/market_data.hpp"

namespace xva {

double norm_pdf(double x);
double norm_cdf(double x);

/// P(X <= x, Y <= y) for standard bivariate normals with correlation rho.
/// Accurate to better than 1e-14 (Genz's reduction of the Drezner-
/// Wesolowsky correlation integral). Throws on |rho| > 1.
double bivariate_normal_cdf(double x, double y, double rho);

/// Black-Scholes value of a European option under the environment's flat
/// rate or discount curve (forward measure form).
double black_scholes_price(const EquityOptionSpec& spec, const MarketEnvironment& env);

/// Spot delta; e^{-qT} Phi(d1) for a call, e^{-qT} (Phi(d1) - 1) for a put.
double bs_delta(const EquityOptionSpec& spec, const MarketEnvironment& env);

/// Black-Scholes value seen at time `timeNow` with the given spot,
/// discounting the remaining life with P(timeNow, T). Used for exposure
/// surfaces along simulated paths and inside the compound pricer.
double bs_value_at(const EquityOptionSpec& spec, const MarketEnvironment& env,
                   double spot, double timeNow);

/// Risk-free value restated under the repo-adjusted measure, where the
/// hedge is financed at r + lambda_S: Black-Scholes with effective
/// dividend yield q - lambda_S.
double repo_adjusted_value(const EquityOptionSpec& spec, const MarketEnvironment& env);

/// Compound option query: exposure of the inner option observed at the
/// first-default time u in (0, T].
struct CompoundQuery {
    EquityOptionSpec inner;
    double defaultTime = 0.0; // u
    double threshold = 0.0;   // H
    double minTransfer = 0.0; // X
    /// True when the trade is a short position in `inner`, so the value
    /// process is the negated option price (liability side).
    bool shortPosition = false;

    void validate() const;
};

/// S*_u solving innerPrice(S, u) = H, by safeguarded Newton. For a call
/// the exercise region is S_u > S*; for a put it is S_u < S*.
double critical_stock(const EquityOptionSpec& inner, const MarketEnvironment& env,
                      double u, double H);

/// CC(S0, u, H, X) = E[ (hatV_e(u) - hatH + hatX) 1{hatV_e(u) > hatH} ],
/// the compound-call-plus-digital exposure of a long option position,
/// in Geske closed form.
double compound_call_plus_digital(const CompoundQuery& query, const MarketEnvironment& env);

/// CP(S0, u, H, X) = -E[ (-hatV_e(u) - hatH + hatX) 1{-hatV_e(u) >= hatH} ] <= 0,
/// the liability-side counterpart; zero for a long option position.
double compound_put_plus_digital(const CompoundQuery& query, const MarketEnvironment& env);

} // namespace xva
