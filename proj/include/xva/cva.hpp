#pragma once

#include "xva/analytic.hpp"
#include "xva/collateral.hpp"
#include "xva/credit.hpp"

namespace xva {

struct CvaResult {
    double cvaB = 0.0; // <= 0, buyer's loss from B's default
    double cvaC = 0.0; // >= 0 in the buyer's convention
    double quadratureErrorEstimate = 0.0;
};

/// Quadrature of the first-default densities against the CC/CP exposure
/// profiles:
///   CVA_B = -int_0^T f_B(u) (CC(S0,u,0,0) - R_B CC(S0,u,H,X)) du,
///   CVA_C = -int_0^T f_C(u) (CP(S0,u,0,0) - R_C CP(S0,u,H,X)) du.
/// Collateralized runs pass R_B = R_C = 1 with H > 0; uncollateralized
/// runs pass the recoveries with H = X = 0.
CvaResult cva_equity(const EquityOptionSpec& spec, const MarketEnvironment& env,
                     const PartyCredit& creditB, const PartyCredit& creditC,
                     const CollateralTerms& terms, bool shortPosition = false);

/// Closed form for a sign-definite trade with constant intensities:
///   CVA_B = -lambda_B/(lambda_B+lambda_C) [1 - e^{-(lambda_B+lambda_C)T}] L_B V_e+(0),
/// and the mirrored expression for CVA_C.
CvaResult cva_closed_form(double vePlus, double veMinus, const PartyCredit& creditB,
                          const PartyCredit& creditC, double T);

/// x_i = lambda_i L_i + lambda_M (constant-intensity evaluation at t=0).
double funding_spread(const PartyCredit& credit, const MarketEnvironment& env);

} // namespace xva
