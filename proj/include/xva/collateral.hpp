#pragma once

#include <stdexcept>

#include "xva/credit.hpp"
#include "xva/step_function.hpp"

namespace xva {

enum class MtmConvention { RiskFree, PreDefault };

/// CSA terms: threshold H and minimum transfer amount X, both step
/// functions of time (constants in the common case), with H >= X >= 0.
struct CollateralTerms {
    StepFunction threshold;   // H
    StepFunction minTransfer; // X
    MtmConvention mtm = MtmConvention::RiskFree;

    CollateralTerms() : threshold(0.0), minTransfer(0.0) {}
    CollateralTerms(double h, double x, MtmConvention conv = MtmConvention::RiskFree)
        : threshold(h), minTransfer(x), mtm(conv) {}
    CollateralTerms(StepFunction h, StepFunction x, MtmConvention conv = MtmConvention::RiskFree)
        : threshold(std::move(h)), minTransfer(std::move(x)), mtm(conv) {}

    void validate() const;
};

/// Cash collateral under the threshold/MTA rule:
/// c+ = (M - H + X) 1{M >= H}, c- = (M + H - X) 1{M <= -H}.
double collateral_value(double mtm, const CollateralTerms& terms, double t = 0.0);

/// Proportional collateral c+ = R_B M+, c- = R_C M-, which makes the
/// collateralized settlement reproduce the uncollateralized ISDA payment.
double proportional_collateral(double mtm, double recoveryB, double recoveryC);

/// Post-default value of the derivative (to the buyer):
/// min{c+, M+} + M- when B defaults, max{c-, M-} + M+ when C defaults.
double default_payment(double mtm, double collateral, Party defaulter);

/// Uncollateralized convention: recovery applied to the defaulter's
/// positive MTM directly.
double default_payment_uncollateralized(double mtm, Party defaulter, double recoveryDefaulter);

} // namespace xva
