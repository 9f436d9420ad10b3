#pragma once

#include <stdexcept>

#include "xva/step_function.hpp"

namespace xva {

enum class Party { B, C };

/// Credit description of one party: deterministic (piecewise-constant)
/// default intensity plus recovery. Loss rate is 1 - recovery.
struct PartyCredit {
    StepFunction intensity; // lambda_i >= 0
    double recovery = 1.0;  // R_i in [0,1]

    double lossRate() const { return 1.0 - recovery; }

    void validate() const {
        for (double v : intensity.values())
            if (v < 0.0) throw std::invalid_argument("PartyCredit: intensity must be >= 0");
        if (recovery < 0.0 || recovery > 1.0)
            throw std::invalid_argument("PartyCredit: recovery must be in [0,1]");
    }

    static PartyCredit constant(double lambda, double recovery) {
        PartyCredit pc{StepFunction(lambda), recovery};
        pc.validate();
        return pc;
    }
};

/// P(tau > t) for the first default of either party,
/// exp(-int_0^t (lambda_B + lambda_C)).
double survival_probability(const PartyCredit& creditB, const PartyCredit& creditC, double t);

/// Density of {tau = tau_i, tau in du}: lambda_i(u) exp(-int_0^u (lambda_B + lambda_C)).
double first_default_density(Party which, const PartyCredit& creditB,
                             const PartyCredit& creditC, double u);

/// P(T_{j-1} <= tau = tau_i <= T_j) in the settlement convention of the
/// swap DVA/CVA sums: survival of both parties to t0, then the marginal
/// default of party i over (t0, t1].
double default_in_interval_prob(Party which, const PartyCredit& creditB,
                                const PartyCredit& creditC, double t0, double t1);

} // namespace xva
