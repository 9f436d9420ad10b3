#include "xva/credit.hpp"

#include <cmath>

namespace xva {

double survival_probability(const PartyCredit& creditB, const PartyCredit& creditC, double t) {
    if (t < 0.0) throw std::invalid_argument("survival_probability: t < 0");
    return std::exp(-(creditB.intensity.integral(0.0, t) + creditC.intensity.integral(0.0, t)));
}

double first_default_density(Party which, const PartyCredit& creditB,
                             const PartyCredit& creditC, double u) {
    if (u < 0.0) throw std::invalid_argument("first_default_density: u < 0");
    const PartyCredit& own = which == Party::B ? creditB : creditC;
    return own.intensity(u) * survival_probability(creditB, creditC, u);
}

double default_in_interval_prob(Party which, const PartyCredit& creditB,
                                const PartyCredit& creditC, double t0, double t1) {
    if (t0 < 0.0 || t1 < t0)
        throw std::invalid_argument("default_in_interval_prob: need 0 <= t0 <= t1");
    const PartyCredit& own = which == Party::B ? creditB : creditC;
    double bothToT0 = survival_probability(creditB, creditC, t0);
    return bothToT0 * (1.0 - std::exp(-own.intensity.integral(t0, t1)));
}

} // namespace xva
