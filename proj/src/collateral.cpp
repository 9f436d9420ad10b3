#include "xva/collateral.hpp"

#include <algorithm>
#include <cmath>

namespace xva {

double collateral_value(double mtm, const CollateralTerms& terms, double t) {
    double h = terms.threshold(t);
    double x = terms.minTransfer(t);
    if (mtm >= h) return mtm - h + x;
    if (mtm <= -h) return mtm + h - x;
    return 0.0;
}

double proportional_collateral(double mtm, double recoveryB, double recoveryC) {
    if (recoveryB < 0.0 || recoveryB > 1.0 || recoveryC < 0.0 || recoveryC > 1.0)
        throw std::invalid_argument("proportional_collateral: recoveries must be in [0,1]");
    return mtm > 0.0 ? recoveryB * mtm : recoveryC * mtm;
}

double default_payment(double mtm, double collateral, Party defaulter) {
    double mPlus = std::max(mtm, 0.0);
    double mMinus = std::min(mtm, 0.0);
    double cPlus = std::max(collateral, 0.0);
    double cMinus = std::min(collateral, 0.0);
    if (defaulter == Party::B) return std::min(cPlus, mPlus) + mMinus;
    return std::max(cMinus, mMinus) + mPlus;
}

double default_payment_uncollateralized(double mtm, Party defaulter, double recoveryDefaulter) {
    double c = defaulter == Party::B ? proportional_collateral(mtm, recoveryDefaulter, 1.0)
                                     : proportional_collateral(mtm, 1.0, recoveryDefaulter);
    return default_payment(mtm, c, defaulter);
}

} // namespace xva
