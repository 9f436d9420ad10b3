#pragma once

#include "xva/credit.hpp"
#include "xva/market_data.hpp"

namespace xva {

/// A_{m,n}(0) = sum_{j=m}^{n-1} dT_j P(0, T_{j+1}).
double annuity(const DiscountCurve& discount, const std::vector<double>& grid, int m, int n);

/// Multi-curve forward swap rate: annuity-weighted average of the
/// projected forwards over (T_m, T_n).
double forward_swap_rate(const DiscountCurve& discount, const ForwardCurve& forwards,
                         const std::vector<double>& grid, int m, int n);

/// V_e(0) = A_{m,n} (s_{m,n} - s) for a payer, negated for a receiver.
double swap_value(const SwapSpec& spec, const DiscountCurve& discount,
                  const ForwardCurve& forwards);

enum class SwaptionKind { Payer, Receiver };

/// Black swaption on the forward swap rate:
///   BC = A (s_{m,n} Phi(d1) - s Phi(d2)),  BP = A (s Phi(-d2) - s_{m,n} Phi(-d1)).
double black_swaption(SwaptionKind kind, const DiscountCurve& discount,
                      const ForwardCurve& forwards, const std::vector<double>& grid,
                      int m, int n, double strike, double vol, double expiry);

struct SwapAdjustments {
    double dva = 0.0; // <= 0
    double cva = 0.0; // >= 0
};

/// Closed-form swap DVA/CVA: swaption-valued exposure at each period end,
/// weighted by the interval first-default probabilities.
SwapAdjustments swap_dva_cva(const SwapSpec& spec, const DiscountCurve& discount,
                             const ForwardCurve& forwards, double vol,
                             const PartyCredit& creditB, const PartyCredit& creditC);

/// Fixed rate s* solving V_e(s) + DVA(s) + CVA(s) = 0 (safeguarded secant).
double adjusted_swap_rate(const SwapSpec& spec, const DiscountCurve& discount,
                          const ForwardCurve& forwards, double vol,
                          const PartyCredit& creditB, const PartyCredit& creditC);

/// Synthetic stand-in for the unpublished Aug-24-2012 market data: flat
/// OIS at 1.2% continuous and an upward-sloping forward curve calibrated
/// so that s_{0,20}(0) = 1.45% on the 10y semi-annual grid.
DiscountCurve example2_discount_fixture();
ForwardCurve example2_forward_fixture();
std::vector<double> example2_grid();

} // namespace xva
