#pragma once

#include <cmath>
#include <optional>
#include <string>
#include <vector>

#include "xva/collateral.hpp"
#include "xva/credit.hpp"

namespace xva {

/// OIS-style discount curve, log-linear in the discount factors between
/// pillars (piecewise-constant forward rates). Beyond the last pillar the
/// last log-slope is extrapolated flat.
class DiscountCurve {
public:
    DiscountCurve(std::vector<double> tenors, std::vector<double> factors);

    /// P(0,t) for t >= 0; P(0,0) = 1.
    double df(double t) const;

    const std::vector<double>& tenors() const { return tenors_; }
    const std::vector<double>& factors() const { return factors_; }

private:
    std::vector<double> tenors_;  // strictly ascending, > 0
    std::vector<double> factors_; // positive, non-increasing
};

/// Forward-rate curve on contiguous accrual periods [start, end).
class ForwardCurve {
public:
    struct Period {
        double start;
        double end;
        double rate; // E^{Q_{end}}[f(start)]
    };

    explicit ForwardCurve(std::vector<Period> periods);

    /// Rate of the period beginning at `start` (exact pillar lookup).
    double rateAt(double start) const;

    const std::vector<Period>& periods() const { return periods_; }

private:
    std::vector<Period> periods_;
};

/// Market parameters shared by all pricers. Either a flat continuously
/// compounded rate or a discount curve is active, never both.
struct MarketEnvironment {
    double riskFreeRate = 0.0;
    std::optional<DiscountCurve> curve;
    double dividendYield = 0.0;
    double volatility = 0.0;          // lognormal, > 0
    double repoSpread = 0.0;          // lambda_S >= 0
    double marketFundingSpread = 0.0; // lambda_M >= 0

    /// P(0,t) from the active rate description.
    double discount(double t) const {
        return curve ? curve->df(t) : std::exp(-riskFreeRate * t);
    }

    void validate() const;
};

enum class OptionSide { Call, Put };

struct EquityOptionSpec {
    double spot;     // S0 > 0
    double strike;   // K > 0
    double maturity; // T > 0, years
    OptionSide side = OptionSide::Call;

    void validate() const;
};

enum class SwapDirection { Payer, Receiver };

struct SwapSpec {
    std::vector<double> grid; // T_0 .. T_n, strictly ascending
    double fixedRate = 0.0;
    SwapDirection direction = SwapDirection::Payer;
    double notional = 1.0;

    void validate() const;
};

enum class TradeKind { Call, Put, PayerSwap };

struct TradeSpec {
    TradeKind kind = TradeKind::Call;
    EquityOptionSpec option{};
    SwapSpec swap{};

    bool isOption() const { return kind != TradeKind::PayerSwap; }
};

/// Everything a valuation run needs, as read from one config file.
struct MarketConfig {
    MarketEnvironment env;
    PartyCredit creditB;
    PartyCredit creditC;
    CollateralTerms terms;
    TradeSpec trade;
    double pathStep = 1.0 / 52; // dt key
};

/// Parses the flat `key = value` config format. Throws ConfigError naming
/// the offending key on missing mandatory keys, non-numeric values, or
/// invariant violations.
MarketConfig load_market_config(const std::string& path);

struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

enum class CurveKind { Discount, Forward };

DiscountCurve load_discount_curve(const std::string& path);
ForwardCurve load_forward_curve(const std::string& path);

void write_discount_curve(const DiscountCurve& curve, const std::string& path);
void write_forward_curve(const ForwardCurve& curve, const std::string& path);

} // namespace xva
