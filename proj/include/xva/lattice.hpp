#pragma once

#include <vector>

#include "xva/analytic.hpp"
#include "xva/credit.hpp"

namespace xva {

/// Recombining CRR tree: u = e^{sigma sqrt(dt)}, d = 1/u.
struct BinomialTree {
    double dt = 0.0;
    int steps = 0;
    double up = 1.0;
    double down = 1.0;
    double probUp = 0.5;            // risk-neutral
    double discountPerStep = 1.0;   // e^{-r dt}
    std::vector<std::vector<double>> spots; // spots[i][j], j up-moves after i steps
};

BinomialTree build_tree(const MarketEnvironment& env, const EquityOptionSpec& spec, double dt);

/// Per-node value and delta from risk-free backward induction.
struct NodeField {
    std::vector<std::vector<double>> value;
    std::vector<std::vector<double>> delta; // delta[i] has i+1 entries for level i < steps

    double rootValue() const { return value.front().front(); }
    double rootDelta() const { return delta.front().front(); }
};

NodeField tree_price_and_delta(const BinomialTree& tree, const EquityOptionSpec& spec,
                               const MarketEnvironment& env);

struct PdeConfig {
    int spaceSteps = 400;
    int timeSteps = 400;
    double domainWidthStdDevs = 6.0;
    int rannacherHalfSteps = 4;
};

/// Crank-Nicolson solve of the pre-default-MTM value for an asset-only
/// trade with proportional recovery and no collateral:
///   d_t hatV + 1/2 sigma^2 hatS^2 d^2 hatV + lambda_S hatS d hatV
///     - lambda_B L_B hatV = 0,
/// on a log-spot grid. For constant coefficients the solution is
/// e^{-lambda_B L_B T} times the repo-adjusted value.
double solve_predefault_pde(const EquityOptionSpec& spec, const MarketEnvironment& env,
                            const PartyCredit& creditB, const PdeConfig& cfg = {});

} // namespace xva
