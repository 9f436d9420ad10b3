#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "xva/analytic.hpp"
#include "xva/collateral.hpp"
#include "xva/credit.hpp"

namespace xva {

/// FVA_S approximation with the risk-free delta:
///   lambda_S int_0^T e^{-(lambda_B+lambda_C)u} du * S0 * delta_e(0).
double fva_s(const EquityOptionSpec& spec, const MarketEnvironment& env,
             const PartyCredit& creditB, const PartyCredit& creditC);

/// How collateral is generated along FVA paths.
enum class CollateralRule { None, ThresholdMta, Proportional };

/// How the seller's margin balance beta_B is produced.
///  - ReplicationIdentity: beta_B(t) = hatV(t), the perfect-replication
///    argument behind the paper-sized margining cost; default.
///  - FullEuler: explicit Euler of the hedged evolution, including the
///    discrete hedging P&L and repo drag.
enum class MarginMode { ReplicationIdentity, FullEuler };

struct McConfig {
    std::uint64_t seed = 42;
    std::size_t nPaths = 100000;
    double dt = 1.0 / 52;
    CollateralRule rule = CollateralRule::ThresholdMta;
    MarginMode marginMode = MarginMode::ReplicationIdentity;
};

/// One grid point of a simulated exposure path, all in discounted units.
struct PathPoint {
    double sHat;     // discounted cum-dividend spot
    double vHat;     // discounted risk-free value (MTM convention 1)
    double cHat;     // discounted collateral
    double alphaHat; // hedge ratio d hatV / d hatS (risk-free delta)
};

struct MarginOutcome {
    std::vector<double> betaB;
    std::vector<double> betaC;
    double costB = 0.0; // int x_B [betaB - c]^- du, survival-weighted (<= 0)
    double costC = 0.0; // int x_C [betaC + c]^- du, survival-weighted (<= 0)
};

/// Evolves both margin balances over one path per the Prop. 2 dynamics,
/// accruing survival-weighted funding costs with an explicit Euler step.
MarginOutcome evolve_margins(std::span<const PathPoint> path, const MarketEnvironment& env,
                             const PartyCredit& creditB, const PartyCredit& creditC,
                             double v0, double dt, MarginMode mode);

struct FvaEstimate {
    double fvaB = 0.0; // >= 0 as reported
    double fvaC = 0.0; // <= 0
    double seB = 0.0;
    double seC = 0.0;
};

/// Monte Carlo estimate of the margining FVAs for a given premium V0.
/// Deterministic for fixed seed and path count, independent of worker
/// count (counter-based per-path seeding, pairwise reduction).
FvaEstimate fva_bc(const EquityOptionSpec& spec, const MarketEnvironment& env,
                   const PartyCredit& creditB, const PartyCredit& creditC,
                   const CollateralTerms& terms, double v0, const McConfig& mc);

struct ValuationReport {
    double ve = 0.0;
    double cvaB = 0.0;
    double cvaC = 0.0;
    double fvaS = 0.0;
    double fvaB = 0.0;
    double fvaC = 0.0;
    double v0 = 0.0;
    int solverIterations = 0;
    double residual = 0.0;
    double seFvaB = 0.0;
    double seFvaC = 0.0;
};

struct PremiumSolverConfig {
    McConfig mc{};
    double toleranceScale = 1e-8; // residual <= toleranceScale * S0
    int maxIterations = 100;
};

/// Solves the implicit premium equation
///   V0 - FVA_B(V0) - FVA_C(V0) = V_e + CVA_B + CVA_C + FVA_S
/// by bisection with common random numbers, and assembles the report.
ValuationReport solve_premium(const EquityOptionSpec& spec, const MarketEnvironment& env,
                              const PartyCredit& creditB, const PartyCredit& creditC,
                              const CollateralTerms& terms, const PremiumSolverConfig& cfg);

} // namespace xva
