#include "xva/fva.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <stdexcept>
#include <thread>

#include "xva/collateral.hpp"
#include "xva/cva.hpp"

namespace xva {

namespace {

// Exact integral of the survival probability over [0, T] for
// piecewise-constant total intensity.
double survival_integral(const PartyCredit& creditB, const PartyCredit& creditC, double T) {
    std::vector<double> knots{0.0};
    for (double k : creditB.intensity.knots()) knots.push_back(k);
    for (double k : creditC.intensity.knots()) knots.push_back(k);
    knots.push_back(T);
    std::sort(knots.begin(), knots.end());
    knots.erase(std::unique(knots.begin(), knots.end()), knots.end());

    double acc = 0.0;
    for (std::size_t i = 0; i + 1 < knots.size(); ++i) {
        double a = knots[i], b = std::min(knots[i + 1], T);
        if (b <= a) continue;
        double lam = creditB.intensity(a) + creditC.intensity(a);
        double survA = survival_probability(creditB, creditC, a);
        acc += lam > 0.0 ? survA * (1.0 - std::exp(-lam * (b - a))) / lam : survA * (b - a);
        if (knots[i + 1] >= T) break;
    }
    return acc;
}

std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

// Small deterministic normal generator (Box-Muller on raw 64-bit draws),
// identical across platforms and standard libraries.
class NormalRng {
public:
    explicit NormalRng(std::uint64_t seed) : state_(seed ? seed : 0x2545f4914f6cdd1dULL) {}

    double next() {
        if (haveSpare_) {
            haveSpare_ = false;
            return spare_;
        }
        double u1 = uniform01();
        double u2 = uniform01();
        double r = std::sqrt(-2.0 * std::log(u1));
        double a = 2.0 * 3.14159265358979323846 * u2;
        spare_ = r * std::sin(a);
        haveSpare_ = true;
        return r * std::cos(a);
    }

private:
    double uniform01() {
        state_ = splitmix64_state();
        // (0, 1]: avoids log(0)
        return (static_cast<double>(state_ >> 11) + 1.0) * 0x1.0p-53;
    }
    std::uint64_t splitmix64_state() {
        counter_ += 0x9e3779b97f4a7c15ULL;
        std::uint64_t x = state_ ^ counter_;
        x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
        x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
        return x ^ (x >> 31);
    }
    std::uint64_t state_;
    std::uint64_t counter_ = 0;
    bool haveSpare_ = false;
    double spare_ = 0.0;
};

double pairwise_sum(const std::vector<double>& v, std::size_t lo, std::size_t hi) {
    if (hi - lo <= 8) {
        double s = 0.0;
        for (std::size_t i = lo; i < hi; ++i) s += v[i];
        return s;
    }
    std::size_t mid = lo + (hi - lo) / 2;
    return pairwise_sum(v, lo, mid) + pairwise_sum(v, mid, hi);
}

unsigned worker_count() {
    unsigned n = std::max(1u, std::thread::hardware_concurrency());
    if (const char* cap = std::getenv("XVA_THREADS")) {
        long v = std::strtol(cap, nullptr, 10);
        if (v >= 1) n = std::min<unsigned>(n, static_cast<unsigned>(v));
    }
    return n;
}

} // namespace

double fva_s(const EquityOptionSpec& spec, const MarketEnvironment& env,
             const PartyCredit& creditB, const PartyCredit& creditC) {
    if (env.repoSpread == 0.0) return 0.0;
    double weight = survival_integral(creditB, creditC, spec.maturity);
    return env.repoSpread * weight * spec.spot * bs_delta(spec, env);
}

MarginOutcome evolve_margins(std::span<const PathPoint> path, const MarketEnvironment& env,
                             const PartyCredit& creditB, const PartyCredit& creditC,
                             double v0, double dt, MarginMode mode) {
    if (path.empty()) throw std::invalid_argument("evolve_margins: empty path");
    const double xB = funding_spread(creditB, env) ;
    const double xC = funding_spread(creditC, env);
    const double lamS = env.repoSpread;

    MarginOutcome out;
    out.betaB.resize(path.size());
    out.betaC.resize(path.size());

    double betaB = mode == MarginMode::ReplicationIdentity ? path[0].vHat : std::max(v0, 0.0);
    double betaC = -std::min(v0, 0.0);

    for (std::size_t k = 0; k < path.size(); ++k) {
        if (mode == MarginMode::ReplicationIdentity) betaB = path[k].vHat;
        out.betaB[k] = betaB;
        out.betaC[k] = betaC;
        if (k + 1 == path.size()) break;

        double t = static_cast<double>(k) * dt;
        double weight = survival_probability(creditB, creditC, t);
        double shortB = std::min(betaB - path[k].cHat, 0.0);
        double shortC = std::min(betaC + path[k].cHat, 0.0);
        out.costB += xB * shortB * weight * dt;
        out.costC += xC * shortC * weight * dt;

        if (mode == MarginMode::FullEuler) {
            double hedgePnl = path[k].alphaHat * (path[k + 1].sHat - path[k].sHat);
            betaB += hedgePnl - path[k].alphaHat * lamS * path[k].sHat * dt + xB * shortB * dt;
        }
        betaC += xC * shortC * dt;
    }
    return out;
}

namespace {

struct PathWorkspace {
    std::vector<PathPoint> points;
};

// Simulates one exposure path (discounted units) and returns the two
// funding-cost integrals.
void run_path(std::uint64_t seed, std::size_t pathIndex, const EquityOptionSpec& spec,
              const MarketEnvironment& env, const PartyCredit& creditB,
              const PartyCredit& creditC, const CollateralTerms& terms, double v0,
              const McConfig& mc, std::size_t nSteps, PathWorkspace& ws, double& costB,
              double& costC) {
    NormalRng rng(splitmix64(seed ^ (0x9e3779b97f4a7c15ULL * (pathIndex + 1))));
    const double dt = mc.dt;
    const double sigma = env.volatility;
    const double q = env.dividendYield;

    ws.points.resize(nSteps + 1);
    double sHat = spec.spot;
    for (std::size_t k = 0; k <= nSteps; ++k) {
        double t = static_cast<double>(k) * dt;
        double p = env.discount(t);
        double spot = sHat * std::exp(-q * t) / p;
        double ve = bs_value_at(spec, env, spot, t);
        double collateral = 0.0;
        switch (mc.rule) {
            case CollateralRule::None:
                break;
            case CollateralRule::ThresholdMta:
                collateral = collateral_value(ve, terms, t);
                break;
            case CollateralRule::Proportional:
                collateral = proportional_collateral(ve, creditB.recovery, creditC.recovery);
                break;
        }
        double tau = spec.maturity - t;
        double alpha = 0.0;
        if (tau > 0.0) {
            EquityOptionSpec live = spec;
            live.spot = spot;
            live.maturity = tau;
            alpha = bs_delta(live, env) * std::exp(-q * t);
        }
        ws.points[k] = PathPoint{sHat, ve * p, collateral * p, alpha};
        if (k < nSteps)
            sHat *= std::exp(-0.5 * sigma * sigma * dt + sigma * std::sqrt(dt) * rng.next());
    }

    auto outcome = evolve_margins(ws.points, env, creditB, creditC, v0, dt, mc.marginMode);
    costB = outcome.costB;
    costC = outcome.costC;
}

} // namespace

FvaEstimate fva_bc(const EquityOptionSpec& spec, const MarketEnvironment& env,
                   const PartyCredit& creditB, const PartyCredit& creditC,
                   const CollateralTerms& terms, double v0, const McConfig& mc) {
    spec.validate();
    env.validate();
    if (mc.dt <= 0.0) throw std::invalid_argument("fva_bc: dt must be > 0");
    auto nSteps = static_cast<std::size_t>(std::lround(spec.maturity / mc.dt));
    if (nSteps < 1 || std::abs(static_cast<double>(nSteps) * mc.dt - spec.maturity) > 1e-9)
        throw std::invalid_argument("fva_bc: dt must divide T");
    if (mc.nPaths == 0) throw std::invalid_argument("fva_bc: nPaths must be >= 1");

    std::vector<double> contribB(mc.nPaths), contribC(mc.nPaths);
    unsigned workers = worker_count();
    std::vector<std::thread> pool;
    std::size_t block = (mc.nPaths + workers - 1) / workers;
    for (unsigned w = 0; w < workers; ++w) {
        std::size_t lo = static_cast<std::size_t>(w) * block;
        std::size_t hi = std::min(lo + block, static_cast<std::size_t>(mc.nPaths));
        if (lo >= hi) break;
        pool.emplace_back([&, lo, hi] {
            PathWorkspace ws;
            for (std::size_t i = lo; i < hi; ++i)
                run_path(mc.seed, i, spec, env, creditB, creditC, terms, v0, mc, nSteps, ws,
                         contribB[i], contribC[i]);
        });
    }
    for (auto& th : pool) th.join();

    auto n = static_cast<double>(mc.nPaths);
    double meanB = pairwise_sum(contribB, 0, contribB.size()) / n;
    double meanC = pairwise_sum(contribC, 0, contribC.size()) / n;

    double varB = 0.0, varC = 0.0;
    for (std::size_t i = 0; i < mc.nPaths; ++i) {
        varB += (contribB[i] - meanB) * (contribB[i] - meanB);
        varC += (contribC[i] - meanC) * (contribC[i] - meanC);
    }
    double denom = n > 1 ? n * (n - 1) : n;

    FvaEstimate est;
    est.fvaB = -meanB + 0.0; // cost integral is <= 0; "+ 0.0" drops the -0
    est.fvaC = meanC;
    est.seB = std::sqrt(varB / denom);
    est.seC = std::sqrt(varC / denom);
    return est;
}

ValuationReport solve_premium(const EquityOptionSpec& spec, const MarketEnvironment& env,
                              const PartyCredit& creditB, const PartyCredit& creditC,
                              const CollateralTerms& terms, const PremiumSolverConfig& cfg) {
    ValuationReport report;
    report.ve = black_scholes_price(spec, env);
    CvaResult cva = cva_equity(spec, env, creditB, creditC, terms);
    report.cvaB = cva.cvaB;
    report.cvaC = cva.cvaC;
    report.fvaS = fva_s(spec, env, creditB, creditC);
    double rhs = report.ve + report.cvaB + report.cvaC + report.fvaS;

    double xB = funding_spread(creditB, env);
    double xC = funding_spread(creditC, env);
    if (xB == 0.0 && xC == 0.0) {
        report.v0 = rhs;
        report.solverIterations = 1;
        report.residual = 0.0;
        return report;
    }

    // Fixed-point iteration with common random numbers: the premium only
    // enters the funding costs through the margin initial conditions, so
    //   v <- rhs + FVA_B(v) + FVA_C(v)
    // typically settles in a couple of simulations.
    double tol = cfg.toleranceScale * spec.spot;
    double v = rhs;
    FvaEstimate last = fva_bc(spec, env, creditB, creditC, terms, v, cfg.mc);
    int iterations = 1;
    double residual = std::abs(v - last.fvaB - last.fvaC - rhs);
    while (residual > tol && iterations < cfg.maxIterations) {
        v = rhs + last.fvaB + last.fvaC;
        last = fva_bc(spec, env, creditB, creditC, terms, v, cfg.mc);
        residual = std::abs(v - last.fvaB - last.fvaC - rhs);
        ++iterations;
    }
    if (residual > tol)
        throw std::runtime_error("solve_premium: premium iteration failed to converge");

    report.v0 = v;
    report.fvaB = last.fvaB;
    report.fvaC = last.fvaC;
    report.seFvaB = last.seB;
    report.seFvaC = last.seC;
    report.solverIterations = iterations;
    report.residual = residual;
    return report;
}

} // namespace xva
