#include "xva/lattice.hpp"

#include <cmath>
#include <iostream>
#include <stdexcept>

namespace xva {

BinomialTree build_tree(const MarketEnvironment& env, const EquityOptionSpec& spec, double dt) {
    spec.validate();
    env.validate();
    if (dt <= 0.0) throw std::invalid_argument("build_tree: dt must be > 0");
    int steps = static_cast<int>(std::lround(spec.maturity / dt));
    if (steps < 1 || std::abs(steps * dt - spec.maturity) > 1e-8 * std::max(1.0, spec.maturity))
        throw std::invalid_argument("build_tree: T/dt must round to an integer step count");

    BinomialTree tree;
    tree.dt = spec.maturity / steps; // exact coverage of [0, T]
    tree.steps = steps;
    tree.up = std::exp(env.volatility * std::sqrt(tree.dt));
    tree.down = 1.0 / tree.up;

    // Flat-rate growth per step; curve-based environments use the step's
    // forward discount ratio, which reduces to e^{(r-q)dt} when flat.
    double p0 = env.discount(0.0);
    double p1 = env.discount(tree.dt);
    double growth = std::exp(-env.dividendYield * tree.dt) * p0 / p1;
    tree.probUp = (growth - tree.down) / (tree.up - tree.down);
    tree.discountPerStep = p1 / p0;
    if (!(tree.probUp > 0.0 && tree.probUp < 1.0))
        throw std::runtime_error(
            "build_tree: risk-neutral probability outside (0,1); use a smaller dt");

    tree.spots.resize(static_cast<std::size_t>(steps) + 1);
    for (int i = 0; i <= steps; ++i) {
        auto& level = tree.spots[static_cast<std::size_t>(i)];
        level.resize(static_cast<std::size_t>(i) + 1);
        for (int j = 0; j <= i; ++j)
            level[static_cast<std::size_t>(j)] =
                spec.spot * std::pow(tree.up, j) * std::pow(tree.down, i - j);
    }
    return tree;
}

NodeField tree_price_and_delta(const BinomialTree& tree, const EquityOptionSpec& spec,
                               const MarketEnvironment& env) {
    (void)env;
    NodeField field;
    int n = tree.steps;
    field.value.resize(static_cast<std::size_t>(n) + 1);
    field.delta.resize(static_cast<std::size_t>(n));

    auto payoff = [&](double s) {
        double v = spec.side == OptionSide::Call ? s - spec.strike : spec.strike - s;
        return std::max(v, 0.0);
    };

    auto& terminal = field.value[static_cast<std::size_t>(n)];
    terminal.resize(static_cast<std::size_t>(n) + 1);
    for (int j = 0; j <= n; ++j)
        terminal[static_cast<std::size_t>(j)] = payoff(tree.spots[static_cast<std::size_t>(n)][static_cast<std::size_t>(j)]);

    for (int i = n - 1; i >= 0; --i) {
        auto& level = field.value[static_cast<std::size_t>(i)];
        auto& deltas = field.delta[static_cast<std::size_t>(i)];
        const auto& next = field.value[static_cast<std::size_t>(i) + 1];
        const auto& nextSpots = tree.spots[static_cast<std::size_t>(i) + 1];
        level.resize(static_cast<std::size_t>(i) + 1);
        deltas.resize(static_cast<std::size_t>(i) + 1);
        for (int j = 0; j <= i; ++j) {
            auto ju = static_cast<std::size_t>(j);
            level[ju] = tree.discountPerStep *
                        (tree.probUp * next[ju + 1] + (1.0 - tree.probUp) * next[ju]);
            deltas[ju] = (next[ju + 1] - next[ju]) / (nextSpots[ju + 1] - nextSpots[ju]);
        }
    }
    return field;
}

namespace {

// Tridiagonal solve, Thomas algorithm. a: sub, b: diag, c: super.
void thomas_solve(std::vector<double>& a, std::vector<double>& b, std::vector<double>& c,
                  std::vector<double>& d) {
    std::size_t n = b.size();
    for (std::size_t i = 1; i < n; ++i) {
        double w = a[i] / b[i - 1];
        b[i] -= w * c[i - 1];
        d[i] -= w * d[i - 1];
    }
    d[n - 1] /= b[n - 1];
    for (std::size_t i = n - 1; i-- > 0;) d[i] = (d[i] - c[i] * d[i + 1]) / b[i];
}

} // namespace

double solve_predefault_pde(const EquityOptionSpec& spec, const MarketEnvironment& env,
                            const PartyCredit& creditB, const PdeConfig& cfg) {
    spec.validate();
    env.validate();
    creditB.validate();
    if (spec.side != OptionSide::Call && spec.side != OptionSide::Put)
        throw std::invalid_argument("solve_predefault_pde: unsupported payoff");

    const double T = spec.maturity;
    const double sigma = env.volatility;
    const double lamS = env.repoSpread;
    const double x0 = std::log(spec.spot);
    const double width = cfg.domainWidthStdDevs * sigma * std::sqrt(T);

    int nx = cfg.spaceSteps;
    int nt = cfg.timeSteps;
    double mu = lamS - 0.5 * sigma * sigma;
    // Cell-Peclet check on the convection term; re-grid if violated.
    while (std::abs(mu) * (2.0 * width / nx) > sigma * sigma && nx < (1 << 16)) {
        nx *= 2;
        nt *= 2;
        std::cerr << "solve_predefault_pde: refining grid to satisfy the convection "
                     "stability bound (nx="
                  << nx << ")\n";
    }

    const double dx = 2.0 * width / nx;
    const double dt = T / nt;
    const double pT = env.discount(T);
    const double qy = env.dividendYield;

    // Terminal condition in discounted units: hatV(T,x) = P(0,T) f(S_T),
    // with S_T = e^x e^{-qT} / P(0,T).
    std::vector<double> v(static_cast<std::size_t>(nx) + 1);
    auto spotOf = [&](double x) { return std::exp(x) * std::exp(-qy * T) / pT; };
    for (int i = 0; i <= nx; ++i) {
        double s = spotOf(x0 - width + i * dx);
        double pay = spec.side == OptionSide::Call ? s - spec.strike : spec.strike - s;
        v[static_cast<std::size_t>(i)] = pT * std::max(pay, 0.0);
    }

    const double diff = 0.5 * sigma * sigma;
    auto boundary = [&](double t, bool upper) {
        double ttm = T - t;
        double kill = std::exp(-creditB.intensity.integral(t, T) * creditB.lossRate());
        double x = upper ? x0 + width : x0 - width;
        double fwdHat = std::exp(x) * std::exp(lamS * ttm) * std::exp(-qy * T);
        double intrinsic = spec.side == OptionSide::Call ? fwdHat - spec.strike * pT
                                                         : spec.strike * pT - fwdHat;
        return std::max(kill * intrinsic, 0.0);
    };

    int rannacher = cfg.rannacherHalfSteps;
    std::vector<double> sub(static_cast<std::size_t>(nx) - 1), diag(sub.size()),
        sup(sub.size()), rhs(sub.size());

    double t = T;
    int stepIndex = 0;
    while (t > 1e-14) {
        bool implicitStep = stepIndex < rannacher;
        double h = implicitStep ? 0.5 * dt : dt;
        if (t - h < 0.0) h = t;
        double tNew = t - h;
        double theta = implicitStep ? 1.0 : 0.5; // implicit Euler start-up, then CN
        double kappa = creditB.intensity(0.5 * (t + tNew)) * creditB.lossRate();

        double alpha = diff / (dx * dx);
        double beta = mu / (2.0 * dx);
        // L v = alpha (v_{i+1} - 2 v_i + v_{i-1}) + beta (v_{i+1} - v_{i-1}) - kappa v_i
        for (std::size_t i = 0; i < sub.size(); ++i) {
            sub[i] = -theta * h * (alpha - beta);
            diag[i] = 1.0 + theta * h * (2.0 * alpha + kappa);
            sup[i] = -theta * h * (alpha + beta);
        }
        double lowerNew = boundary(tNew, false);
        double upperNew = boundary(tNew, true);
        double lowerOld = v.front();
        double upperOld = v.back();
        for (std::size_t i = 0; i < rhs.size(); ++i) {
            double vm = v[i], vc = v[i + 1], vp = v[i + 2];
            double lv = alpha * (vp - 2.0 * vc + vm) + beta * (vp - vm) - kappa * vc;
            rhs[i] = vc + (1.0 - theta) * h * lv;
        }
        rhs.front() += theta * h * (alpha - beta) * lowerNew;
        rhs.back() += theta * h * (alpha + beta) * upperNew;
        (void)lowerOld;
        (void)upperOld;

        std::vector<double> a = sub, b = diag, c = sup, d = rhs;
        thomas_solve(a, b, c, d);
        for (std::size_t i = 0; i < d.size(); ++i) v[i + 1] = d[i];
        v.front() = lowerNew;
        v.back() = upperNew;
        t = tNew;
        ++stepIndex;
    }

    return v[static_cast<std::size_t>(nx) / 2]; // grid centered on ln S0
}

} // namespace xva
