#include "xva/runner.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <stdexcept>

#include "xva/cva.hpp"
#include "xva/swap.hpp"

namespace xva {

std::vector<double> SweepSpec::points() const {
    validate();
    std::vector<double> pts;
    for (int i = 0;; ++i) {
        double x = start + static_cast<double>(i) * step;
        if (x > end + 1e-12) break;
        pts.push_back(std::min(x, end));
    }
    return pts;
}

void SweepSpec::validate() const {
    if (!std::isfinite(start) || !std::isfinite(end))
        throw std::invalid_argument("sweep: bounds must be finite");
    if (!(step > 0.0)) throw std::invalid_argument("sweep: step must be > 0");
    if (end < start) throw std::invalid_argument("sweep: end must be >= start");
}

MarketConfig example1_config(bool csa) {
    MarketConfig cfg;
    cfg.env.riskFreeRate = 0.03;
    cfg.env.dividendYield = 0.0;
    cfg.env.volatility = 0.20;
    cfg.env.repoSpread = 0.0075;
    cfg.env.marketFundingSpread = 0.0;
    cfg.creditB = PartyCredit::constant(0.02, 0.4);
    cfg.creditC = PartyCredit::constant(0.015, 0.4);
    cfg.terms = csa ? CollateralTerms(4.0, 2.0) : CollateralTerms(0.0, 0.0);
    cfg.trade.kind = TradeKind::Call;
    cfg.trade.option = EquityOptionSpec{100.0, 100.0, 1.0, OptionSide::Call};
    cfg.pathStep = 1.0 / 52;
    return cfg;
}

MarketConfig example2_config() {
    MarketConfig cfg;
    cfg.env.curve = example2_discount_fixture();
    cfg.env.volatility = 0.20; // unused by the closed-form swap adjustments
    cfg.creditB = PartyCredit::constant(0.02, 0.4);
    cfg.creditC = PartyCredit::constant(0.00015, 0.4);
    cfg.terms = CollateralTerms(0.0, 0.0);
    cfg.trade.kind = TradeKind::PayerSwap;
    cfg.trade.swap.grid = example2_grid();
    cfg.trade.swap.fixedRate = 0.0145;
    cfg.trade.swap.direction = SwapDirection::Payer;
    cfg.trade.swap.notional = 1.0;
    return cfg;
}

namespace {

std::string fmt(double x) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.10g", x);
    return buf;
}

struct RunInputs {
    MarketConfig cfg;
    std::optional<DiscountCurve> discount;
    std::optional<ForwardCurve> forwards;
};

RunInputs gather_inputs(const RunRequest& request) {
    RunInputs in;
    switch (request.command) {
        case Command::Example1:
            in.cfg = example1_config(request.csa);
            break;
        case Command::Example2:
            in.cfg = example2_config();
            in.discount = example2_discount_fixture();
            in.forwards = example2_forward_fixture();
            break;
        default:
            if (request.configPath.empty())
                throw ConfigError("a --config file is required for this command");
            in.cfg = load_market_config(request.configPath);
            break;
    }
    if (!request.discountCurvePath.empty()) {
        in.discount = load_discount_curve(request.discountCurvePath);
        in.cfg.env.curve = in.discount;
    }
    if (!request.forwardCurvePath.empty())
        in.forwards = load_forward_curve(request.forwardCurvePath);

    if (!in.cfg.trade.isOption()) {
        if (!in.discount) throw ConfigError("swap valuation needs a discount curve");
        if (!in.forwards) throw ConfigError("swap valuation needs a forward curve");
    }
    return in;
}

std::string sweep_option_csv(const RunRequest& request, const RunInputs& in) {
    const MarketConfig& cfg = in.cfg;
    EquityOptionSpec spec = cfg.trade.option;
    if (cfg.trade.kind == TradeKind::Put) spec.side = OptionSide::Put;

    PremiumSolverConfig solver;
    solver.mc.seed = request.seed;
    solver.mc.nPaths = request.nPaths;
    solver.mc.dt = request.dt;
    solver.mc.marginMode = request.marginMode;
    bool collateralized = cfg.terms.threshold(0.0) > 0.0 || cfg.terms.minTransfer(0.0) > 0.0;
    solver.mc.rule = collateralized ? CollateralRule::ThresholdMta : CollateralRule::None;

    std::vector<double> lambdas;
    if (request.sweep)
        lambdas = request.sweep->points();
    else
        lambdas = {cfg.creditB.intensity(0.0)};

    std::ostringstream out;
    out << "lambda_B,V_e,CVA_B,CVA_C,FVA_S,FVA_B,FVA_C,V_0\n";
    for (double lamB : lambdas) {
        PartyCredit creditB = PartyCredit::constant(lamB, cfg.creditB.recovery);
        ValuationReport r =
            solve_premium(spec, cfg.env, creditB, cfg.creditC, cfg.terms, solver);
        out << fmt(lamB) << ',' << fmt(r.ve) << ',' << fmt(r.cvaB) << ',' << fmt(r.cvaC)
            << ',' << fmt(r.fvaS) << ',' << fmt(r.fvaB) << ',' << fmt(r.fvaC) << ','
            << fmt(r.v0) << '\n';
    }
    return out.str();
}

std::string sweep_swap_csv(const RunRequest& request, const RunInputs& in) {
    const MarketConfig& cfg = in.cfg;
    const SwapSpec& spec = cfg.trade.swap;
    const DiscountCurve& discount = *in.discount;
    const ForwardCurve& forwards = *in.forwards;

    std::vector<double> lambdas;
    if (request.sweep)
        lambdas = request.sweep->points();
    else
        lambdas = {cfg.creditB.intensity(0.0)};

    std::ostringstream out;
    out << "lambda_B,V_e,DVA,CVA,V_0,fair_rate\n";
    double ve = swap_value(spec, discount, forwards);
    for (double lamB : lambdas) {
        PartyCredit creditB = PartyCredit::constant(lamB, cfg.creditB.recovery);
        SwapAdjustments adj =
            swap_dva_cva(spec, discount, forwards, request.swaptionVol, creditB, cfg.creditC);
        double fair = adjusted_swap_rate(spec, discount, forwards, request.swaptionVol,
                                         creditB, cfg.creditC);
        out << fmt(lamB) << ',' << fmt(ve) << ',' << fmt(adj.dva) << ',' << fmt(adj.cva)
            << ',' << fmt(ve + adj.dva + adj.cva) << ',' << fmt(fair) << '\n';
    }
    return out.str();
}

void deliver(const std::string& csv, const std::string& path) {
    if (path.empty()) {
        std::cout << csv;
        return;
    }
    std::ofstream out(path, std::ios::trunc);
    if (!out || !(out << csv) || !out.flush()) {
        out.close();
        std::remove(path.c_str());
        throw std::runtime_error("could not write output file: " + path);
    }
}

} // namespace

int run(const RunRequest& request, std::string& error) {
    try {
        if (request.sweep) request.sweep->validate();
        RunInputs in = gather_inputs(request);
        std::string csv = in.cfg.trade.isOption() ? sweep_option_csv(request, in)
                                                  : sweep_swap_csv(request, in);
        deliver(csv, request.outputPath);
        return kExitOk;
    } catch (const ConfigError& e) {
        error = e.what();
        return kExitConfig;
    } catch (const std::invalid_argument& e) {
        error = e.what();
        return kExitConfig;
    } catch (const std::exception& e) {
        error = e.what();
        return kExitNumerical;
    }
}

std::vector<std::string> validate(const RunRequest& request) {
    std::vector<std::string> findings;
    if (request.sweep) {
        try {
            request.sweep->validate();
        } catch (const std::exception& e) {
            findings.emplace_back(e.what());
        }
    }
    if (!(request.dt > 0.0)) findings.emplace_back("dt: must be > 0");
    if (request.nPaths == 0) findings.emplace_back("paths: must be >= 1");
    try {
        RunInputs in = gather_inputs(request);
        in.cfg.env.validate();
        in.cfg.creditB.validate();
        in.cfg.creditC.validate();
        in.cfg.terms.validate();
        if (in.cfg.trade.isOption())
            in.cfg.trade.option.validate();
        else
            in.cfg.trade.swap.validate();
    } catch (const std::exception& e) {
        findings.emplace_back(e.what());
    }
    return findings;
}

} // namespace xva
