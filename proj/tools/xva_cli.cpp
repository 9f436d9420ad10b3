// Command-line driver for the valuation library. Loads a config and
// optional curve CSVs, runs a single valuation or a hazard-rate sweep, and
// writes plot-ready CSV output.
#include <cstdio>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "xva.h"

namespace {

struct Sweep {
    double start = 0.0;
    double step = 0.0;
    double end = 0.0;
};

std::optional<Sweep> parse_sweep(const std::string& text, std::string& error) {
    Sweep s;
    char tail = 0;
    if (std::sscanf(text.c_str(), "%lf:%lf:%lf%c", &s.start, &s.step, &s.end, &tail) != 3) {
        error = "--sweep expects start:step:end, got '" + text + "'";
        return std::nullopt;
    }
    return s;
}

struct SessionDeleter {
    void operator()(xva_session* s) const { xva_session_destroy(s); }
};
using Session = std::unique_ptr<xva_session, SessionDeleter>;

int bail(xva_session* s, int rc) {
    std::cerr << "error: " << xva_last_error(s) << "\n";
    return rc;
}

// Streams a produced CSV file to stdout when no --out was given.
int emit_file(const std::string& path, bool toStdout) {
    if (!toStdout) return 0;
    std::ifstream in(path, std::ios::binary);
    std::cout << in.rdbuf();
    std::remove(path.c_str());
    return 0;
}

int run_option_single(xva_session* s, const xva_mc_params& mc, const std::string& outPath) {
    xva_option_report r{};
    int rc = xva_price_option(s, &mc, &r);
    if (rc != XVA_OK) return bail(s, rc);
    double lamB = 0.0;
    xva_seller_hazard_rate(s, &lamB);

    std::ostringstream csv;
    char row[256];
    std::snprintf(row, sizeof row, "%.10g,%.10g,%.10g,%.10g,%.10g,%.10g,%.10g,%.10g\n", lamB,
                  r.v_e, r.cva_b, r.cva_c, r.fva_s, r.fva_b, r.fva_c, r.v_0);
    csv << "lambda_B,V_e,CVA_B,CVA_C,FVA_S,FVA_B,FVA_C,V_0\n" << row;
    if (outPath.empty()) {
        std::cout << csv.str();
    } else {
        std::ofstream out(outPath, std::ios::trunc);
        if (!(out << csv.str())) {
            std::cerr << "error: could not write " << outPath << "\n";
            return XVA_ERR_NUMERICAL;
        }
    }
    return 0;
}

int run_swap_single(xva_session* s, double vol, const std::string& outPath) {
    xva_swap_report r{};
    int rc = xva_price_swap(s, vol, &r);
    if (rc != XVA_OK) return bail(s, rc);
    double lamB = 0.0;
    xva_seller_hazard_rate(s, &lamB);

    std::ostringstream csv;
    char row[192];
    std::snprintf(row, sizeof row, "%.10g,%.10g,%.10g,%.10g,%.10g,%.10g\n", lamB, r.v_e, r.dva,
                  r.cva, r.v_0, r.fair_rate);
    csv << "lambda_B,V_e,DVA,CVA,V_0,fair_rate\n" << row;
    if (outPath.empty()) {
        std::cout << csv.str();
    } else {
        std::ofstream out(outPath, std::ios::trunc);
        if (!(out << csv.str())) {
            std::cerr << "error: could not write " << outPath << "\n";
            return XVA_ERR_NUMERICAL;
        }
    }
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Derivatives valuation with bilateral default and funding adjustments"};
    app.require_subcommand(1);

    std::string configPath, discountPath, forwardPath, outPath, sweepText;
    unsigned long long seed = 42;
    unsigned long long paths = 100000;
    double dt = 1.0 / 52;
    double swaptionVol = 0.20;
    bool csa = true;
    bool fullEuler = false;
    bool checkOnly = false;

    auto addCommon = [&](CLI::App* cmd, bool wantsMc) {
        cmd->add_option("--out", outPath, "Output CSV path (default: stdout)");
        cmd->add_option("--sweep", sweepText, "Seller hazard-rate sweep start:step:end");
        if (wantsMc) {
            cmd->add_option("--seed", seed, "Monte Carlo seed")->capture_default_str();
            cmd->add_option("--paths", paths, "Monte Carlo paths")->capture_default_str();
            cmd->add_option("--dt", dt, "Simulation step in years")->capture_default_str();
            cmd->add_flag("--full-euler", fullEuler,
                          "Evolve the seller margin by the discrete hedged dynamics");
        }
    };

    CLI::App* priceOption = app.add_subcommand("price-option", "Value the configured option");
    priceOption->add_option("--config", configPath, "key = value config file")->required();
    priceOption->add_option("--discount-curve", discountPath, "Discount curve CSV");
    addCommon(priceOption, true);
    priceOption->add_flag("--check-only", checkOnly, "Validate inputs and exit");

    CLI::App* priceSwap = app.add_subcommand("price-swap", "Value the configured swap");
    priceSwap->add_option("--config", configPath, "key = value config file")->required();
    priceSwap->add_option("--discount-curve", discountPath, "Discount curve CSV");
    priceSwap->add_option("--forward-curve", forwardPath, "Forward curve CSV");
    priceSwap->add_option("--swaption-vol", swaptionVol, "Flat lognormal swap-rate volatility")
        ->capture_default_str();
    addCommon(priceSwap, false);
    priceSwap->add_flag("--check-only", checkOnly, "Validate inputs and exit");

    CLI::App* example1 = app.add_subcommand(
        "example1", "ATM equity call under bilateral default and funding risk");
    example1->add_flag("--csa,!--no-csa", csa, "Margining under threshold/MTA terms");
    addCommon(example1, true);

    CLI::App* example2 =
        app.add_subcommand("example2", "10y semi-annual payer swap on the synthetic curves");
    example2->add_option("--swaption-vol", swaptionVol, "Flat lognormal swap-rate volatility")
        ->capture_default_str();
    addCommon(example2, false);

    CLI11_PARSE(app, argc, argv);

    std::optional<Sweep> sweep;
    if (!sweepText.empty()) {
        std::string error;
        sweep = parse_sweep(sweepText, error);
        if (!sweep) {
            std::cerr << "error: " << error << "\n";
            return XVA_ERR_CONFIG;
        }
    }
    // The worked examples are figure sweeps by default.
    if (example1->parsed() && !sweep) sweep = Sweep{0.0, 0.0025, 0.03};
    if (example2->parsed() && !sweep) sweep = Sweep{0.0, 0.005, 0.03};

    Session session(xva_session_create());
    if (!session) {
        std::cerr << "error: out of memory\n";
        return XVA_ERR_NUMERICAL;
    }
    xva_session* s = session.get();

    int rc = XVA_OK;
    if (example1->parsed()) {
        rc = xva_use_example1_config(s, csa ? 1 : 0);
    } else if (example2->parsed()) {
        rc = xva_use_example2_config(s);
    } else {
        rc = xva_load_config(s, configPath.c_str());
        if (rc == XVA_OK && !discountPath.empty())
            rc = xva_load_discount_curve(s, discountPath.c_str());
        if (rc == XVA_OK && !forwardPath.empty())
            rc = xva_load_forward_curve(s, forwardPath.c_str());
    }
    if (rc != XVA_OK) return bail(s, rc);

    if (checkOnly) {
        char findings[4096];
        int count = 0;
        rc = xva_validate(s, findings, sizeof findings, &count);
        if (rc != XVA_OK) return bail(s, rc);
        if (count == 0) {
            std::cout << "ok\n";
            return 0;
        }
        std::cout << findings;
        return XVA_ERR_CONFIG;
    }

    xva_mc_params mc;
    xva_mc_params_default(&mc);
    mc.seed = seed;
    mc.n_paths = paths;
    mc.dt = dt;
    mc.full_euler_margins = fullEuler ? 1 : 0;

    int isOption = 1;
    xva_trade_is_option(s, &isOption);

    if (!sweep)
        return isOption ? run_option_single(s, mc, outPath)
                        : run_swap_single(s, swaptionVol, outPath);

    bool toStdout = outPath.empty();
    std::string target = toStdout ? std::string("xva_cli_tmp.csv") : outPath;
    rc = isOption ? xva_sweep_option(s, &mc, sweep->start, sweep->step, sweep->end,
                                     target.c_str())
                  : xva_sweep_swap(s, swaptionVol, sweep->start, sweep->step, sweep->end,
                                   target.c_str());
    if (rc != XVA_OK) return bail(s, rc);
    return emit_file(target, toStdout);
}
