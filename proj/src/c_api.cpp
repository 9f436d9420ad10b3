#include "xva.h"

#include <cstring>
#include <new>
#include <string>

#include "xva/cva.hpp"
#include "xva/runner.hpp"
#include "xva/swap.hpp"

using namespace xva;

struct xva_session {
    MarketConfig cfg;
    std::optional<DiscountCurve> discount;
    std::optional<ForwardCurve> forwards;
    bool configured = false;
    std::string lastError = "ok";
};

namespace {

int fail(xva_session* s, int code, const std::string& msg) {
    if (s) s->lastError = msg;
    return code;
}

template <typename Fn>
int guarded(xva_session* s, Fn&& fn) {
    if (!s) return XVA_ERR_ARGUMENT;
    try {
        fn();
        s->lastError = "ok";
        return XVA_OK;
    } catch (const ConfigError& e) {
        return fail(s, XVA_ERR_CONFIG, e.what());
    } catch (const std::invalid_argument& e) {
        return fail(s, XVA_ERR_CONFIG, e.what());
    } catch (const std::exception& e) {
        return fail(s, XVA_ERR_NUMERICAL, e.what());
    }
}

McConfig to_mc(const xva_mc_params* p) {
    McConfig mc;
    if (p) {
        mc.seed = p->seed;
        mc.nPaths = static_cast<std::size_t>(p->n_paths);
        mc.dt = p->dt;
        mc.marginMode =
            p->full_euler_margins ? MarginMode::FullEuler : MarginMode::ReplicationIdentity;
    }
    return mc;
}

int require_config(xva_session* s) {
    if (!s->configured)
        throw ConfigError("no configuration loaded; call xva_load_config or an example setup");
    return XVA_OK;
}

} // namespace

extern "C" {

xva_session* xva_session_create(void) { return new (std::nothrow) xva_session; }

void xva_session_destroy(xva_session* s) { delete s; }

const char* xva_last_error(const xva_session* s) {
    return s ? s->lastError.c_str() : "null session";
}

int xva_load_config(xva_session* s, const char* path) {
    return guarded(s, [&] {
        if (!path) throw ConfigError("config path is null");
        s->cfg = load_market_config(path);
        s->configured = true;
    });
}

int xva_load_discount_curve(xva_session* s, const char* path) {
    return guarded(s, [&] {
        if (!path) throw ConfigError("curve path is null");
        s->discount = load_discount_curve(path);
        s->cfg.env.curve = s->discount;
    });
}

int xva_load_forward_curve(xva_session* s, const char* path) {
    return guarded(s, [&] {
        if (!path) throw ConfigError("curve path is null");
        s->forwards = load_forward_curve(path);
    });
}

int xva_use_example1_config(xva_session* s, int with_csa) {
    return guarded(s, [&] {
        s->cfg = example1_config(with_csa != 0);
        s->discount.reset();
        s->forwards.reset();
        s->configured = true;
    });
}

int xva_use_example2_config(xva_session* s) {
    return guarded(s, [&] {
        s->cfg = example2_config();
        s->discount = example2_discount_fixture();
        s->forwards = example2_forward_fixture();
        s->configured = true;
    });
}

void xva_mc_params_default(xva_mc_params* p) {
    if (!p) return;
    p->seed = 42;
    p->n_paths = 100000;
    p->dt = 1.0 / 52;
    p->full_euler_margins = 0;
}

int xva_price_option(xva_session* s, const xva_mc_params* mc, xva_option_report* out) {
    return guarded(s, [&] {
        require_config(s);
        if (!out) throw std::runtime_error("output pointer is null");
        if (!s->cfg.trade.isOption()) throw ConfigError("loaded trade is not an option");

        EquityOptionSpec spec = s->cfg.trade.option;
        if (s->cfg.trade.kind == TradeKind::Put) spec.side = OptionSide::Put;

        PremiumSolverConfig solver;
        solver.mc = to_mc(mc);
        bool collateralized =
            s->cfg.terms.threshold(0.0) > 0.0 || s->cfg.terms.minTransfer(0.0) > 0.0;
        solver.mc.rule = collateralized ? CollateralRule::ThresholdMta : CollateralRule::None;

        ValuationReport r =
            solve_premium(spec, s->cfg.env, s->cfg.creditB, s->cfg.creditC, s->cfg.terms, solver);
        out->v_e = r.ve;
        out->cva_b = r.cvaB;
        out->cva_c = r.cvaC;
        out->fva_s = r.fvaS;
        out->fva_b = r.fvaB;
        out->fva_c = r.fvaC;
        out->v_0 = r.v0;
        out->residual = r.residual;
        out->iterations = r.solverIterations;
        out->se_fva_b = r.seFvaB;
        out->se_fva_c = r.seFvaC;
    });
}

int xva_price_swap(xva_session* s, double swaption_vol, xva_swap_report* out) {
    return guarded(s, [&] {
        require_config(s);
        if (!out) throw std::runtime_error("output pointer is null");
        if (s->cfg.trade.isOption()) throw ConfigError("loaded trade is not a swap");
        if (!s->discount) throw ConfigError("swap valuation needs a discount curve");
        if (!s->forwards) throw ConfigError("swap valuation needs a forward curve");

        const SwapSpec& spec = s->cfg.trade.swap;
        out->v_e = swap_value(spec, *s->discount, *s->forwards);
        SwapAdjustments adj = swap_dva_cva(spec, *s->discount, *s->forwards, swaption_vol,
                                           s->cfg.creditB, s->cfg.creditC);
        out->dva = adj.dva;
        out->cva = adj.cva;
        out->v_0 = out->v_e + adj.dva + adj.cva;
        out->fair_rate = adjusted_swap_rate(spec, *s->discount, *s->forwards, swaption_vol,
                                            s->cfg.creditB, s->cfg.creditC);
    });
}

int xva_sweep_option(xva_session* s, const xva_mc_params* mc, double start, double step,
                     double end, const char* out_csv) {
    if (!s) return XVA_ERR_ARGUMENT;
    if (!s->configured || !s->cfg.trade.isOption())
        return fail(s, XVA_ERR_CONFIG, "loaded trade is not an option");

    return guarded(s, [&] {
        if (!out_csv) throw ConfigError("output path is null");
        McConfig mcc = to_mc(mc);
        SweepSpec sweep{start, step, end};
        sweep.validate();

        EquityOptionSpec spec = s->cfg.trade.option;
        if (s->cfg.trade.kind == TradeKind::Put) spec.side = OptionSide::Put;
        bool collateralized =
            s->cfg.terms.threshold(0.0) > 0.0 || s->cfg.terms.minTransfer(0.0) > 0.0;

        std::string csv = "lambda_B,V_e,CVA_B,CVA_C,FVA_S,FVA_B,FVA_C,V_0\n";
        for (double lamB : sweep.points()) {
            PartyCredit creditB = PartyCredit::constant(lamB, s->cfg.creditB.recovery);
            PremiumSolverConfig solver;
            solver.mc = mcc;
            solver.mc.rule =
                collateralized ? CollateralRule::ThresholdMta : CollateralRule::None;
            ValuationReport r =
                solve_premium(spec, s->cfg.env, creditB, s->cfg.creditC, s->cfg.terms, solver);
            char row[256];
            std::snprintf(row, sizeof row,
                          "%.10g,%.10g,%.10g,%.10g,%.10g,%.10g,%.10g,%.10g\n", lamB, r.ve,
                          r.cvaB, r.cvaC, r.fvaS, r.fvaB, r.fvaC, r.v0);
            csv += row;
        }
        std::FILE* f = std::fopen(out_csv, "wb");
        if (!f) throw std::runtime_error(std::string("could not write output file: ") + out_csv);
        std::fwrite(csv.data(), 1, csv.size(), f);
        std::fclose(f);
    });
}

int xva_sweep_swap(xva_session* s, double swaption_vol, double start, double step, double end,
                   const char* out_csv) {
    if (!s) return XVA_ERR_ARGUMENT;
    if (!s->configured || s->cfg.trade.isOption())
        return fail(s, XVA_ERR_CONFIG, "loaded trade is not a swap");

    return guarded(s, [&] {
        if (!out_csv) throw ConfigError("output path is null");
        if (!s->discount) throw ConfigError("swap valuation needs a discount curve");
        if (!s->forwards) throw ConfigError("swap valuation needs a forward curve");
        SweepSpec sweep{start, step, end};
        sweep.validate();

        const SwapSpec& spec = s->cfg.trade.swap;
        double ve = swap_value(spec, *s->discount, *s->forwards);
        std::string csv = "lambda_B,V_e,DVA,CVA,V_0,fair_rate\n";
        for (double lamB : sweep.points()) {
            PartyCredit creditB = PartyCredit::constant(lamB, s->cfg.creditB.recovery);
            SwapAdjustments adj = swap_dva_cva(spec, *s->discount, *s->forwards, swaption_vol,
                                               creditB, s->cfg.creditC);
            double fair = adjusted_swap_rate(spec, *s->discount, *s->forwards, swaption_vol,
                                             creditB, s->cfg.creditC);
            char row[192];
            std::snprintf(row, sizeof row, "%.10g,%.10g,%.10g,%.10g,%.10g,%.10g\n", lamB, ve,
                          adj.dva, adj.cva, ve + adj.dva + adj.cva, fair);
            csv += row;
        }
        std::FILE* f = std::fopen(out_csv, "wb");
        if (!f) throw std::runtime_error(std::string("could not write output file: ") + out_csv);
        std::fwrite(csv.data(), 1, csv.size(), f);
        std::fclose(f);
    });
}

int xva_seller_hazard_rate(xva_session* s, double* out) {
    return guarded(s, [&] {
        require_config(s);
        if (!out) throw std::runtime_error("output pointer is null");
        *out = s->cfg.creditB.intensity(0.0);
    });
}

int xva_trade_is_option(xva_session* s, int* out) {
    return guarded(s, [&] {
        require_config(s);
        if (!out) throw std::runtime_error("output pointer is null");
        *out = s->cfg.trade.isOption() ? 1 : 0;
    });
}

int xva_validate(xva_session* s, char* buf, size_t buflen, int* n_findings) {
    if (!s) return XVA_ERR_ARGUMENT;
    if (!buf || buflen == 0 || !n_findings) return fail(s, XVA_ERR_ARGUMENT, "bad buffer");

    std::string joined;
    int count = 0;
    auto add = [&](const std::string& finding) {
        joined += finding;
        joined += '\n';
        ++count;
    };
    try {
        if (!s->configured) {
            add("no configuration loaded");
        } else {
            try {
                s->cfg.env.validate();
            } catch (const std::exception& e) {
                add(e.what());
            }
            try {
                s->cfg.creditB.validate();
            } catch (const std::exception& e) {
                add(e.what());
            }
            try {
                s->cfg.creditC.validate();
            } catch (const std::exception& e) {
                add(e.what());
            }
            try {
                s->cfg.terms.validate();
            } catch (const std::exception& e) {
                add(e.what());
            }
            try {
                if (s->cfg.trade.isOption())
                    s->cfg.trade.option.validate();
                else
                    s->cfg.trade.swap.validate();
            } catch (const std::exception& e) {
                add(e.what());
            }
            if (!s->cfg.trade.isOption()) {
                if (!s->discount) add("swap valuation needs a discount curve");
                if (!s->forwards) add("swap valuation needs a forward curve");
            }
        }
    } catch (const std::exception& e) {
        return fail(s, XVA_ERR_NUMERICAL, e.what());
    }

    std::size_t n = joined.size() < buflen - 1 ? joined.size() : buflen - 1;
    std::memcpy(buf, joined.data(), n);
    buf[n] = '\0';
    *n_findings = count;
    s->lastError = "ok";
    return XVA_OK;
}

} // extern "C"
