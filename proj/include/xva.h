/* C interface to the xva valuation engine.
 *
 * All functions return a status code (XVA_OK on success). On failure the
 * session keeps a human-readable message retrievable with xva_last_error.
 * Handles are opaque; create one session per independent valuation task.
 */
#ifndef XVA_H
#define XVA_H

#include <stddef.h>

#ifdef __cplusplus
extern "C" {
#endif

#define XVA_OK 0
#define XVA_ERR_CONFIG 2
#define XVA_ERR_NUMERICAL 3
#define XVA_ERR_ARGUMENT 4

typedef struct xva_session xva_session;

xva_session* xva_session_create(void);
void xva_session_destroy(xva_session* s);

/* Message for the most recent failure on this session; never NULL. */
const char* xva_last_error(const xva_session* s);

/* Load the key=value config file (trade, market, credit, CSA terms). */
int xva_load_config(xva_session* s, const char* path);

/* Curve CSVs: "tenor_years,discount_factor" and "start,end,forward_rate". */
int xva_load_discount_curve(xva_session* s, const char* path);
int xva_load_forward_curve(xva_session* s, const char* path);

/* Built-in configurations of the two worked examples (ATM equity call /
 * 10y semi-annual swap on the synthetic curve fixture). */
int xva_use_example1_config(xva_session* s, int with_csa);
int xva_use_example2_config(xva_session* s);

typedef struct {
    unsigned long long seed;    /* default 42 */
    unsigned long long n_paths; /* default 100000 */
    double dt;                  /* default 1/52 */
    int full_euler_margins;     /* 0: replication identity (default) */
} xva_mc_params;

void xva_mc_params_default(xva_mc_params* p);

typedef struct {
    double v_e;
    double cva_b;
    double cva_c;
    double fva_s;
    double fva_b;
    double fva_c;
    double v_0;
    double residual;
    int iterations;
    double se_fva_b;
    double se_fva_c;
} xva_option_report;

typedef struct {
    double v_e;
    double dva;
    double cva;
    double v_0;
    double fair_rate;
} xva_swap_report;

/* Full premium solve for the loaded equity option trade. mc may be NULL
 * for defaults. */
int xva_price_option(xva_session* s, const xva_mc_params* mc, xva_option_report* out);

/* Closed-form swap valuation with DVA/CVA for the loaded swap trade. */
int xva_price_swap(xva_session* s, double swaption_vol, xva_swap_report* out);

/* Sweep lambda_B over [start, start+step, ..., end] and write one CSV row
 * per point. Option CSV header:
 *   lambda_B,V_e,CVA_B,CVA_C,FVA_S,FVA_B,FVA_C,V_0
 * Swap CSV header:
 *   lambda_B,V_e,DVA,CVA,V_0,fair_rate
 */
int xva_sweep_option(xva_session* s, const xva_mc_params* mc, double start, double step,
                     double end, const char* out_csv);
int xva_sweep_swap(xva_session* s, double swaption_vol, double start, double step,
                   double end, const char* out_csv);

/* Seller hazard rate of the loaded config, for labeling single-point
 * runs. */
int xva_seller_hazard_rate(xva_session* s, double* out);

/* Sets *out to 1 when the loaded trade is an option, 0 for a swap. */
int xva_trade_is_option(xva_session* s, int* out);

/* Writes newline-separated findings into buf (truncated to buflen) and the
 * finding count into n_findings; zero findings means runnable. */
int xva_validate(xva_session* s, char* buf, size_t buflen, int* n_findings);

#ifdef __cplusplus
} /* extern "C" */
#endif

#endif /* XVA_H */
