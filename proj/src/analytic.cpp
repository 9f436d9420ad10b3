#include "xva/analytic.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace xva {

namespace {
constexpr double kTwoPi = 6.283185307179586476925286766559;
}

double norm_pdf(double x) { return std::exp(-0.5 * x * x) / std::sqrt(kTwoPi); }

double norm_cdf(double x) {
    if (std::isinf(x)) return x > 0 ? 1.0 : 0.0;
    return 0.5 * std::erfc(-x / std::sqrt(2.0));
}

namespace {

// Genz's reduction of the Drezner-Wesolowsky correlation integral,
// translated from the TVPACK BVND routine. Returns P(X > h, Y > k).
double bvn_upper(double h, double k, double rho) {
    static const double x3[] = {-0.9324695142031522, -0.6612093864662647, -0.2386191860831970};
    static const double w3[] = {0.1713244923791705, 0.3607615730481384, 0.4679139345726904};
    static const double x6[] = {-0.9815606342467191, -0.9041172563704750, -0.7699026741943050,
                                -0.5873179542866171, -0.3678314989981802, -0.1252334085114692};
    static const double w6[] = {0.04717533638651177, 0.1069393259953183, 0.1600783285433464,
                                0.2031674267230659,  0.2334925365383547, 0.2491470458134029};
    static const double x10[] = {-0.9931285991850949, -0.9639719272779138, -0.9122344282513259,
                                 -0.8391169718222188, -0.7463319064601508, -0.6360536807265150,
                                 -0.5108670019508271, -0.3737060887154196, -0.2277858511416451,
                                 -0.07652652113349733};
    static const double w10[] = {0.01761400713915212, 0.04060142980038694, 0.06267204833410906,
                                 0.08327674157670475, 0.1019301198172404,  0.1181945319615184,
                                 0.1316886384491766,  0.1420961093183821,  0.1491729864726037,
                                 0.1527533871307259};

    const double* x;
    const double* w;
    int lg;
    double ar = std::abs(rho);
    if (ar < 0.3) {
        x = x3; w = w3; lg = 3;
    } else if (ar < 0.75) {
        x = x6; w = w6; lg = 6;
    } else {
        x = x10; w = w10; lg = 10;
    }

    double hk = h * k;
    double bvn = 0.0;
    if (ar < 0.925) {
        double hs = (h * h + k * k) / 2.0;
        double asr = std::asin(rho);
        for (int i = 0; i < lg; ++i) {
            double sn = std::sin(asr * (x[i] + 1.0) / 2.0);
            bvn += w[i] * std::exp((sn * hk - hs) / (1.0 - sn * sn));
            sn = std::sin(asr * (-x[i] + 1.0) / 2.0);
            bvn += w[i] * std::exp((sn * hk - hs) / (1.0 - sn * sn));
        }
        return bvn * asr / (2.0 * kTwoPi) + norm_cdf(-h) * norm_cdf(-k);
    }

    if (rho < 0.0) {
        k = -k;
        hk = -hk;
    }
    if (ar < 1.0) {
        double as = (1.0 - rho) * (1.0 + rho);
        double a = std::sqrt(as);
        double bs = (h - k) * (h - k);
        double c = (4.0 - hk) / 8.0;
        double d = (12.0 - hk) / 16.0;
        bvn = a * std::exp(-(bs / as + hk) / 2.0) *
              (1.0 - c * (bs - as) * (1.0 - d * bs / 5.0) / 3.0 + c * d * as * as / 5.0);
        if (hk > -160.0) {
            double b = std::sqrt(bs);
            bvn -= std::exp(-hk / 2.0) * std::sqrt(kTwoPi) * norm_cdf(-b / a) * b *
                   (1.0 - c * bs * (1.0 - d * bs / 5.0) / 3.0);
        }
        a /= 2.0;
        for (int i = 0; i < lg; ++i) {
            double xs = a * (x[i] + 1.0);
            xs *= xs;
            double rs = std::sqrt(1.0 - xs);
            bvn += a * w[i] *
                   (std::exp(-bs / (2.0 * xs) - hk / (1.0 + rs)) / rs -
                    std::exp(-(bs / xs + hk) / 2.0) * (1.0 + c * xs * (1.0 + d * xs)));
            xs = as * (1.0 - x[i]) * (1.0 - x[i]) / 4.0;
            rs = std::sqrt(1.0 - xs);
            bvn += a * w[i] * std::exp(-(bs / xs + hk) / 2.0) *
                   (std::exp(-hk * xs / (2.0 * (1.0 + rs) * (1.0 + rs))) / rs -
                    (1.0 + c * xs * (1.0 + d * xs)));
        }
        bvn = -bvn / kTwoPi;
    }
    if (rho > 0.0) return bvn + norm_cdf(-std::max(h, k));
    bvn = -bvn;
    if (k > h) bvn += norm_cdf(k) - norm_cdf(h);
    return bvn;
}

} // namespace

double bivariate_normal_cdf(double x, double y, double rho) {
    if (std::isnan(rho) || std::abs(rho) > 1.0)
        throw std::invalid_argument("bivariate_normal_cdf: |rho| must be <= 1");
    if (std::isinf(x) || std::isinf(y)) {
        if (x < 0 || y < 0) return 0.0;
        if (std::isinf(x) && std::isinf(y)) return 1.0;
        return std::isinf(x) ? norm_cdf(y) : norm_cdf(x);
    }
    if (rho == 1.0) return norm_cdf(std::min(x, y));
    if (rho == -1.0) return std::max(0.0, norm_cdf(x) + norm_cdf(y) - 1.0);
    return bvn_upper(-x, -y, rho);
}

namespace {

struct BsInputs {
    double forward;  // S0 e^{-qT} / P(0,T)
    double discount; // P(0,T)
    double stdev;    // sigma sqrt(T)
};

BsInputs bs_inputs(double spot, double dividendYield, const MarketEnvironment& env,
                   double maturity) {
    double p = env.discount(maturity);
    return {spot * std::exp(-dividendYield * maturity) / p, p,
            env.volatility * std::sqrt(maturity)};
}

double bs_forward_value(OptionSide side, const BsInputs& in, double strike) {
    if (in.stdev <= 0.0) {
        double intrinsic = side == OptionSide::Call ? in.forward - strike : strike - in.forward;
        return in.discount * std::max(intrinsic, 0.0);
    }
    double d1 = std::log(in.forward / strike) / in.stdev + 0.5 * in.stdev;
    double d2 = d1 - in.stdev;
    if (side == OptionSide::Call)
        return in.discount * (in.forward * norm_cdf(d1) - strike * norm_cdf(d2));
    return in.discount * (strike * norm_cdf(-d2) - in.forward * norm_cdf(-d1));
}

} // namespace

double black_scholes_price(const EquityOptionSpec& spec, const MarketEnvironment& env) {
    spec.validate();
    env.validate();
    return bs_forward_value(spec.side, bs_inputs(spec.spot, env.dividendYield, env, spec.maturity),
                            spec.strike);
}

double bs_delta(const EquityOptionSpec& spec, const MarketEnvironment& env) {
    spec.validate();
    env.validate();
    auto in = bs_inputs(spec.spot, env.dividendYield, env, spec.maturity);
    double d1 = std::log(in.forward / spec.strike) / in.stdev + 0.5 * in.stdev;
    double carry = std::exp(-env.dividendYield * spec.maturity);
    return spec.side == OptionSide::Call ? carry * norm_cdf(d1) : carry * (norm_cdf(d1) - 1.0);
}

double bs_value_at(const EquityOptionSpec& spec, const MarketEnvironment& env, double spot,
                   double timeNow) {
    double tau = spec.maturity - timeNow;
    if (tau <= 0.0) {
        double intrinsic =
            spec.side == OptionSide::Call ? spot - spec.strike : spec.strike - spot;
        return std::max(intrinsic, 0.0);
    }
    double pFwd = env.discount(spec.maturity) / env.discount(timeNow); // P(timeNow, T)
    BsInputs in{spot * std::exp(-env.dividendYield * tau) / pFwd, pFwd,
                env.volatility * std::sqrt(tau)};
    return bs_forward_value(spec.side, in, spec.strike);
}

double repo_adjusted_value(const EquityOptionSpec& spec, const MarketEnvironment& env) {
    // The hedge is financed at r + lambda_S, so under the repo-adjusted
    // measure the underlying carries an effective yield q - lambda_S.
    MarketEnvironment adjusted = env;
    adjusted.dividendYield = env.dividendYield - env.repoSpread;
    return black_scholes_price(spec, adjusted);
}

void CompoundQuery::validate() const {
    inner.validate();
    if (!(defaultTime > 0.0) || defaultTime > inner.maturity)
        throw std::invalid_argument("CompoundQuery: need 0 < u <= T");
    if (threshold < minTransfer || minTransfer < 0.0)
        throw std::invalid_argument("CompoundQuery: need H >= X >= 0");
}

double critical_stock(const EquityOptionSpec& inner, const MarketEnvironment& env, double u,
                      double H) {
    inner.validate();
    double tau = inner.maturity - u;
    if (tau < 0.0) throw std::invalid_argument("critical_stock: u > T");
    const bool call = inner.side == OptionSide::Call;
    if (H <= 0.0) return call ? 0.0 : std::numeric_limits<double>::infinity();
    if (tau == 0.0) {
        // Intrinsic-value inversion at expiry of the inner option.
        if (call) return inner.strike + H;
        if (H >= inner.strike) return 0.0; // region empty
        return inner.strike - H;
    }

    auto price = [&](double s) { return bs_value_at(inner, env, s, u); };

    // Puts are bounded by the discounted strike; above that bound the
    // exercise region is empty.
    if (!call) {
        double sup = inner.strike * env.discount(inner.maturity) / env.discount(u);
        if (H >= sup) return 0.0;
    }

    double lo = 1e-8;
    double hi = 10.0 * inner.spot * std::exp(10.0 * env.volatility * std::sqrt(u));
    // f is monotone (increasing for calls, decreasing for puts); expand the
    // bracket upward for calls if needed.
    auto f = [&](double s) { return price(s) - H; };
    if (call) {
        int guard = 0;
        while (f(hi) < 0.0 && guard++ < 200) hi *= 2.0;
        if (f(hi) < 0.0) throw std::runtime_error("critical_stock: no bracket found");
    }

    double seed = inner.strike * H / std::max(price(inner.strike), 1e-300);
    double s = std::clamp(seed, lo, hi);
    double fl = f(lo);
    double fh = f(hi);
    if (fl * fh > 0.0) throw std::runtime_error("critical_stock: no bracket found");

    for (int it = 0; it < 200; ++it) {
        double fv = f(s);
        if (std::abs(fv) <= 1e-10) return s;
        if ((fv < 0.0) == (fl < 0.0)) {
            lo = s;
            fl = fv;
        } else {
            hi = s;
            fh = fv;
        }
        // Delta of the remaining-life option for the Newton step.
        double pFwd = env.discount(inner.maturity) / env.discount(u);
        double fwd = s * std::exp(-env.dividendYield * tau) / pFwd;
        double sd = env.volatility * std::sqrt(tau);
        double d1 = std::log(fwd / inner.strike) / sd + 0.5 * sd;
        double carry = std::exp(-env.dividendYield * tau);
        double deriv = call ? carry * norm_cdf(d1) : carry * (norm_cdf(d1) - 1.0);
        double next = deriv != 0.0 ? s - fv / deriv : 0.5 * (lo + hi);
        if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
        s = next;
    }
    return s;
}

namespace {

// Shared Geske-style evaluation; sign = +1 for a call inner option
// (exercise region S_u > S*), -1 for a put (region S_u < S*).
double compound_plus_digital_long(const CompoundQuery& q, const MarketEnvironment& env) {
    const double u = q.defaultTime;
    const double T = q.inner.maturity;
    const double H = q.threshold;
    const double X = q.minTransfer;
    const double sigma = env.volatility;
    const double pU = env.discount(u);
    const double pT = env.discount(T);
    const double carryT = q.inner.spot * std::exp(-env.dividendYield * T);
    const double rho = std::sqrt(u / T);

    double fwdT = carryT / pT;
    double sT = sigma * std::sqrt(T);
    double bPlus = std::log(fwdT / q.inner.strike) / sT + 0.5 * sT;
    double bMinus = bPlus - sT;

    double sStar = critical_stock(q.inner, env, u, H);
    const bool call = q.inner.side == OptionSide::Call;

    double aPlus, aMinus;
    if (sStar == 0.0) {
        aPlus = aMinus = call ? std::numeric_limits<double>::infinity()
                              : -std::numeric_limits<double>::infinity();
    } else if (std::isinf(sStar)) {
        aPlus = aMinus = -std::numeric_limits<double>::infinity();
    } else {
        double fwdU = q.inner.spot * std::exp(-env.dividendYield * u) / pU;
        double sU = sigma * std::sqrt(u);
        aPlus = std::log(fwdU / sStar) / sU + 0.5 * sU;
        aMinus = aPlus - sU;
    }

    if (call) {
        return carryT * bivariate_normal_cdf(aPlus, bPlus, rho) -
               q.inner.strike * pT * bivariate_normal_cdf(aMinus, bMinus, rho) -
               (H - X) * pU * norm_cdf(aMinus);
    }
    // Put inner: exercise region is the lower tail of S_u and S_T < K.
    return q.inner.strike * pT * bivariate_normal_cdf(-aMinus, -bMinus, rho) -
           carryT * bivariate_normal_cdf(-aPlus, -bPlus, rho) -
           (H - X) * pU * norm_cdf(-aMinus);
}

} // namespace

double compound_call_plus_digital(const CompoundQuery& query, const MarketEnvironment& env) {
    query.validate();
    env.validate();
    if (query.shortPosition) return 0.0; // value process <= 0, positive part empty
    return compound_plus_digital_long(query, env);
}

double compound_put_plus_digital(const CompoundQuery& query, const MarketEnvironment& env) {
    query.validate();
    env.validate();
    if (!query.shortPosition) return 0.0; // long option never a liability
    CompoundQuery mirrored = query;
    mirrored.shortPosition = false;
    return -compound_plus_digital_long(mirrored, env);
}

} // namespace xva
