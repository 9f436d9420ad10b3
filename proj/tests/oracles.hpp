// Independent reference implementations used to pin expected values.
// Everything here is deliberately written from scratch against textbook
// formulae, without touching the library code under test.
#pragma once

#include <cmath>
#include <functional>
#include <random>
#include <utility>

namespace oracle {

inline double phi(double x) {
    return std::exp(-0.5 * x * x) / std::sqrt(2.0 * 3.14159265358979323846);
}

inline double Phi(double x) { return 0.5 * std::erfc(-x / std::sqrt(2.0)); }

/// Composite Simpson with a fixed (even) panel count.
inline double simpson(const std::function<double(double)>& f, double a, double b, int n) {
    double h = (b - a) / n;
    double acc = f(a) + f(b);
    for (int i = 1; i < n; ++i) acc += f(a + i * h) * (i % 2 ? 4.0 : 2.0);
    return acc * h / 3.0;
}

/// One-dimensional reduction of the bivariate normal CDF:
/// P(X<=x, Y<=y) = int_{-inf}^x phi(t) Phi((y - rho t)/sqrt(1-rho^2)) dt.
inline double bvn(double x, double y, double rho) {
    if (rho >= 1.0) return Phi(std::min(x, y));
    if (rho <= -1.0) {
        double p = Phi(x) + Phi(y) - 1.0;
        return p > 0.0 ? p : 0.0;
    }
    double s = std::sqrt(1.0 - rho * rho);
    auto integrand = [&](double t) { return phi(t) * Phi((y - rho * t) / s); };
    double lo = -8.5;
    if (x <= lo) return 0.0;
    return simpson(integrand, lo, std::min(x, 8.5), 8000) + (x > 8.5 ? 0.0 : 0.0);
}

/// Plain flat-rate Black-Scholes, written independently of the library.
inline double bs(double s, double k, double r, double q, double sigma, double T, bool call) {
    if (T <= 0.0) {
        double v = call ? s - k : k - s;
        return v > 0.0 ? v : 0.0;
    }
    double sd = sigma * std::sqrt(T);
    double d1 = (std::log(s / k) + (r - q + 0.5 * sigma * sigma) * T) / sd;
    double d2 = d1 - sd;
    if (call) return s * std::exp(-q * T) * Phi(d1) - k * std::exp(-r * T) * Phi(d2);
    return k * std::exp(-r * T) * Phi(-d2) - s * std::exp(-q * T) * Phi(-d1);
}

/// Monte Carlo estimate of the compound-plus-digital exposure
///   E[ P(0,u) (V_e(S_u, u) - H + X) 1{V_e(S_u, u) > H} ]
/// with V_e the residual Black-Scholes value at the default time u.
/// Returns {mean, standard error}.
inline std::pair<double, double> cc_mc(double s0, double k, double r, double q, double sigma,
                                       double T, double u, double H, double X, bool call,
                                       std::size_t paths, std::uint64_t seed) {
    std::mt19937_64 gen(seed);
    std::normal_distribution<double> normal(0.0, 1.0);
    double drift = (r - q - 0.5 * sigma * sigma) * u;
    double vol = sigma * std::sqrt(u);
    double disc = std::exp(-r * u);
    double sum = 0.0, sumSq = 0.0;
    for (std::size_t i = 0; i < paths; ++i) {
        double su = s0 * std::exp(drift + vol * normal(gen));
        double ve = bs(su, k, r, q, sigma, T - u, call);
        double payoff = ve > H ? disc * (ve - H + X) : 0.0;
        sum += payoff;
        sumSq += payoff * payoff;
    }
    double n = static_cast<double>(paths);
    double mean = sum / n;
    double var = (sumSq / n - mean * mean) / (n - 1);
    return {mean, std::sqrt(var > 0.0 ? var : 0.0)};
}

} // namespace oracle
