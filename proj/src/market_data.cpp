#include "xva/market_data.hpp"

#include <cctype>
#include <cmath>
#include <fstream>
#include <map>
#include <sstream>

namespace xva {

DiscountCurve::DiscountCurve(std::vector<double> tenors, std::vector<double> factors)
    : tenors_(std::move(tenors)), factors_(std::move(factors)) {
    if (tenors_.empty() || tenors_.size() != factors_.size())
        throw ConfigError("DiscountCurve: empty curve or pillar size mismatch");
    double prevT = 0.0, prevP = 1.0;
    for (std::size_t i = 0; i < tenors_.size(); ++i) {
        if (tenors_[i] <= prevT)
            throw ConfigError("DiscountCurve: tenors must be strictly ascending and > 0");
        if (factors_[i] <= 0.0)
            throw ConfigError("DiscountCurve: discount factors must be positive");
        if (factors_[i] > prevP)
            throw ConfigError("DiscountCurve: discount factors must be non-increasing");
        prevT = tenors_[i];
        prevP = factors_[i];
    }
}

double DiscountCurve::df(double t) const {
    if (t < 0.0) throw std::invalid_argument("DiscountCurve::df: t < 0");
    if (t == 0.0) return 1.0;
    // Log-linear between pillars, anchored at P(0,0) = 1. Beyond the last
    // pillar the last segment's log-slope (flat hazard) is extrapolated.
    auto logInterp = [](double t0, double p0, double t1, double p1, double t) {
        double w = (t - t0) / (t1 - t0);
        return std::exp((1.0 - w) * std::log(p0) + w * std::log(p1));
    };
    if (t <= tenors_.front())
        return logInterp(0.0, 1.0, tenors_.front(), factors_.front(), t);
    for (std::size_t i = 1; i < tenors_.size(); ++i)
        if (t <= tenors_[i])
            return logInterp(tenors_[i - 1], factors_[i - 1], tenors_[i], factors_[i], t);
    double t0, p0;
    if (tenors_.size() == 1) {
        t0 = 0.0;
        p0 = 1.0;
    } else {
        t0 = tenors_[tenors_.size() - 2];
        p0 = factors_[factors_.size() - 2];
    }
    double slope = (std::log(factors_.back()) - std::log(p0)) / (tenors_.back() - t0);
    return factors_.back() * std::exp(slope * (t - tenors_.back()));
}

ForwardCurve::ForwardCurve(std::vector<Period> periods) : periods_(std::move(periods)) {
    if (periods_.empty()) throw ConfigError("ForwardCurve: empty curve");
    for (std::size_t i = 0; i < periods_.size(); ++i) {
        const auto& p = periods_[i];
        if (!(p.end > p.start)) throw ConfigError("ForwardCurve: period end must exceed start");
        if (!std::isfinite(p.rate)) throw ConfigError("ForwardCurve: non-finite rate");
        if (i > 0 && std::abs(p.start - periods_[i - 1].end) > 1e-12)
            throw ConfigError("ForwardCurve: periods must be contiguous");
    }
}

double ForwardCurve::rateAt(double start) const {
    for (const auto& p : periods_)
        if (std::abs(p.start - start) < 1e-9) return p.rate;
    throw ConfigError("ForwardCurve: no period starting at requested time");
}

void MarketEnvironment::validate() const {
    if (volatility <= 0.0) throw ConfigError("sigma: must be > 0");
    if (repoSpread < 0.0) throw ConfigError("lambda_S: must be >= 0");
    if (marketFundingSpread < 0.0) throw ConfigError("lambda_M: must be >= 0");
}

void EquityOptionSpec::validate() const {
    if (spot <= 0.0) throw ConfigError("S0: must be > 0");
    if (strike <= 0.0) throw ConfigError("K: must be > 0");
    if (maturity <= 0.0) throw ConfigError("T: must be > 0");
}

void SwapSpec::validate() const {
    if (grid.size() < 2) throw ConfigError("swap grid needs at least two dates");
    for (std::size_t i = 1; i < grid.size(); ++i)
        if (grid[i] <= grid[i - 1]) throw ConfigError("swap grid must be strictly ascending");
}

namespace {

std::string trim(const std::string& s) {
    std::size_t a = s.find_first_not_of(" \t\r\n");
    if (a == std::string::npos) return {};
    std::size_t b = s.find_last_not_of(" \t\r\n");
    return s.substr(a, b - a + 1);
}

class KeyValues {
public:
    explicit KeyValues(const std::string& path) {
        std::ifstream in(path);
        if (!in) throw ConfigError("cannot open config file: " + path);
        std::string line;
        while (std::getline(in, line)) {
            auto hash = line.find('#');
            if (hash != std::string::npos) line.erase(hash);
            line = trim(line);
            if (line.empty()) continue;
            auto eq = line.find('=');
            if (eq == std::string::npos)
                throw ConfigError("malformed config line: " + line);
            kv_[trim(line.substr(0, eq))] = trim(line.substr(eq + 1));
        }
    }

    bool has(const std::string& key) const { return kv_.count(key) != 0; }

    double number(const std::string& key) const {
        auto it = kv_.find(key);
        if (it == kv_.end()) throw ConfigError("missing mandatory key: " + key);
        try {
            std::size_t pos = 0;
            double v = std::stod(it->second, &pos);
            if (pos != it->second.size()) throw std::invalid_argument("");
            return v;
        } catch (const std::exception&) {
            throw ConfigError("non-numeric value for key: " + key);
        }
    }

    double numberOr(const std::string& key, double def) const {
        return has(key) ? number(key) : def;
    }

    std::string text(const std::string& key, const std::string& def) const {
        auto it = kv_.find(key);
        return it == kv_.end() ? def : it->second;
    }

private:
    std::map<std::string, std::string> kv_;
};

} // namespace

void CollateralTerms::validate() const {
    for (double x : minTransfer.values())
        if (x < 0.0) throw ConfigError("X: must be >= 0");
    for (double h : threshold.values())
        if (h < 0.0) throw ConfigError("H: must be >= 0");
    if (threshold.isConstant() && minTransfer.isConstant() &&
        threshold.values().front() < minTransfer.values().front())
        throw ConfigError("H: threshold must be >= minimum transfer amount X");
}

MarketConfig load_market_config(const std::string& path) {
    KeyValues kv(path);
    MarketConfig cfg;

    cfg.env.riskFreeRate = kv.number("r");
    cfg.env.dividendYield = kv.numberOr("q", 0.0);
    cfg.env.volatility = kv.number("sigma");
    cfg.env.repoSpread = kv.numberOr("lambda_S", 0.0);
    cfg.env.marketFundingSpread = kv.numberOr("lambda_M", 0.0);
    cfg.env.validate();

    cfg.creditB = PartyCredit::constant(kv.numberOr("lambda_B", 0.0), kv.numberOr("R_B", 1.0));
    cfg.creditC = PartyCredit::constant(kv.numberOr("lambda_C", 0.0), kv.numberOr("R_C", 1.0));

    std::string mtm = kv.text("mtm", "risk_free");
    MtmConvention conv;
    if (mtm == "risk_free")
        conv = MtmConvention::RiskFree;
    else if (mtm == "pre_default")
        conv = MtmConvention::PreDefault;
    else
        throw ConfigError("mtm: expected risk_free or pre_default");
    cfg.terms = CollateralTerms(kv.numberOr("H", 0.0), kv.numberOr("X", 0.0), conv);
    cfg.terms.validate();

    cfg.pathStep = kv.numberOr("dt", 1.0 / 52);
    if (cfg.pathStep <= 0.0) throw ConfigError("dt: must be > 0");

    std::string trade = kv.text("trade", "call");
    if (trade == "call" || trade == "put") {
        cfg.trade.kind = trade == "call" ? TradeKind::Call : TradeKind::Put;
        cfg.trade.option = EquityOptionSpec{kv.number("S0"), kv.number("K"), kv.number("T"),
                                            trade == "call" ? OptionSide::Call : OptionSide::Put};
        cfg.trade.option.validate();
    } else if (trade == "payer_swap") {
        cfg.trade.kind = TradeKind::PayerSwap;
        double tenor = kv.number("tenor_years");
        double freq = kv.number("pay_freq"); // payments per year
        if (tenor <= 0.0) throw ConfigError("tenor_years: must be > 0");
        if (freq <= 0.0) throw ConfigError("pay_freq: must be > 0");
        int n = static_cast<int>(std::lround(tenor * freq));
        if (n < 1 || std::abs(n / freq - tenor) > 1e-9)
            throw ConfigError("tenor_years: must be a whole number of periods");
        SwapSpec swap;
        swap.grid.resize(static_cast<std::size_t>(n) + 1);
        for (int j = 0; j <= n; ++j) swap.grid[static_cast<std::size_t>(j)] = j / freq;
        swap.fixedRate = kv.numberOr("swap_rate", 0.0);
        swap.direction = SwapDirection::Payer;
        swap.validate();
        cfg.trade.swap = swap;
    } else {
        throw ConfigError("trade: expected call, put or payer_swap");
    }

    return cfg;
}

namespace {

std::vector<std::vector<double>> read_csv(const std::string& path, const std::string& header,
                                          std::size_t columns) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open curve file: " + path);
    std::string line;
    if (!std::getline(in, line)) throw ConfigError("empty curve file: " + path);
    if (trim(line) != header)
        throw ConfigError("curve file " + path + ": expected header '" + header + "'");
    std::vector<std::vector<double>> rows;
    while (std::getline(in, line)) {
        line = trim(line);
        if (line.empty()) continue;
        std::vector<double> row;
        std::stringstream ss(line);
        std::string cell;
        while (std::getline(ss, cell, ',')) {
            try {
                row.push_back(std::stod(trim(cell)));
            } catch (const std::exception&) {
                throw ConfigError("curve file " + path + ": non-numeric cell '" + cell + "'");
            }
        }
        if (row.size() != columns)
            throw ConfigError("curve file " + path + ": wrong number of columns");
        rows.push_back(std::move(row));
    }
    if (rows.empty()) throw ConfigError("curve file " + path + ": no data rows");
    return rows;
}

} // namespace

DiscountCurve load_discount_curve(const std::string& path) {
    auto rows = read_csv(path, "tenor_years,discount_factor", 2);
    std::vector<double> tenors, factors;
    for (const auto& r : rows) {
        tenors.push_back(r[0]);
        factors.push_back(r[1]);
    }
    return DiscountCurve(std::move(tenors), std::move(factors));
}

ForwardCurve load_forward_curve(const std::string& path) {
    auto rows = read_csv(path, "start,end,forward_rate", 3);
    std::vector<ForwardCurve::Period> periods;
    for (const auto& r : rows) periods.push_back({r[0], r[1], r[2]});
    return ForwardCurve(std::move(periods));
}

namespace {

void write_rows(const std::string& path, const std::string& header,
                const std::vector<std::vector<double>>& rows) {
    std::ofstream out(path);
    if (!out) throw ConfigError("cannot write curve file: " + path);
    out << header << "\n";
    out.precision(17);
    for (const auto& r : rows) {
        for (std::size_t i = 0; i < r.size(); ++i) out << (i ? "," : "") << r[i];
        out << "\n";
    }
}

} // namespace

void write_discount_curve(const DiscountCurve& curve, const std::string& path) {
    std::vector<std::vector<double>> rows;
    for (std::size_t i = 0; i < curve.tenors().size(); ++i)
        rows.push_back({curve.tenors()[i], curve.factors()[i]});
    write_rows(path, "tenor_years,discount_factor", rows);
}

void write_forward_curve(const ForwardCurve& curve, const std::string& path) {
    std::vector<std::vector<double>> rows;
    for (const auto& p : curve.periods()) rows.push_back({p.start, p.end, p.rate});
    write_rows(path, "start,end,forward_rate", rows);
}

} // namespace xva
