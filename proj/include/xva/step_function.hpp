#pragma once

#include <algorithm>
#include <stdexcept>
#include <vector>

namespace xva {

/// Right-continuous piecewise-constant function of time, t >= 0.
/// Segment i covers [knots[i], knots[i+1]); the last value extends to
/// infinity. A constant is represented with a single segment.
class StepFunction {
public:
    StepFunction() : knots_{0.0}, values_{0.0} {}

    explicit StepFunction(double constant) : knots_{0.0}, values_{constant} {}

    StepFunction(std::vector<double> knots, std::vector<double> values)
        : knots_(std::move(knots)), values_(std::move(values)) {
        if (knots_.empty() || knots_.size() != values_.size())
            throw std::invalid_argument("StepFunction: knots/values size mismatch");
        if (knots_.front() != 0.0)
            throw std::invalid_argument("StepFunction: first knot must be 0");
        for (std::size_t i = 1; i < knots_.size(); ++i)
            if (knots_[i] <= knots_[i - 1])
                throw std::invalid_argument("StepFunction: knots must be ascending");
    }

    double operator()(double t) const {
        auto it = std::upper_bound(knots_.begin(), knots_.end(), t);
        std::size_t idx = static_cast<std::size_t>(it - knots_.begin());
        if (idx == 0) idx = 1;
        return values_[idx - 1];
    }

    /// Exact integral over [t0, t1].
    double integral(double t0, double t1) const {
        if (t1 < t0) throw std::invalid_argument("StepFunction: t1 < t0");
        double acc = 0.0;
        for (std::size_t i = 0; i < knots_.size(); ++i) {
            double lo = std::max(t0, knots_[i]);
            double hi = (i + 1 < knots_.size()) ? std::min(t1, knots_[i + 1]) : t1;
            if (hi > lo) acc += values_[i] * (hi - lo);
        }
        return acc;
    }

    bool isConstant() const { return knots_.size() == 1; }
    const std::vector<double>& knots() const { return knots_; }
    const std::vector<double>& values() const { return values_; }

private:
    std::vector<double> knots_;
    std::vector<double> values_;
};

} // namespace xva
