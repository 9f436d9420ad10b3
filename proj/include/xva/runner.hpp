#pragma once

#include <optional>
#include <string>
#include <vector>

#include "xva/fva.hpp"
#include "xva/market_data.hpp"

namespace xva {

struct SweepSpec {
    double start = 0.0;
    double step = 0.0025;
    double end = 0.03;

    std::vector<double> points() const;
    void validate() const;
};

enum class Command { PriceOption, PriceSwap, Example1, Example2 };

struct RunRequest {
    Command command = Command::PriceOption;
    std::string configPath;
    std::string discountCurvePath;
    std::string forwardCurvePath;
    std::string outputPath; // empty -> stdout
    std::uint64_t seed = 42;
    std::size_t nPaths = 100000;
    double dt = 1.0 / 52;
    bool csa = true;
    std::optional<SweepSpec> sweep;
    double swaptionVol = 0.20;
    MarginMode marginMode = MarginMode::ReplicationIdentity;
};

/// Exit codes: 0 success, 2 config error, 3 numerical failure.
constexpr int kExitOk = 0;
constexpr int kExitConfig = 2;
constexpr int kExitNumerical = 3;

/// Executes the request and writes the sweep CSV. On failure the partial
/// output is removed and `error` describes the cause.
int run(const RunRequest& request, std::string& error);

/// Reports every config/curve invariant violation without running.
std::vector<std::string> validate(const RunRequest& request);

/// Built-in setups mirroring the paper's two worked examples.
MarketConfig example1_config(bool csa);
MarketConfig example2_config();

} // namespace xva
