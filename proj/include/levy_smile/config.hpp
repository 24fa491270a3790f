#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "levy_smile/models.hpp"

namespace levy {

struct MarketConfig {
    double s0 = 100.0;
    double strike = 110.0;
    // Geometric expiry grid tau_max, tau_max / ratio, ... (tau_count points).
    double tau_max = 0.1;
    double tau_ratio = 10.0;
    int tau_count = 6;
    double tau_ref = 1.0;  // horizon of the degenerate-support test in classify
};

struct EngineConfig {
    int n_terms = 1 << 14;
    double range_width = 12.0;
    std::int64_t n_paths = 100000;
    std::uint64_t seed = 20240101;
};

/// Test function for the `rate` command.
struct PayoffDescriptor {
    enum class Kind { indicator, call, put };
    Kind kind = Kind::indicator;
    double a = 0.0;  // indicator of [a, b]
    double b = 0.0;
};

struct RunConfig {
    ModelSpec model = BlackScholes{0.2};
    MarketConfig market;
    EngineConfig engine;
    std::optional<PayoffDescriptor> payoff;
    std::string out;  // CSV path; empty means standard output

    /// Strictly decreasing expiries, all > 0.
    std::vector<double> tau_grid() const;
};

/// Parses a JSON document with blocks "model" (required, with "type"),
/// "market", "engine" and "payoff". Unknown keys, wrong types and missing
/// model parameters raise ConfigError naming the key (e.g. "model.eta1"), as
/// does any failure of check_config(config, false).
RunConfig parse_config(const std::string& text);
RunConfig load_config(const std::string& path);

/// Values given on the command line; each one replaces the file value.
struct ConfigOverrides {
    std::optional<double> s0;
    std::optional<double> strike;
    std::optional<double> tau_max;
    std::optional<double> tau_ratio;
    std::optional<int> tau_count;
    std::optional<int> n_terms;
    std::optional<std::int64_t> n_paths;
    std::optional<std::uint64_t> seed;
    std::optional<std::string> out;
};
void apply_overrides(RunConfig& config, const ConfigOverrides& overrides);

/// Grid, market, engine and model checks shared by all commands.
/// `needs_off_money` adds the K != S0 requirement.
void check_config(const RunConfig& config, bool needs_off_money);

}  // namespace levy
