#pragma once

#include <string>
#include <string_view>

#include "levy_smile/config.hpp"

namespace levy {

struct CommandResult {
    std::string csv;      // header line plus rows
    std::string summary;  // human-readable lines
};

// Each command validates the configuration and throws on failure:
// ConfigError (exit 2), NumericFailure (3), CapabilityError / NotApplicable (4).

/// tau, fourier_value, fourier_err, mc_value, mc_stderr (MC empty for CGMY or n_paths = 0).
CommandResult cmd_price(const RunConfig& config);

/// Moneyness-relevant slope with its quadrature error.
CommandResult cmd_slope(const RunConfig& config);

/// tau, excess, excess_over_tau, slope, ratio. Refuses (NotApplicable) when the slope is zero.
CommandResult cmd_verify_slope(const RunConfig& config);

/// tau, sigma_measured, sigma_predicted, ratio. Predicted column empty where the
/// limit formula does not apply.
CommandResult cmd_iv_curve(const RunConfig& config);

/// tau, mc_rate, mc_rate_stderr, integral, ratio for the configured payoff descriptor.
CommandResult cmd_rate(const RunConfig& config);

/// One row with the regime tag and its evidence.
CommandResult cmd_classify(const RunConfig& config);

CommandResult run_command(std::string_view name, const RunConfig& config);

/// Maps an exception thrown by a command to the documented exit code.
int exit_code_for(const std::exception& e);

}  // namespace levy
