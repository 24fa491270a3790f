#pragma once

#include <optional>
#include <string>
#include <string_view>

#include "levy_smile/models.hpp"
#include "levy_smile/quadrature.hpp"

namespace levy {

/// Leading-order excess over intrinsic: tau times the moneyness-relevant slope.
double asymptotic_excess(const ModelSpec& model, double s0, double strike, double tau);

/// Implied volatility predicted from the leading-order excess,
/// |ln(K/S0)| / sqrt(-2 tau ln(tau I)). Throws NotApplicable when I = 0 and
/// DomainError when tau I >= 1.
double predicted_iv(const ModelSpec& model, double s0, double strike, double tau);

/// Same, for a slope computed elsewhere.
double predicted_iv_from_slope(double slope, double s0, double strike, double tau);

enum class RegimeTag { trivial_zero, black_scholes_finite, explosion, degenerate_zero, inconclusive_o_tau };
std::string_view to_string(RegimeTag t);

struct RegimeEvidence {
    double log_moneyness = 0.0;
    double gamma = 0.0;  // triplet drift
    double sigma = 0.0;
    std::optional<Estimate> slope;  // moneyness-relevant slope, when there are jumps
    Activity activity = Activity::finite;
    Variation variation = Variation::finite;
    Support support = Support::none;
    bool zero_in_support = false;
    std::optional<double> drift_fv;  // finite-variation drift, when defined
    double tau_ref = 1.0;
};

struct Regime {
    RegimeTag tag = RegimeTag::inconclusive_o_tau;
    // sigma for black-scholes-finite, the slope for explosion, 0 otherwise.
    double value = 0.0;
    RegimeEvidence evidence;

    std::string describe() const;
};

/// Small-expiry implied-volatility regime at strike K, decided from the model
/// structure. `tau_ref` is the horizon of the degenerate-support test: the
/// strike must lie beyond drift_fv * tau_ref on the side the process cannot reach.
Regime classify(const ModelSpec& model, double s0, double strike, double tau_ref = 1.0);

}  // namespace levy
