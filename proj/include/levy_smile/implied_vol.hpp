#pragma once

namespace levy {

/// Black-Scholes call with zero rates. theta = 0 gives the intrinsic value.
double bs_call(double s0, double strike, double tau, double theta);

/// bs_call minus intrinsic value, computed without cancellation. Far from the
/// money this is the product of a Gaussian factor and a Mills-ratio
/// difference, so it keeps full relative accuracy until it underflows.
double bs_excess(double s0, double strike, double tau, double theta);

/// Natural log of bs_excess, finite even where bs_excess underflows.
double bs_log_excess(double s0, double strike, double tau, double theta);

double bs_vega(double s0, double strike, double tau, double theta);

struct IVPoint {
    double tau = 0.0;
    double sigma = 0.0;
    bool converged = false;
    int iterations = 0;
};

/// Implied volatility of a call price. Requires (S0-K)^+ <= price < S0:
/// throws ArbitrageViolation below intrinsic and UpperBoundViolation at or above S0.
IVPoint implied_vol(double price, double s0, double strike, double tau);

/// Same inversion, starting from the excess over intrinsic (time value).
/// Preferred for in-the-money strikes, where forming the price loses digits.
IVPoint implied_vol_from_excess(double excess, double s0, double strike, double tau);

/// Same inversion from ln(excess), for time values below the double range.
IVPoint implied_vol_from_log_excess(double log_excess, double s0, double strike, double tau);

/// Small-expiry limit functional |ln(K/S0)| / sqrt(-2 tau ln(excess)).
/// Requires 0 < excess < 1 and K != S0 (DomainError otherwise).
double rr_limit_value(double excess, double s0, double strike, double tau);

}  // namespace levy
