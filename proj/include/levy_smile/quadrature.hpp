#pragma once

#include <functional>
#include <limits>
#include <optional>

#include "levy_smile/models.hpp"

namespace levy {

struct Estimate {
    double value = 0.0;
    double err = 0.0;
};

struct QuadratureSettings {
    double abs_tol = 1e-12;
    double rel_tol = 1e-9;
    int max_subdivisions = 2000;
};

/// Closed interval [lo, hi]; either end may be infinite.
struct Interval {
    double lo = 0.0;
    double hi = 0.0;

    bool contains(double x) const { return lo <= x && x <= hi; }
    static Interval above(double lo) { return {lo, std::numeric_limits<double>::infinity()}; }
    static Interval below(double hi) { return {-std::numeric_limits<double>::infinity(), hi}; }
};

/// Single 21-point Kronrod panel on [a, b]; `err` is |Kronrod - Gauss|.
Estimate kronrod21(const std::function<double(double)>& f, double a, double b);

/// Adaptive Gauss-Kronrod (10/21 points) with global bisection of the worst
/// panel. Infinite ends are mapped onto [0, 1) with x = edge +- t / (1 - t).
/// Throws IntegrationFailure when the subdivision budget runs out.
Estimate integrate(const std::function<double(double)>& f, Interval domain,
                   const QuadratureSettings& settings = {});

/// Integral of f against the Lévy density of `model` over `domain`, which must
/// not contain 0 (throws DomainError otherwise).
Estimate integrate_payoff(const std::function<double(double)>& f, const ModelSpec& model,
                          Interval domain, const QuadratureSettings& settings = {});

/// Asymptotic slopes of the out-of-the-money excess. Only the slope belonging
/// to the moneyness side is defined: the call slope for K > S0, the put slope
/// for K < S0. On the other side the integrand does not vanish near 0.
struct SlopeResult {
    double log_moneyness = 0.0;  // ln(K / S0)
    std::optional<Estimate> call;
    std::optional<Estimate> put;

    /// The slope that drives the excess at this strike.
    const Estimate& relevant() const { return call ? *call : *put; }
};

/// int (S0 e^x - K)^+ nu(dx); requires K > S0.
Estimate slope_call(const ModelSpec& model, double s0, double strike,
                    const QuadratureSettings& settings = {});

/// int (K - S0 e^x)^+ nu(dx); requires K < S0.
Estimate slope_put(const ModelSpec& model, double s0, double strike,
                   const QuadratureSettings& settings = {});

/// Computes the slope relevant to the moneyness of K; throws DomainError at K = S0.
SlopeResult slopes(const ModelSpec& model, double s0, double strike,
                   const QuadratureSettings& settings = {});

}  // namespace levy
