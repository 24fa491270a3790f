#pragma once

#include <cstdint>
#include <string_view>

#include "levy_smile/models.hpp"

namespace levy {

enum class PriceMethod { fourier_cosine, monte_carlo };
std::string_view to_string(PriceMethod m);

struct PriceQuote {
    double value = 0.0;
    PriceMethod method = PriceMethod::fourier_cosine;
    double err = 0.0;  // truncation estimate (Fourier) or standard error (MC)
    std::int64_t n = 0;  // cosine terms or paths
};

/// How the expanded part's payoff coefficients are formed. `put_parity`
/// integrates the put payoff below the strike and reaches the call through
/// parity; `call_payoff` uses the call coefficients above the strike.
enum class CosPayoffRoute { put_parity, call_payoff };

struct CosSettings {
    int n_terms = 1 << 14;
    double range_width = 12.0;
    // Price the Gaussian reference part (and the no-jump atom of
    // finite-activity models) in closed form and expand only the remainder.
    // false: plain expansion of exp(tau psi) on a cumulant range.
    bool split_reference = true;
    CosPayoffRoute route = CosPayoffRoute::put_parity;
};

/// Call and put from one cosine expansion. Each is assembled so that the
/// out-of-the-money one carries no cancellation against the intrinsic value;
/// the other follows by parity.
struct FourierPair {
    PriceQuote call;
    PriceQuote put;
};
FourierPair price_fourier(const ModelSpec& model, double s0, double strike, double tau,
                          const CosSettings& settings = {});

PriceQuote price_call_fourier(const ModelSpec& model, double s0, double strike, double tau,
                              int n_terms = 1 << 14, double range_width = 12.0);
PriceQuote price_call_fourier(const ModelSpec& model, double s0, double strike, double tau,
                              const CosSettings& settings);
PriceQuote price_put_fourier(const ModelSpec& model, double s0, double strike, double tau,
                             const CosSettings& settings = {});

/// Call price minus intrinsic value. Equals the put price when K < S0.
PriceQuote excess_fourier(const ModelSpec& model, double s0, double strike, double tau,
                          const CosSettings& settings = {});

double put_from_call(double call, double s0, double strike);

/// Monte-Carlo call price with exact sampling of X_tau. Deterministic in
/// `seed`. Throws CapabilityError for CGMY.
PriceQuote price_call_mc(const ModelSpec& model, double s0, double strike, double tau,
                         std::int64_t n_paths, std::uint64_t seed);

}  // namespace levy
