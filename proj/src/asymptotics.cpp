#include "levy_smile/asymptotics.hpp"

#include <cmath>

#include <fmt/format.h>

#include "levy_smile/errors.hpp"
#include "levy_smile/implied_vol.hpp"

namespace levy {

namespace {

void check_market(double s0, double strike, double tau) {
    if (!(s0 > 0.0) || !(strike > 0.0)) throw DomainError("spot and strike must be positive");
    if (strike == s0) throw DomainError("at-the-money strike K = S0 is excluded");
    if (!(tau > 0.0)) throw DomainError("expiry must be positive");
}

}  // namespace

double asymptotic_excess(const ModelSpec& model, double s0, double strike, double tau) {
    check_market(s0, strike, tau);
    return tau * slopes(model, s0, strike).relevant().value;
}

double predicted_iv_from_slope(double slope, double s0, double strike, double tau) {
    check_market(s0, strike, tau);
    if (!(slope > 0.0))
        throw NotApplicable("the relevant slope is zero: the excess is o(tau) and no implied-volatility limit follows");
    if (!(tau * slope < 1.0))
        throw DomainError(fmt::format("tau * slope = {} is not below 1; the limit formula does not apply", tau * slope));
    return rr_limit_value(tau * slope, s0, strike, tau);
}

double predicted_iv(const ModelSpec& model, double s0, double strike, double tau) {
    check_market(s0, strike, tau);
    return predicted_iv_from_slope(slopes(model, s0, strike).relevant().value, s0, strike, tau);
}

std::string_view to_string(RegimeTag t) {
    switch (t) {
        case RegimeTag::trivial_zero: return "trivial-zero";
        case RegimeTag::black_scholes_finite: return "black-scholes-finite";
        case RegimeTag::explosion: return "explosion";
        case RegimeTag::degenerate_zero: return "degenerate-zero";
        case RegimeTag::inconclusive_o_tau: return "inconclusive-o-tau";
    }
    return "unknown";
}

std::string Regime::describe() const {
    const RegimeEvidence& e = evidence;
    std::string out = std::string(to_string(tag));
    if (tag == RegimeTag::black_scholes_finite) out += fmt::format("(sigma={:.17g})", value);
    if (tag == RegimeTag::explosion) out += fmt::format("(slope={:.17g})", value);
    out += fmt::format(" k={:.17g} gamma={:.17g} sigma={:.17g}", e.log_moneyness, e.gamma, e.sigma);
    if (e.slope) out += fmt::format(" slope={:.17g} slope_err={:.3g}", e.slope->value, e.slope->err);
    out += fmt::format(" activity={} variation={} support={}", to_string(e.activity), to_string(e.variation),
                       to_string(e.support));
    if (e.drift_fv) out += fmt::format(" drift_fv={:.17g} tau_ref={:.17g}", *e.drift_fv, e.tau_ref);
    return out;
}

Regime classify(const ModelSpec& model, double s0, double strike, double tau_ref) {
    check_market(s0, strike, tau_ref);
    require_valid(model);
    const LevyTriplet t = triplet(model);

    Regime r;
    RegimeEvidence& e = r.evidence;
    e.log_moneyness = std::log(strike / s0);
    e.gamma = t.gamma;
    e.sigma = t.sigma;
    e.activity = t.activity;
    e.variation = t.variation;
    e.support = t.support;
    e.zero_in_support = t.zero_in_support;
    e.tau_ref = tau_ref;
    if (t.variation == Variation::finite) e.drift_fv = finite_variation_drift(model);

    if (t.is_trivial()) {
        r.tag = RegimeTag::trivial_zero;
        return r;
    }
    if (t.support == Support::none) {
        r.tag = RegimeTag::black_scholes_finite;
        r.value = t.sigma;
        return r;
    }

    e.slope = slopes(model, s0, strike).relevant();
    if (e.slope->value > 0.0) {
        r.tag = RegimeTag::explosion;
        r.value = e.slope->value;
        return r;
    }

    const bool support_hypothesis = t.variation == Variation::finite &&
                                    (t.activity == Activity::infinite || t.zero_in_support);
    if (support_hypothesis && e.drift_fv) {
        const double edge = *e.drift_fv * tau_ref;
        const bool unreachable = (t.support == Support::positive_only && e.log_moneyness < edge) ||
                                 (t.support == Support::negative_only && e.log_moneyness > edge);
        if (unreachable) {
            r.tag = RegimeTag::degenerate_zero;
            return r;
        }
    }
    r.tag = RegimeTag::inconclusive_o_tau;
    return r;
}

}  // namespace levy
