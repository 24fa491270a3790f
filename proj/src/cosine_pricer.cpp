#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <numbers>

#include <Eigen/Core>
#include <fmt/format.h>

#include "levy_smile/errors.hpp"
#include "levy_smile/implied_vol.hpp"
#include "levy_smile/pricing.hpp"

namespace levy {

namespace {

using Eigen::ArrayXd;

constexpr double kFilterStrength = 36.0;  // exp(-36) ~ machine epsilon at the last term
constexpr int kFilterOrder = 8;

// e^z - 1 without cancellation for small |z|.
cplx expm1c(cplx z) {
    const double h = std::sin(0.5 * z.imag());
    return {std::expm1(z.real()) * std::cos(z.imag()) - 2.0 * h * h, std::exp(z.real()) * std::sin(z.imag())};
}

// Cosine coefficients of (K - S0 e^x)^+ (put) or (S0 e^x - K)^+ (call) on [a, b].
ArrayXd payoff_coefficients(const ArrayXd& u, double a, double b, double s0, double strike, CosPayoffRoute route) {
    const double k = std::log(strike / s0);
    const bool put = route == CosPayoffRoute::put_parity;
    const double c = put ? a : std::max(k, a);
    const double d = put ? std::min(k, b) : b;
    if (d <= c) return ArrayXd::Zero(u.size());
    const ArrayXd cos_d = (u * (d - a)).cos();
    const ArrayXd cos_c = (u * (c - a)).cos();
    const ArrayXd sin_d = (u * (d - a)).sin();
    const ArrayXd sin_c = (u * (c - a)).sin();
    const double ed = std::exp(d);
    const double ec = std::exp(c);
    const ArrayXd chi = (cos_d * ed - cos_c * ec + u * (sin_d * ed - sin_c * ec)) / (1.0 + u.square());
    ArrayXd psi = (sin_d - sin_c) / u;
    psi(0) = d - c;
    const ArrayXd v = (2.0 / (b - a)) * (strike * psi - s0 * chi);
    return put ? v : ArrayXd(-v);
}

struct Expansion {
    double value;
    double err;
};

// Cosine expansion of the integral of the chosen payoff against a (possibly
// signed) measure with Fourier transform `phi`, truncated to [a, b].
Expansion expand(const std::function<cplx(double)>& phi, double a, double b, double s0, double strike,
                 int n_terms, CosPayoffRoute route) {
    const ArrayXd idx = ArrayXd::LinSpaced(n_terms, 0.0, n_terms - 1.0);
    const ArrayXd u = idx * (std::numbers::pi / (b - a));
    ArrayXd re(n_terms);
    for (int j = 0; j < n_terms; ++j) {
        const cplx z = phi(u(j)) * std::polar(1.0, -u(j) * a);
        re(j) = z.real();
    }
    if (!re.allFinite()) throw NumericFailure("non-finite characteristic function value in cosine expansion");
    const ArrayXd terms = re * payoff_coefficients(u, a, b, s0, strike, route);

    const auto filtered_sum = [&](int n) {
        const ArrayXd head = terms.head(n);
        ArrayXd w = (-kFilterStrength * (idx.head(n) / n).pow(kFilterOrder)).exp();
        w(0) *= 0.5;
        return (w * head).sum();
    };
    const double full = filtered_sum(n_terms);
    const double half = filtered_sum(n_terms / 2);
    const double roundoff = 32.0 * std::numeric_limits<double>::epsilon() * terms.abs().sum();
    return {full, std::abs(full - half) + roundoff};
}

struct Range {
    double a;
    double b;
};

Range centered(double center, double half_width) { return {center - half_width, center + half_width}; }

void check_inputs(const ModelSpec& model, double s0, double strike, double tau, const CosSettings& s) {
    require_valid(model);
    if (!(s0 > 0.0) || !(strike > 0.0)) throw DomainError("spot and strike must be positive");
    if (!(tau >= 0.0)) throw DomainError(fmt::format("expiry must be nonnegative, got {}", tau));
    if (s.n_terms < 4 || s.n_terms % 2 != 0) throw DomainError("n_terms must be an even number >= 4");
    if (!(s.range_width > 0.0)) throw DomainError("range_width must be positive");
}

PriceQuote quote(double value, double err, const CosSettings& s) {
    if (!std::isfinite(value) || !std::isfinite(err)) throw NumericFailure("non-finite Fourier price");
    return {value, PriceMethod::fourier_cosine, err, s.n_terms};
}

// Call and put on a Gaussian with mean m and variance v (v may be 0).
struct GaussianPrices {
    double call;
    double put;
    double forward;  // E[S0 e^X]
};

GaussianPrices gaussian_prices(double s0, double strike, double m, double v) {
    const double forward = s0 * std::exp(m + 0.5 * v);
    if (v == 0.0) return {std::max(forward - strike, 0.0), std::max(strike - forward, 0.0), forward};
    const double tv = bs_excess(forward, strike, 1.0, std::sqrt(v));
    return {std::max(forward - strike, 0.0) + tv, std::max(strike - forward, 0.0) + tv, forward};
}

// Sums reference and remainder parts, taking each option either directly or
// through parity, whichever accumulates less roundoff.
FourierPair assemble(double ref_call, double rem_call, double ref_put, double rem_put, double err, double s0,
                     double strike, const CosSettings& s) {
    constexpr double eps = std::numeric_limits<double>::epsilon();
    const double call_direct = ref_call + rem_call;
    const double put_direct = ref_put + rem_put;
    const double call_scale = std::abs(ref_call) + std::abs(rem_call);
    const double put_scale = std::abs(ref_put) + std::abs(rem_put);
    const double parity_scale = s0 + strike;
    const bool call_via_put = put_scale + parity_scale < call_scale;
    const bool put_via_call = call_scale + parity_scale < put_scale;
    const double call = call_via_put ? put_direct + (s0 - strike) : call_direct;
    const double put = put_via_call ? call_direct - (s0 - strike) : put_direct;
    const double call_round = eps * (call_via_put ? put_scale + parity_scale : call_scale);
    const double put_round = eps * (put_via_call ? call_scale + parity_scale : put_scale);
    return {quote(call, err + call_round, s), quote(put, err + put_round, s)};
}

FourierPair plain_expansion(const ModelSpec& model, double s0, double strike, double tau, const CosSettings& s) {
    const Cumulants c = cumulants(model);
    const Range r = centered(c.c1 * tau, s.range_width * std::sqrt(c.c2 * tau + std::sqrt(c.c4 * tau)));
    const auto phi = [&](double u) { return std::exp(tau * char_exponent(model, cplx(u, 0.0))); };
    const Expansion e = expand(phi, r.a, r.b, s0, strike, s.n_terms, s.route);
    // Unit mass and E[S0 e^X] = S0: call - put = S0 - K.
    const double put = s.route == CosPayoffRoute::put_parity ? e.value : e.value - (s0 - strike);
    return {quote(put + (s0 - strike), e.err, s), quote(put, e.err, s)};
}

}  // namespace

std::string_view to_string(PriceMethod m) {
    return m == PriceMethod::fourier_cosine ? "fourier-cosine" : "monte-carlo";
}

FourierPair price_fourier(const ModelSpec& model, double s0, double strike, double tau, const CosSettings& s) {
    check_inputs(model, s0, strike, tau, s);
    if (tau == 0.0)
        return {quote(std::max(s0 - strike, 0.0), 0.0, s), quote(std::max(strike - s0, 0.0), 0.0, s)};
    if (!s.split_reference) return plain_expansion(model, s0, strike, tau, s);

    const double sigma = diffusion_sigma(model);
    const double d = reference_drift(model);
    const double mean_g = d * tau;
    const double var_g = sigma * sigma * tau;
    const GaussianPrices g = gaussian_prices(s0, strike, mean_g, var_g);
    if (!has_jumps(model)) return {quote(g.call, 0.0, s), quote(g.put, 0.0, s)};

    const auto phi_g = [&](double u) { return std::exp(cplx(-0.5 * var_g * u * u, u * mean_g)); };
    const bool put_route = s.route == CosPayoffRoute::put_parity;
    const double lambda = jump_intensity(model);

    if (std::isfinite(lambda)) {
        // Condition on at least one jump: P = e^{-lambda tau} G + (1 - e^{-lambda tau}) Q.
        const double lt = lambda * tau;
        const double w0 = std::exp(-lt);
        const double w1 = -std::expm1(-lt);
        const double nbar = lt / w1;
        const JumpMoments m = jump_size_moments(model);
        Range r = centered(mean_g + nbar * m.m1,
                           s.range_width * std::sqrt(var_g + nbar * m.m2 + std::sqrt(nbar * m.m4)));
        if (sigma == 0.0) {
            // Q lives strictly on one side of the drift point for one-sided jumps.
            const Support side = triplet(model).support;
            if (side == Support::positive_only) r.a = mean_g;
            if (side == Support::negative_only) r.b = mean_g;
        }
        const double norm = std::expm1(lt);
        const auto phi_q = [&](double u) {
            const cplx jump = tau * jump_exponent(model, cplx(u, 0.0));
            // (e^{z + lt} - 1) / (e^{lt} - 1); the second form avoids overflow for large lt.
            if (lt <= 1.0) return phi_g(u) * expm1c(jump + lt) / norm;
            return phi_g(u) * (std::exp(jump) - w0) / w1;
        };
        const Expansion e = expand(phi_q, r.a, r.b, s0, strike, s.n_terms, s.route);
        // E_Q[S0 e^X] from S0 = w0 F + w1 F_Q.
        const double forward_q = -s0 * std::expm1(mean_g + 0.5 * var_g - lt) / w1;
        const double q_put = put_route ? e.value : e.value - (forward_q - strike);
        const double q_call = put_route ? e.value + (forward_q - strike) : e.value;
        return assemble(w0 * g.call, w1 * q_call, w0 * g.put, w1 * q_put, w1 * e.err, s0, strike, s);
    }

    // Infinite activity: P = G + R with R a signed measure of zero mass.
    const Cumulants c = cumulants(model);
    const double tau_eff = std::max(tau, 1.0);
    Range r = centered(c.c1 * tau, s.range_width * std::sqrt(c.c2 * tau_eff + std::sqrt(c.c4 * tau_eff)));
    // R carries -G, so the range must also cover the reference law.
    const Range rg = centered(mean_g, s.range_width * std::sqrt(var_g));
    r = {std::min(r.a, rg.a), std::max(r.b, rg.b)};
    const auto phi_r = [&](double u) { return phi_g(u) * expm1c(tau * jump_exponent(model, cplx(u, 0.0))); };
    const Expansion e = expand(phi_r, r.a, r.b, s0, strike, s.n_terms, s.route);
    // int (S0 e^x - K) dR = S0 - F.
    const double offset = -s0 * std::expm1(mean_g + 0.5 * var_g);
    const double r_put = put_route ? e.value : e.value - offset;
    const double r_call = put_route ? e.value + offset : e.value;
    return assemble(g.call, r_call, g.put, r_put, e.err, s0, strike, s);
}

PriceQuote price_call_fourier(const ModelSpec& model, double s0, double strike, double tau, int n_terms,
                              double range_width) {
    CosSettings s;
    s.n_terms = n_terms;
    s.range_width = range_width;
    return price_fourier(model, s0, strike, tau, s).call;
}

PriceQuote price_call_fourier(const ModelSpec& model, double s0, double strike, double tau,
                              const CosSettings& settings) {
    return price_fourier(model, s0, strike, tau, settings).call;
}

PriceQuote price_put_fourier(const ModelSpec& model, double s0, double strike, double tau,
                             const CosSettings& settings) {
    return price_fourier(model, s0, strike, tau, settings).put;
}

PriceQuote excess_fourier(const ModelSpec& model, double s0, double strike, double tau,
                          const CosSettings& settings) {
    const FourierPair p = price_fourier(model, s0, strike, tau, settings);
    if (strike < s0) return p.put;
    return p.call;
}

double put_from_call(double call, double s0, double strike) { return call - s0 + strike; }

}  // namespace levy
