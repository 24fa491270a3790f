#include "levy_smile/implied_vol.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include <fmt/format.h>

#include "levy_smile/errors.hpp"
#include "levy_smile/normal.hpp"

namespace levy {

namespace {

constexpr double kLogSqrt2Pi = 0.918938533204672741780329736406;
constexpr double kInitialLower = 1e-9;
constexpr double kUpperCap = 1024.0;  // on the total deviation theta * sqrt(tau)
constexpr int kMaxIterations = 200;

void check_market(double s0, double strike, double tau) {
    if (!(s0 > 0.0) || !(strike > 0.0)) throw DomainError("spot and strike must be positive");
    if (!(tau > 0.0)) throw DomainError("expiry must be positive");
}

// ln(excess) and its derivative in theta.
struct LogExcess {
    double value;
    double slope;
};

LogExcess log_excess_with_slope(double s0, double strike, double tau, double theta) {
    const double ninf = -std::numeric_limits<double>::infinity();
    if (theta == 0.0) return {ninf, std::numeric_limits<double>::infinity()};
    const double sqrt_tau = std::sqrt(tau);
    const double s = theta * sqrt_tau;
    const double k = std::log(strike / s0);
    const double d1 = -k / s + 0.5 * s;
    const double d2 = d1 - s;
    const double vega = s0 * norm_pdf(d1) * sqrt_tau;
    if (strike == s0) {
        const double e = s0 * std::erf(s / (2.0 * std::numbers::sqrt2));
        return {std::log(e), vega / e};
    }
    if (strike > s0 && d1 <= 0.0) {
        const double diff = mills_difference(-d1, -d2);
        return {std::log(s0) - kLogSqrt2Pi - 0.5 * d1 * d1 + std::log(diff), sqrt_tau / diff};
    }
    if (strike < s0 && d2 >= 0.0) {
        const double diff = mills_difference(d2, d1);
        return {std::log(strike) - kLogSqrt2Pi - 0.5 * d2 * d2 + std::log(diff), sqrt_tau / diff};
    }
    // Volatility large enough that the money is within one standard deviation.
    const double e = strike > s0 ? s0 * norm_cdf(d1) - strike * norm_cdf(d2)
                                 : strike * norm_cdf(-d2) - s0 * norm_cdf(-d1);
    return {std::log(e), vega / e};
}

IVPoint solve(double target, double s0, double strike, double tau) {
    IVPoint out;
    out.tau = tau;
    const auto g = [&](double theta) { return log_excess_with_slope(s0, strike, tau, theta); };

    double lo = kInitialLower;
    double hi = 1.0;
    if (g(lo).value >= target) {
        hi = lo;
        lo = 0.0;
    } else {
        while (g(hi).value < target) {
            lo = hi;
            hi *= 2.0;
            if (hi * std::sqrt(tau) > kUpperCap) {
                out.sigma = hi;
                return out;
            }
        }
    }

    const double k = std::log(strike / s0);
    double theta = 0.0;
    if (k != 0.0 && target < std::log(std::min(s0, strike)) - 1.0)
        theta = std::abs(k) / std::sqrt(-2.0 * tau * (target - std::log(s0)));
    else
        theta = std::exp(target - std::log(s0)) * std::sqrt(2.0 * std::numbers::pi / tau);
    if (!(theta > lo && theta < hi)) theta = lo > 0.0 ? std::sqrt(lo * hi) : 0.5 * hi;

    for (int it = 1; it <= kMaxIterations; ++it) {
        out.iterations = it;
        const LogExcess e = g(theta);
        const double f = e.value - target;
        if (std::abs(f) <= 1e-15) {
            out.sigma = theta;
            out.converged = true;
            return out;
        }
        if (f < 0.0)
            lo = theta;
        else
            hi = theta;
        double next = theta - f / e.slope;
        if (!(next > lo && next < hi)) next = (lo > 0.0 && hi > 4.0 * lo) ? std::sqrt(lo * hi) : 0.5 * (lo + hi);
        if (std::abs(next - theta) <= 1e-15 * theta || hi - lo <= 1e-16 * hi) {
            out.sigma = next;
            out.converged = true;
            return out;
        }
        theta = next;
    }
    out.sigma = theta;
    return out;
}

}  // namespace

double bs_call(double s0, double strike, double tau, double theta) {
    return std::max(s0 - strike, 0.0) + bs_excess(s0, strike, tau, theta);
}

double bs_excess(double s0, double strike, double tau, double theta) {
    return std::exp(bs_log_excess(s0, strike, tau, theta));
}

double bs_log_excess(double s0, double strike, double tau, double theta) {
    check_market(s0, strike, tau);
    if (!(theta >= 0.0)) throw DomainError("volatility must be nonnegative");
    if (std::isinf(theta)) return std::log(std::min(s0, strike));
    return log_excess_with_slope(s0, strike, tau, theta).value;
}

double bs_vega(double s0, double strike, double tau, double theta) {
    check_market(s0, strike, tau);
    if (theta == 0.0) return 0.0;
    const double s = theta * std::sqrt(tau);
    const double d1 = std::log(s0 / strike) / s + 0.5 * s;
    return s0 * norm_pdf(d1) * std::sqrt(tau);
}

IVPoint implied_vol(double price, double s0, double strike, double tau) {
    check_market(s0, strike, tau);
    const double intrinsic = std::max(s0 - strike, 0.0);
    if (!(price >= intrinsic))
        throw ArbitrageViolation(fmt::format("call price {} is below intrinsic value {}", price, intrinsic));
    if (price >= s0) throw UpperBoundViolation(fmt::format("call price {} is not below the spot {}", price, s0));
    return implied_vol_from_excess(price - intrinsic, s0, strike, tau);
}

IVPoint implied_vol_from_excess(double excess, double s0, double strike, double tau) {
    check_market(s0, strike, tau);
    if (!(excess >= 0.0)) throw ArbitrageViolation(fmt::format("negative time value {}", excess));
    if (excess == 0.0) return {tau, 0.0, true, 0};
    return implied_vol_from_log_excess(std::log(excess), s0, strike, tau);
}

IVPoint implied_vol_from_log_excess(double log_excess, double s0, double strike, double tau) {
    check_market(s0, strike, tau);
    if (std::isnan(log_excess)) throw NumericFailure("time value is NaN");
    if (log_excess == -std::numeric_limits<double>::infinity()) return {tau, 0.0, true, 0};
    if (log_excess >= std::log(std::min(s0, strike)))
        throw UpperBoundViolation("time value reaches min(S0, K): the call price is not below the spot");
    return solve(log_excess, s0, strike, tau);
}

double rr_limit_value(double excess, double s0, double strike, double tau) {
    check_market(s0, strike, tau);
    if (strike == s0) throw DomainError("the limit functional is undefined at the money (K = S0)");
    if (!(excess > 0.0)) throw DomainError("excess must be positive; a zero excess means zero implied volatility");
    if (!(excess < 1.0)) throw DomainError("excess must be below 1 for the limit functional");
    return std::abs(std::log(strike / s0)) / std::sqrt(-2.0 * tau * std::log(excess));
}

}  // namespace levy
