#include "levy_smile/normal.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "levy_smile/quadrature.hpp"

namespace levy {

namespace {
constexpr double kInvSqrt2Pi = 0.398942280401432677939946059934;
constexpr double kContinuedFractionFrom = 4.0;
}  // namespace

double norm_pdf(double x) { return kInvSqrt2Pi * std::exp(-0.5 * x * x); }

double norm_cdf(double x) { return 0.5 * std::erfc(-x / std::numbers::sqrt2); }

double mills_ratio(double t) {
    if (t < kContinuedFractionFrom) return norm_cdf(-t) / norm_pdf(t);
    return 1.0 / (t + mills_gap(t) / (1.0 - mills_gap(t)) * t);
}

double mills_gap(double t) {
    if (t < kContinuedFractionFrom) return 1.0 - t * (norm_cdf(-t) / norm_pdf(t));
    // R = 1 / (t + Q) with Q = 1 / (t + 2 / (t + 3 / (t + ...))), so 1 - tR = Q / (t + Q).
    // Modified Lentz evaluation of Q.
    constexpr double tiny = 1e-300;
    double f = tiny;
    double C = f;
    double D = 0.0;
    for (int n = 1; n < 5000; ++n) {
        const double a = static_cast<double>(n);
        D = t + a * D;
        if (D == 0.0) D = tiny;
        C = t + a / C;
        if (C == 0.0) C = tiny;
        D = 1.0 / D;
        const double delta = C * D;
        f *= delta;
        if (std::abs(delta - 1.0) < 1e-16) break;
    }
    // Lentz built b0 + a1/(b1 + ...) with b0 = tiny; the first partial numerator is 1.
    const double q = f;
    return q / (t + q);
}

double mills_difference(double a, double b) {
    if (b <= a) return 0.0;
    // Composite Kronrod panels whose width grows with t, where the gap is ~1/t^2.
    double sum = 0.0;
    double lo = a;
    while (lo < b) {
        const double width = 0.5 + 0.25 * lo;
        const double hi = std::min(b, lo + width);
        sum += kronrod21([](double t) { return mills_gap(t); }, lo, hi).value;
        lo = hi;
    }
    return sum;
}

}  // namespace levy
