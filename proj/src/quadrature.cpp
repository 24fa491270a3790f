#include "levy_smile/quadrature.hpp"

#include <array>
#include <cmath>
#include <queue>
#include <vector>

#include <fmt/format.h>

#include "levy_smile/errors.hpp"

namespace levy {

namespace {

// Kronrod 21-point abscissae on [-1, 1]; odd indices are the 10-point Gauss nodes.
constexpr std::array<double, 11> kXgk = {
    0.995657163025808080735527280689003, 0.973906528517171720077964012084452,
    0.930157491355708226001207180059508, 0.865063366688984510732096688423493,
    0.780817726586416897063717578345042, 0.679409568299024406234327365114874,
    0.562757134668604683339000099272694, 0.433395394129247190799265943165784,
    0.294392862701460198131126603103866, 0.148874338981631210884826001129720,
    0.000000000000000000000000000000000};

constexpr std::array<double, 11> kWgk = {
    0.011694638867371874278064396062192, 0.032558162307964727478818972459390,
    0.054755896574351996031381300244580, 0.075039674810919952767043140916190,
    0.093125454583697605535065465083366, 0.109387158802297641899210590325805,
    0.123491976262065851077600525636876, 0.134709217311473325928054001771707,
    0.142775938577060080797094273138717, 0.147739104901338491374841515972068,
    0.149445554002916905664936468389821};

constexpr std::array<double, 5> kWg = {
    0.066671344308688137593568809893332, 0.149451349150580593145776339657697,
    0.219086362515982043995534934228163, 0.269266719309996355091226921569469,
    0.295524224714752870173892994651338};

struct Panel {
    double a;
    double b;
    double value;
    double err;
    bool operator<(const Panel& o) const { return err < o.err; }
};

Panel kronrod_panel(const std::function<double(double)>& f, double a, double b) {
    const double c = 0.5 * (a + b);
    const double h = 0.5 * (b - a);
    const double fc = f(c);
    double kronrod = kWgk[10] * fc;
    double gauss = 0.0;
    for (int j = 0; j < 10; ++j) {
        const double dx = h * kXgk[j];
        const double pair = f(c - dx) + f(c + dx);
        kronrod += kWgk[j] * pair;
        if (j % 2 == 1) gauss += kWg[j / 2] * pair;
    }
    kronrod *= h;
    gauss *= h;
    return {a, b, kronrod, std::abs(kronrod - gauss)};
}

Estimate adaptive(const std::function<double(double)>& f, double a, double b, const QuadratureSettings& s) {
    if (a == b) return {0.0, 0.0};
    std::priority_queue<Panel> heap;
    Panel first = kronrod_panel(f, a, b);
    double total = first.value;
    double total_err = first.err;
    heap.push(first);
    int splits = 0;
    while (total_err > std::max(s.abs_tol, s.rel_tol * std::abs(total))) {
        if (!std::isfinite(total)) throw NumericFailure("non-finite integrand value");
        if (splits >= s.max_subdivisions) {
            throw IntegrationFailure(
                fmt::format("adaptive quadrature did not converge after {} subdivisions (estimate {}, error {})",
                            splits, total, total_err),
                total, total_err);
        }
        const Panel worst = heap.top();
        heap.pop();
        const double mid = 0.5 * (worst.a + worst.b);
        if (mid <= worst.a || mid >= worst.b) {
            // Panel below floating-point resolution; accept it as is.
            heap.push({worst.a, worst.b, worst.value, 0.0});
            total_err -= worst.err;
            continue;
        }
        const Panel left = kronrod_panel(f, worst.a, mid);
        const Panel right = kronrod_panel(f, mid, worst.b);
        total += left.value + right.value - worst.value;
        total_err += left.err + right.err - worst.err;
        heap.push(left);
        heap.push(right);
        ++splits;
        // Running sums drift; rebuild them from the heap now and then.
        if (splits % 64 == 0) {
            std::vector<Panel> all;
            all.reserve(heap.size());
            total = 0.0;
            total_err = 0.0;
            while (!heap.empty()) {
                all.push_back(heap.top());
                heap.pop();
            }
            for (const auto& p : all) {
                total += p.value;
                total_err += p.err;
                heap.push(p);
            }
        }
    }
    if (!std::isfinite(total)) throw NumericFailure("non-finite integrand value");
    return {total, total_err};
}

}  // namespace

Estimate kronrod21(const std::function<double(double)>& f, double a, double b) {
    const Panel p = kronrod_panel(f, a, b);
    return {p.value, p.err};
}

Estimate integrate(const std::function<double(double)>& f, Interval domain, const QuadratureSettings& settings) {
    const double lo = domain.lo;
    const double hi = domain.hi;
    if (std::isnan(lo) || std::isnan(hi) || lo > hi) throw DomainError("integration interval must satisfy lo <= hi");
    const bool lo_inf = std::isinf(lo);
    const bool hi_inf = std::isinf(hi);
    if (!lo_inf && !hi_inf) return adaptive(f, lo, hi, settings);
    if (lo_inf && hi_inf) {
        // Split at 0 and integrate each half-line.
        const Estimate left = integrate(f, Interval::below(0.0), settings);
        const Estimate right = integrate(f, Interval::above(0.0), settings);
        return {left.value + right.value, left.err + right.err};
    }
    if (hi_inf) {
        const auto g = [&](double t) {
            const double w = 1.0 - t;
            return f(lo + t / w) / (w * w);
        };
        return adaptive(g, 0.0, 1.0, settings);
    }
    const auto g = [&](double t) {
        const double w = 1.0 - t;
        return f(hi - t / w) / (w * w);
    };
    return adaptive(g, 0.0, 1.0, settings);
}

Estimate integrate_payoff(const std::function<double(double)>& f, const ModelSpec& model, Interval domain,
                          const QuadratureSettings& settings) {
    require_valid(model);
    if (domain.contains(0.0))
        throw DomainError(fmt::format("integration domain [{}, {}] contains the origin", domain.lo, domain.hi));
    if (!has_jumps(model)) return {0.0, 0.0};
    const auto g = [&](double x) {
        if (!std::isfinite(x)) return 0.0;
        const double nu = levy_density(model, x);
        return nu == 0.0 ? 0.0 : f(x) * nu;
    };
    return integrate(g, domain, settings);
}

namespace {

// Slopes end up inside logarithms, so a result that only met the absolute
// tolerance is refined once with the relative criterion alone.
Estimate relative_refine(const std::function<double(double)>& payoff, const ModelSpec& model, Interval domain,
                         const QuadratureSettings& settings) {
    const Estimate first = integrate_payoff(payoff, model, domain, settings);
    if (first.value <= 0.0 || first.err <= settings.rel_tol * first.value) return first;
    QuadratureSettings relative = settings;
    relative.abs_tol = 0.0;
    try {
        return integrate_payoff(payoff, model, domain, relative);
    } catch (const IntegrationFailure&) {
        return first;
    }
}

}  // namespace

Estimate slope_call(const ModelSpec& model, double s0, double strike, const QuadratureSettings& settings) {
    if (!(s0 > 0.0) || !(strike > 0.0)) throw DomainError("spot and strike must be positive");
    if (strike <= s0)
        throw DomainError("call slope requires K > S0 (at or in the money the integrand does not vanish near 0)");
    const double k = std::log(strike / s0);
    const auto payoff = [&](double x) { return std::max(s0 * std::exp(x) - strike, 0.0); };
    return relative_refine(payoff, model, Interval::above(k), settings);
}

Estimate slope_put(const ModelSpec& model, double s0, double strike, const QuadratureSettings& settings) {
    if (!(s0 > 0.0) || !(strike > 0.0)) throw DomainError("spot and strike must be positive");
    if (strike >= s0)
        throw DomainError("put slope requires K < S0 (at or out of the money the integrand does not vanish near 0)");
    const double k = std::log(strike / s0);
    const auto payoff = [&](double x) { return std::max(strike - s0 * std::exp(x), 0.0); };
    return relative_refine(payoff, model, Interval::below(k), settings);
}

SlopeResult slopes(const ModelSpec& model, double s0, double strike, const QuadratureSettings& settings) {
    if (strike == s0) throw DomainError("at-the-money strike K = S0 is excluded");
    SlopeResult r;
    r.log_moneyness = std::log(strike / s0);
    if (strike > s0)
        r.call = slope_call(model, s0, strike, settings);
    else
        r.put = slope_put(model, s0, strike, settings);
    return r;
}

}  // namespace levy
