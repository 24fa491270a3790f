#include "levy_smile/models.hpp"

#include <cmath>
#include <numbers>

#include <fmt/format.h>

#include "levy_smile/errors.hpp"
#include "levy_smile/quadrature.hpp"

namespace levy {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr cplx kI{0.0, 1.0};

template <class... Ts>
struct overloaded : Ts... {
    using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

bool finite_all(std::initializer_list<double> xs) {
    for (double x : xs)
        if (!std::isfinite(x)) return false;
    return true;
}

// K_1(z) e^z, stable for large z where K_1 underflows.
double bessel_k1_scaled(double z) {
    if (z < 600.0) return std::cyl_bessel_k(1.0, z) * std::exp(z);
    const double r = 1.0 / z;
    return std::sqrt(std::numbers::pi / (2.0 * z)) *
           (1.0 + 0.375 * r - 0.1171875 * r * r + 0.1025390625 * r * r * r);
}

// Parameters of the VG density exp(A x - B |x|) / (kappa |x|).
struct VgShape {
    double A;
    double B;
};
VgShape vg_shape(const VarianceGamma& m) {
    const double s2 = m.sigma_vg * m.sigma_vg;
    return {m.theta_vg / s2, std::sqrt(m.theta_vg * m.theta_vg + 2.0 * s2 / m.kappa) / s2};
}

bool cgmy_uses_compensated_form(const Cgmy& m) { return m.Y >= 1.0; }

cplx jump_exponent_impl(const ModelSpec& model, cplx u) {
    if (u == cplx{0.0, 0.0}) return 0.0;
    return std::visit(
        overloaded{
            [](const BlackScholes&) -> cplx { return 0.0; },
            [&](const Merton& m) -> cplx {
                return m.lambda * (std::exp(kI * u * m.mu_j - 0.5 * m.delta_j * m.delta_j * u * u) - 1.0);
            },
            [&](const Kou& m) -> cplx {
                const cplx iu = kI * u;
                return m.lambda * (m.p * iu / (m.eta1 - iu) - (1.0 - m.p) * iu / (m.eta2 + iu));
            },
            [&](const VarianceGamma& m) -> cplx {
                const cplx z = 1.0 - kI * u * m.theta_vg * m.kappa +
                               0.5 * m.sigma_vg * m.sigma_vg * m.kappa * u * u;
                return -std::log(z) / m.kappa;
            },
            [&](const Nig& m) -> cplx {
                const cplx b = m.beta + kI * u;
                return m.delta * (std::sqrt(m.alpha * m.alpha - m.beta * m.beta) -
                                  std::sqrt(m.alpha * m.alpha - b * b));
            },
            [&](const Cgmy& m) -> cplx {
                const cplx iu = kI * u;
                if (m.Y == 1.0) {
                    return m.C * ((m.M - iu) * std::log(1.0 - iu / m.M) +
                                  (m.G + iu) * std::log(1.0 + iu / m.G));
                }
                cplx bracket = std::pow(m.M - iu, m.Y) - std::pow(m.M, m.Y) +
                               std::pow(m.G + iu, m.Y) - std::pow(m.G, m.Y);
                if (cgmy_uses_compensated_form(m)) {
                    bracket += iu * m.Y * (std::pow(m.M, m.Y - 1.0) - std::pow(m.G, m.Y - 1.0));
                }
                return m.C * std::tgamma(-m.Y) * bracket;
            },
        },
        model);
}

// c_J such that the triplet drift is gamma = reference_drift + c_J:
// int_{|y|<=1} y nu(dy) for the uncompensated jump exponents, or
// -int_{|y|>1} y nu(dy) for the compensated ones (CGMY with Y >= 1).
double truncation_shift(const ModelSpec& model) {
    QuadratureSettings tight{1e-15, 1e-13, 4000};
    return std::visit(
        overloaded{
            [](const BlackScholes&) { return 0.0; },
            [](const Merton& m) {
                const double a = (-1.0 - m.mu_j) / m.delta_j;
                const double b = (1.0 - m.mu_j) / m.delta_j;
                const auto pdf = [](double z) { return std::exp(-0.5 * z * z) / std::sqrt(2.0 * std::numbers::pi); };
                const auto cdf = [](double z) { return 0.5 * std::erfc(-z / std::numbers::sqrt2); };
                return m.lambda * (m.mu_j * (cdf(b) - cdf(a)) + m.delta_j * (pdf(a) - pdf(b)));
            },
            [](const Kou& m) {
                const auto part = [](double eta) { return (1.0 - std::exp(-eta) * (1.0 + eta)) / eta; };
                return m.lambda * (m.p * part(m.eta1) - (1.0 - m.p) * part(m.eta2));
            },
            [](const VarianceGamma& m) {
                const auto [A, B] = vg_shape(m);
                return (-std::expm1(A - B) / (B - A) + std::expm1(-(A + B)) / (A + B)) / m.kappa;
            },
            [&](const Nig& m) {
                const auto f = [&](double x) {
                    if (x == 0.0) return m.beta / m.alpha;
                    return std::sinh(m.beta * x) * std::cyl_bessel_k(1.0, m.alpha * x);
                };
                return 2.0 * m.delta * m.alpha / std::numbers::pi * integrate(f, {0.0, 1.0}, tight).value;
            },
            [&](const Cgmy& m) {
                if (!cgmy_uses_compensated_form(m)) {
                    // y = s^k removes the y^{-Y} endpoint singularity.
                    const double k = 1.0 / (1.0 - m.Y);
                    const auto f = [&](double s) {
                        const double y = std::pow(s, k);
                        return k * (std::exp(-m.M * y) - std::exp(-m.G * y));
                    };
                    return m.C * integrate(f, {0.0, 1.0}, tight).value;
                }
                const auto f = [&](double y) {
                    return std::pow(y, -m.Y) * (std::exp(-m.M * y) - std::exp(-m.G * y));
                };
                return -m.C * integrate(f, Interval::above(1.0), tight).value;
            },
        },
        model);
}

}  // namespace

std::string_view model_name(const ModelSpec& model) {
    return std::visit(overloaded{
                          [](const BlackScholes&) { return std::string_view{"black_scholes"}; },
                          [](const Merton&) { return std::string_view{"merton"}; },
                          [](const Kou&) { return std::string_view{"kou"}; },
                          [](const VarianceGamma&) { return std::string_view{"variance_gamma"}; },
                          [](const Nig&) { return std::string_view{"nig"}; },
                          [](const Cgmy&) { return std::string_view{"cgmy"}; },
                      },
                      model);
}

std::string_view to_string(Activity a) { return a == Activity::finite ? "finite" : "infinite"; }
std::string_view to_string(Variation v) { return v == Variation::finite ? "finite" : "infinite"; }
std::string_view to_string(Support s) {
    switch (s) {
        case Support::none: return "none";
        case Support::two_sided: return "two-sided";
        case Support::positive_only: return "positive-only";
        case Support::negative_only: return "negative-only";
    }
    return "unknown";
}

std::vector<std::string> validate(const ModelSpec& model) {
    std::vector<std::string> v;
    auto check = [&v](bool ok, std::string msg) {
        if (!ok) v.push_back(std::move(msg));
    };
    std::visit(
        overloaded{
            [&](const BlackScholes& m) {
                check(finite_all({m.sigma}), "sigma must be finite");
                check(m.sigma >= 0.0, "sigma < 0");
            },
            [&](const Merton& m) {
                check(finite_all({m.sigma, m.lambda, m.mu_j, m.delta_j}), "all parameters must be finite");
                check(m.sigma >= 0.0, "sigma < 0");
                check(m.lambda > 0.0, "lambda <= 0: jump intensity must be positive");
                check(m.delta_j > 0.0, "delta_j <= 0: jump stdev must be positive");
            },
            [&](const Kou& m) {
                check(finite_all({m.sigma, m.lambda, m.p, m.eta1, m.eta2}), "all parameters must be finite");
                check(m.sigma >= 0.0, "sigma < 0");
                check(m.lambda > 0.0, "lambda <= 0: jump intensity must be positive");
                check(m.p >= 0.0 && m.p <= 1.0, "p outside [0, 1]");
                check(m.eta1 > 1.0, "eta1 <= 1: e^y not nu-integrable on tail");
                check(m.eta2 > 0.0, "eta2 <= 0: down-jump decay must be positive");
            },
            [&](const VarianceGamma& m) {
                check(finite_all({m.theta_vg, m.sigma_vg, m.kappa}), "all parameters must be finite");
                check(m.sigma_vg > 0.0, "sigma_vg <= 0");
                check(m.kappa > 0.0, "kappa <= 0");
                check(m.kappa * (m.theta_vg + 0.5 * m.sigma_vg * m.sigma_vg) < 1.0,
                      "kappa*(theta_vg + sigma_vg^2/2) >= 1: e^y not nu-integrable on tail");
            },
            [&](const Nig& m) {
                check(finite_all({m.alpha, m.beta, m.delta}), "all parameters must be finite");
                check(m.alpha > 0.0, "alpha <= 0");
                check(m.delta > 0.0, "delta <= 0");
                check(std::abs(m.beta) < m.alpha, "|beta| >= alpha");
                check(m.beta + 1.0 < m.alpha, "beta + 1 >= alpha: e^y not nu-integrable on tail");
            },
            [&](const Cgmy& m) {
                check(finite_all({m.C, m.G, m.M, m.Y}), "all parameters must be finite");
                check(m.C > 0.0, "C <= 0");
                check(m.G > 0.0, "G <= 0");
                check(m.M > 1.0, "M <= 1: e^y not nu-integrable on tail");
                check(m.Y > 0.0 && m.Y < 2.0, "Y outside (0, 2)");
            },
        },
        model);
    return v;
}

void require_valid(const ModelSpec& model) {
    const auto violations = validate(model);
    if (violations.empty()) return;
    std::string msg = fmt::format("invalid {} model:", model_name(model));
    for (const auto& s : violations) msg += " " + s + ";";
    throw DomainError(msg);
}

double levy_density(const ModelSpec& model, double x) {
    if (x == 0.0) throw DomainError("Lévy density is not defined at x = 0");
    if (!std::isfinite(x)) return 0.0;
    const double ax = std::abs(x);
    return std::visit(
        overloaded{
            [](const BlackScholes&) { return 0.0; },
            [&](const Merton& m) {
                const double z = (x - m.mu_j) / m.delta_j;
                return m.lambda * std::exp(-0.5 * z * z) / (m.delta_j * std::sqrt(2.0 * std::numbers::pi));
            },
            [&](const Kou& m) {
                if (x > 0.0) return m.lambda * m.p * m.eta1 * std::exp(-m.eta1 * x);
                return m.lambda * (1.0 - m.p) * m.eta2 * std::exp(m.eta2 * x);
            },
            [&](const VarianceGamma& m) {
                const auto [A, B] = vg_shape(m);
                return std::exp(A * x - B * ax) / (m.kappa * ax);
            },
            [&](const Nig& m) {
                const double z = m.alpha * ax;
                return m.delta * m.alpha / (std::numbers::pi * ax) * std::exp(m.beta * x - z) *
                       bessel_k1_scaled(z);
            },
            [&](const Cgmy& m) {
                const double rate = x > 0.0 ? m.M : m.G;
                return m.C * std::exp(-rate * ax) / std::pow(ax, 1.0 + m.Y);
            },
        },
        model);
}

double diffusion_sigma(const ModelSpec& model) {
    return std::visit(overloaded{
                          [](const BlackScholes& m) { return m.sigma; },
                          [](const Merton& m) { return m.sigma; },
                          [](const Kou& m) { return m.sigma; },
                          [](const auto&) { return 0.0; },
                      },
                      model);
}

double jump_intensity(const ModelSpec& model) {
    return std::visit(overloaded{
                          [](const BlackScholes&) { return 0.0; },
                          [](const Merton& m) { return m.lambda; },
                          [](const Kou& m) { return m.lambda; },
                          [](const auto&) { return kInf; },
                      },
                      model);
}

bool has_jumps(const ModelSpec& model) { return !std::holds_alternative<BlackScholes>(model); }

cplx jump_exponent(const ModelSpec& model, cplx u) { return jump_exponent_impl(model, u); }

double reference_drift(const ModelSpec& model) {
    const double s = diffusion_sigma(model);
    return -0.5 * s * s - jump_exponent_impl(model, cplx{0.0, -1.0}).real();
}

double martingale_drift(const ModelSpec& model) {
    require_valid(model);
    return reference_drift(model) + truncation_shift(model);
}

double finite_variation_drift(const ModelSpec& model) {
    require_valid(model);
    const auto t = triplet(model);
    if (t.variation != Variation::finite)
        throw DomainError(fmt::format("{} model has infinite variation; no drift gamma_0", model_name(model)));
    // Every finite-variation model here uses the uncompensated jump exponent,
    // so the reference drift is exactly gamma_0.
    return reference_drift(model);
}

cplx char_exponent(const ModelSpec& model, cplx u) {
    if (!CharacteristicStrip::contains(u))
        throw DomainError(fmt::format("u = ({}, {}) outside the strip Im(u) in [-1, 0]", u.real(), u.imag()));
    if (u == cplx{0.0, 0.0}) return 0.0;
    const double s = diffusion_sigma(model);
    return kI * u * reference_drift(model) - 0.5 * s * s * u * u + jump_exponent_impl(model, u);
}

LevyTriplet triplet(const ModelSpec& model) {
    require_valid(model);
    LevyTriplet t;
    t.gamma = martingale_drift(model);
    t.sigma = diffusion_sigma(model);
    t.density = [model](double x) { return levy_density(model, x); };
    const bool diffusive = t.sigma > 0.0;
    std::visit(
        overloaded{
            [&](const BlackScholes&) {
                t.activity = Activity::finite;
                t.total_intensity = 0.0;
                t.support = Support::none;
                t.zero_in_support = false;
                t.variation = diffusive ? Variation::infinite : Variation::finite;
            },
            [&](const Merton& m) {
                t.activity = Activity::finite;
                t.total_intensity = m.lambda;
                t.support = Support::two_sided;
                t.zero_in_support = true;
                t.variation = diffusive ? Variation::infinite : Variation::finite;
            },
            [&](const Kou& m) {
                t.activity = Activity::finite;
                t.total_intensity = m.lambda;
                t.support = m.p == 1.0   ? Support::positive_only
                            : m.p == 0.0 ? Support::negative_only
                                         : Support::two_sided;
                t.zero_in_support = true;
                t.variation = diffusive ? Variation::infinite : Variation::finite;
            },
            [&](const VarianceGamma&) {
                t.activity = Activity::infinite;
                t.total_intensity = kInf;
                t.support = Support::two_sided;
                t.zero_in_support = true;
                t.variation = Variation::finite;
            },
            [&](const Nig&) {
                t.activity = Activity::infinite;
                t.total_intensity = kInf;
                t.support = Support::two_sided;
                t.zero_in_support = true;
                t.variation = Variation::infinite;
            },
            [&](const Cgmy& m) {
                t.activity = Activity::infinite;
                t.total_intensity = kInf;
                t.support = Support::two_sided;
                t.zero_in_support = true;
                t.variation = m.Y < 1.0 ? Variation::finite : Variation::infinite;
            },
        },
        model);
    return t;
}

double LevyTriplet::nu(double x) const {
    if (x == 0.0) throw DomainError("Lévy density is not defined at x = 0");
    return density ? density(x) : 0.0;
}

Cumulants cumulants(const ModelSpec& model) {
    const double s = diffusion_sigma(model);
    const double d = reference_drift(model);
    struct Jump {
        double mean, c2, c4;
    };
    const Jump j = std::visit(
        overloaded{
            [](const BlackScholes&) { return Jump{0.0, 0.0, 0.0}; },
            [](const Merton& m) {
                const double mu2 = m.mu_j * m.mu_j;
                const double d2 = m.delta_j * m.delta_j;
                return Jump{m.lambda * m.mu_j, m.lambda * (mu2 + d2),
                            m.lambda * (mu2 * mu2 + 6.0 * mu2 * d2 + 3.0 * d2 * d2)};
            },
            [](const Kou& m) {
                const double q = 1.0 - m.p;
                return Jump{m.lambda * (m.p / m.eta1 - q / m.eta2),
                            2.0 * m.lambda * (m.p / std::pow(m.eta1, 2) + q / std::pow(m.eta2, 2)),
                            24.0 * m.lambda * (m.p / std::pow(m.eta1, 4) + q / std::pow(m.eta2, 4))};
            },
            [](const VarianceGamma& m) {
                const double s2 = m.sigma_vg * m.sigma_vg;
                const double t2 = m.theta_vg * m.theta_vg;
                const double k = m.kappa;
                return Jump{m.theta_vg, s2 + t2 * k,
                            3.0 * s2 * s2 * k + 12.0 * s2 * t2 * k * k + 6.0 * t2 * t2 * k * k * k};
            },
            [](const Nig& m) {
                const double a2 = m.alpha * m.alpha;
                const double g = std::sqrt(a2 - m.beta * m.beta);
                return Jump{m.delta * m.beta / g, m.delta * a2 / std::pow(g, 3),
                            3.0 * m.delta * a2 * (a2 + 4.0 * m.beta * m.beta) / std::pow(g, 7)};
            },
            [](const Cgmy& m) {
                const auto moment = [&](int n) {
                    const double sign = n % 2 == 0 ? 1.0 : -1.0;
                    return m.C * std::tgamma(n - m.Y) *
                           (std::pow(m.M, m.Y - n) + sign * std::pow(m.G, m.Y - n));
                };
                const double mean = cgmy_uses_compensated_form(m) ? 0.0 : moment(1);
                return Jump{mean, moment(2), moment(4)};
            },
        },
        model);
    return {d + j.mean, s * s + j.c2, j.c4};
}

JumpMoments jump_size_moments(const ModelSpec& model) {
    return std::visit(
        overloaded{
            [](const BlackScholes&) { return JumpMoments{}; },
            [](const Merton& m) {
                const double mu2 = m.mu_j * m.mu_j;
                const double d2 = m.delta_j * m.delta_j;
                return JumpMoments{m.mu_j, mu2 + d2, mu2 * mu2 + 6.0 * mu2 * d2 + 3.0 * d2 * d2};
            },
            [](const Kou& m) {
                const double q = 1.0 - m.p;
                return JumpMoments{m.p / m.eta1 - q / m.eta2,
                                   2.0 * (m.p / std::pow(m.eta1, 2) + q / std::pow(m.eta2, 2)),
                                   24.0 * (m.p / std::pow(m.eta1, 4) + q / std::pow(m.eta2, 4))};
            },
            [&](const auto&) -> JumpMoments {
                throw DomainError(fmt::format("{} model has infinite activity; no jump-size law",
                                              model_name(model)));
            },
        },
        model);
}

}  // namespace levy
