#pragma once

#include <complex>
#include <functional>
#include <limits>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace levy {

using cplx = std::complex<double>;

// Parametric exponential-Lévy models. Field names match the configuration keys.

struct BlackScholes {
    double sigma = 0.0;
};

struct Merton {
    double sigma = 0.0;
    double lambda = 0.0;   // jump intensity
    double mu_j = 0.0;     // mean of the normal jump size
    double delta_j = 0.0;  // stdev of the normal jump size
};

struct Kou {
    double sigma = 0.0;
    double lambda = 0.0;
    double p = 0.0;     // probability that a jump is upward
    double eta1 = 0.0;  // rate of the upward exponential jumps
    double eta2 = 0.0;  // rate of the downward exponential jumps
};

struct VarianceGamma {
    double theta_vg = 0.0;
    double sigma_vg = 0.0;
    double kappa = 0.0;  // variance of the gamma clock
};

struct Nig {
    double alpha = 0.0;
    double beta = 0.0;
    double delta = 0.0;
};

struct Cgmy {
    double C = 0.0;
    double G = 0.0;
    double M = 0.0;
    double Y = 0.0;
};

using ModelSpec = std::variant<BlackScholes, Merton, Kou, VarianceGamma, Nig, Cgmy>;

/// Lower-case tag used in configuration files and CSV summaries.
std::string_view model_name(const ModelSpec& model);

/// Empty when the parameters are admissible; otherwise one message per
/// violated condition, naming the condition.
std::vector<std::string> validate(const ModelSpec& model);

/// Throws DomainError listing all violations.
void require_valid(const ModelSpec& model);

enum class Activity { finite, infinite };
enum class Variation { finite, infinite };
enum class Support { none, two_sided, positive_only, negative_only };

std::string_view to_string(Activity a);
std::string_view to_string(Variation v);
std::string_view to_string(Support s);

/// Characteristics (gamma, sigma, nu) with nu carried as a density.
/// `variation` describes the paths of X (so sigma > 0 means infinite variation).
struct LevyTriplet {
    double gamma = 0.0;
    double sigma = 0.0;
    std::function<double(double)> density;
    Activity activity = Activity::finite;
    double total_intensity = 0.0;  // nu(R); +inf for infinite activity
    Variation variation = Variation::finite;
    Support support = Support::none;
    bool zero_in_support = false;  // 0 lies in the closed support of nu

    /// nu(x); throws DomainError at x = 0.
    double nu(double x) const;
    bool is_trivial() const { return gamma == 0.0 && sigma == 0.0 && support == Support::none; }
};

LevyTriplet triplet(const ModelSpec& model);

/// Lévy density nu(x), x != 0.
double levy_density(const ModelSpec& model, double x);

/// The gamma of the triplet (truncation 1_{|y|<=1}) that makes exp(X) a martingale.
double martingale_drift(const ModelSpec& model);

/// Drift gamma_0 of a finite-variation process, X_t = gamma_0 t + sum of jumps.
/// Throws DomainError for infinite-variation models.
double finite_variation_drift(const ModelSpec& model);

double diffusion_sigma(const ModelSpec& model);

/// nu(R) for finite-activity models, +inf otherwise.
double jump_intensity(const ModelSpec& model);

bool has_jumps(const ModelSpec& model);

/// Strip of the complex plane on which the exponential moment condition
/// guarantees finiteness of E[exp(iuX)].
struct CharacteristicStrip {
    static constexpr double im_lo = -1.0;
    static constexpr double im_hi = 0.0;
    static bool contains(cplx u) { return u.imag() >= im_lo && u.imag() <= im_hi; }
};

/// psi(u) with E[exp(iuX_t)] = exp(t psi(u)), martingale drift included.
/// Throws DomainError when u is outside CharacteristicStrip.
cplx char_exponent(const ModelSpec& model, cplx u);

/// Jump part of the exponent in closed form. The split
///   psi(u) = i u d - sigma^2 u^2 / 2 + jump_exponent(u),  d = reference_drift
/// holds for every model; jump_exponent(0) = 0. For finite-activity models it is
/// lambda (phi_J(u) - 1) with phi_J the jump-size characteristic function.
/// No strip check: callers evaluate it on the real line or inside the strip.
cplx jump_exponent(const ModelSpec& model, cplx u);

/// d in the decomposition above, fixed by psi(-i) = 0.
double reference_drift(const ModelSpec& model);

/// Cumulants of X_1 (first, second, fourth).
struct Cumulants {
    double c1 = 0.0;
    double c2 = 0.0;
    double c4 = 0.0;
};
Cumulants cumulants(const ModelSpec& model);

/// Raw moments E[J], E[J^2], E[J^4] of a single jump (finite activity only).
struct JumpMoments {
    double m1 = 0.0;
    double m2 = 0.0;
    double m4 = 0.0;
};
JumpMoments jump_size_moments(const ModelSpec& model);

}  // namespace levy
