#include "levy_smile/monte_carlo.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <mutex>
#include <random>
#include <thread>
#include <vector>

#include <fmt/format.h>

#include "levy_smile/errors.hpp"
#include "levy_smile/pricing.hpp"

namespace levy {

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

std::uint64_t block_seed(std::uint64_t seed, int stratum, std::int64_t block) {
    return splitmix64(splitmix64(seed) ^ splitmix64(static_cast<std::uint64_t>(block) * 4 + stratum));
}

enum class JumpCount { poisson, zero, at_least_one };

// Draws X_tau for one block of paths. Distribution objects live for one
// block only so that each block is a pure function of its seed.
class IncrementSampler {
public:
    IncrementSampler(const ModelSpec& model, double tau, std::uint64_t seed, JumpCount count)
        : model_(model), tau_(tau), count_(count), rng_(seed) {
        drift_ = reference_drift(model) * tau;
        sigma_sqrt_tau_ = diffusion_sigma(model) * std::sqrt(tau);
        lambda_tau_ = std::isfinite(jump_intensity(model)) ? jump_intensity(model) * tau : 0.0;
        if (lambda_tau_ > 0.0) poisson_ = std::poisson_distribution<long>(lambda_tau_);
        if (const auto* vg = std::get_if<VarianceGamma>(&model))
            gamma_ = std::gamma_distribution<double>(tau / vg->kappa, vg->kappa);
    }

    double draw() {
        return std::visit([this](const auto& m) { return draw_impl(m); }, model_);
    }

private:
    double normal() { return normal_(rng_); }
    double uniform() { return uniform_(rng_); }

    long jump_count() {
        switch (count_) {
            case JumpCount::zero:
                return 0;
            case JumpCount::poisson:
                return lambda_tau_ > 0.0 ? poisson_(rng_) : 0;
            case JumpCount::at_least_one:
                break;
        }
        if (lambda_tau_ > 30.0) {
            long n = 0;
            while (n == 0) n = poisson_(rng_);
            return n;
        }
        // Inverse CDF of the Poisson law conditioned on N >= 1.
        const double u = uniform();
        long n = 1;
        double pmf = lambda_tau_ * std::exp(-lambda_tau_) / -std::expm1(-lambda_tau_);
        double cdf = pmf;
        while (u > cdf && n < 100000) {
            ++n;
            pmf *= lambda_tau_ / static_cast<double>(n);
            cdf += pmf;
            if (pmf == 0.0) break;
        }
        return n;
    }

    double gaussian_part() { return drift_ + (sigma_sqrt_tau_ > 0.0 ? sigma_sqrt_tau_ * normal() : 0.0); }

    double draw_impl(const BlackScholes&) { return gaussian_part(); }

    double draw_impl(const Merton& m) {
        const double x = gaussian_part();
        const long n = jump_count();
        if (n == 0) return x;
        const double dn = static_cast<double>(n);
        return x + dn * m.mu_j + std::sqrt(dn) * m.delta_j * normal();
    }

    double draw_impl(const Kou& m) {
        double x = gaussian_part();
        const long n = jump_count();
        for (long i = 0; i < n; ++i) {
            const double e = -std::log1p(-uniform());
            x += uniform() < m.p ? e / m.eta1 : -e / m.eta2;
        }
        return x;
    }

    double draw_impl(const VarianceGamma& m) {
        const double g = gamma_(rng_);
        return drift_ + m.theta_vg * g + m.sigma_vg * std::sqrt(g) * normal();
    }

    double draw_impl(const Nig& m) {
        const double gam = std::sqrt(m.alpha * m.alpha - m.beta * m.beta);
        const double v = inverse_gaussian(m.delta * tau_ / gam, m.delta * m.delta * tau_ * tau_);
        return drift_ + m.beta * v + std::sqrt(v) * normal();
    }

    double draw_impl(const Cgmy&) { throw CapabilityError("Monte-Carlo sampling is not available for CGMY"); }

    // Michael-Schucany-Haas, rearranged so the root is free of cancellation
    // when the mean is large relative to the shape.
    double inverse_gaussian(double mean, double shape) {
        const double z = normal();
        const double nu = z * z;
        const double mn = mean * nu;
        const double root = std::sqrt(4.0 * mean * shape * nu + mn * mn);
        const double denom = root + mn;
        const double y = denom > 0.0 ? 4.0 * mean * mean * shape * nu / (denom * denom) : mean;
        if (uniform() <= mean / (mean + y)) return y;
        return mean * mean / y;
    }

    const ModelSpec& model_;
    double tau_;
    JumpCount count_;
    std::mt19937_64 rng_;
    std::normal_distribution<double> normal_;
    std::uniform_real_distribution<double> uniform_;
    std::poisson_distribution<long> poisson_;
    std::gamma_distribution<double> gamma_;
    double drift_ = 0.0;
    double sigma_sqrt_tau_ = 0.0;
    double lambda_tau_ = 0.0;
};

struct Moments {
    std::int64_t n = 0;
    double mean = 0.0;
    double m2 = 0.0;

    void add(double x) {
        ++n;
        const double delta = x - mean;
        mean += delta / static_cast<double>(n);
        m2 += delta * (x - mean);
    }

    void merge(const Moments& o) {
        if (o.n == 0) return;
        const std::int64_t total = n + o.n;
        const double delta = o.mean - mean;
        const double w = static_cast<double>(o.n) / static_cast<double>(total);
        mean += delta * w;
        m2 += o.m2 + delta * delta * static_cast<double>(n) * w;
        n = total;
    }

    double variance() const { return n > 1 ? m2 / static_cast<double>(n - 1) : 0.0; }
};

Moments sample_stratum(const ModelSpec& model, double tau, const std::function<double(double)>& f,
                       std::int64_t n_paths, std::uint64_t seed, int stratum, JumpCount count, unsigned threads) {
    const std::int64_t n_blocks = (n_paths + kMcBlockSize - 1) / kMcBlockSize;
    std::vector<Moments> blocks(static_cast<std::size_t>(n_blocks));
    std::atomic<std::int64_t> next{0};
    std::exception_ptr failure;
    std::mutex failure_mutex;

    const auto worker = [&] {
        try {
            for (std::int64_t b = next++; b < n_blocks; b = next++) {
                IncrementSampler sampler(model, tau, block_seed(seed, stratum, b), count);
                const std::int64_t size = std::min(kMcBlockSize, n_paths - b * kMcBlockSize);
                Moments m;
                for (std::int64_t i = 0; i < size; ++i) m.add(f(sampler.draw()));
                blocks[static_cast<std::size_t>(b)] = m;
            }
        } catch (...) {
            std::lock_guard lock(failure_mutex);
            if (!failure) failure = std::current_exception();
            next = n_blocks;
        }
    };

    const auto hw = static_cast<std::int64_t>(threads > 0 ? threads : std::max(1u, std::thread::hardware_concurrency()));
    const std::int64_t n_workers = std::min(hw, n_blocks);
    std::vector<std::thread> pool;
    for (std::int64_t i = 1; i < n_workers; ++i) pool.emplace_back(worker);
    worker();
    for (auto& t : pool) t.join();
    if (failure) std::rethrow_exception(failure);

    Moments total;
    for (const auto& m : blocks) total.merge(m);
    return total;
}

}  // namespace

bool mc_supported(const ModelSpec& model) { return !std::holds_alternative<Cgmy>(model); }

McEstimate mc_expectation(const ModelSpec& model, double tau, const std::function<double(double)>& f,
                          std::int64_t n_paths, std::uint64_t seed, Sampling sampling, unsigned threads) {
    require_valid(model);
    if (!mc_supported(model))
        throw CapabilityError(fmt::format("Monte-Carlo sampling is not available for {}", model_name(model)));
    if (!(tau > 0.0)) throw DomainError("Monte-Carlo expiry must be positive");
    if (n_paths < 2) throw DomainError("at least two Monte-Carlo paths are required");

    const double lambda = jump_intensity(model);
    const bool stratify = sampling == Sampling::jump_stratified && std::isfinite(lambda) && lambda > 0.0;
    if (!stratify) {
        const Moments m = sample_stratum(model, tau, f, n_paths, seed, 0, JumpCount::poisson, threads);
        const double se = std::sqrt(m.variance() / static_cast<double>(m.n));
        return {m.mean, se, m.n};
    }

    // A tenth of the paths for the no-jump event, the rest conditioned on a jump.
    const std::int64_t n0 = std::max<std::int64_t>(2, n_paths / 10);
    const std::int64_t n1 = std::max<std::int64_t>(2, n_paths - n0);
    const double p0 = std::exp(-lambda * tau);
    const double p1 = -std::expm1(-lambda * tau);
    const Moments m0 = sample_stratum(model, tau, f, n0, seed, 1, JumpCount::zero, threads);
    const Moments m1 = sample_stratum(model, tau, f, n1, seed, 2, JumpCount::at_least_one, threads);
    const double mean = p0 * m0.mean + p1 * m1.mean;
    const double var = p0 * p0 * m0.variance() / static_cast<double>(n0) +
                       p1 * p1 * m1.variance() / static_cast<double>(n1);
    return {mean, std::sqrt(var), n0 + n1};
}

PriceQuote price_call_mc(const ModelSpec& model, double s0, double strike, double tau, std::int64_t n_paths,
                         std::uint64_t seed) {
    if (!(s0 > 0.0) || !(strike > 0.0)) throw DomainError("spot and strike must be positive");
    const auto payoff = [s0, strike](double x) { return std::max(s0 * std::exp(x) - strike, 0.0); };
    const McEstimate e = mc_expectation(model, tau, payoff, n_paths, seed);
    return {e.mean, PriceMethod::monte_carlo, e.std_error, e.n};
}

}  // namespace levy
