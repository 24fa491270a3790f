#include <cmath>
#include <vector>

#include <gtest/gtest.h>

#include "levy_smile/errors.hpp"
#include "levy_smile/monte_carlo.hpp"
#include "levy_smile/pricing.hpp"
#include "levy_smile/quadrature.hpp"
#include "oracles.hpp"

using namespace levy;

namespace {

std::vector<ModelSpec> sampled_models() {
    return {oracle::kBlackScholes, oracle::kMerton, oracle::kKou, oracle::kVarianceGamma, oracle::kNig};
}

}  // namespace

TEST(MonteCarlo, MartingaleMean) {
    std::uint64_t seed = 1;
    for (const auto& m : sampled_models())
        for (double tau : {0.01, 1.0}) {
            const McEstimate e = mc_expectation(m, tau, [](double x) { return 100.0 * std::exp(x); }, 1'000'000, seed++);
            EXPECT_LE(std::abs(e.mean - 100.0), 4.0 * e.std_error) << model_name(m) << " tau=" << tau;
        }
}

// Sample mean and variance of X_tau against the closed-form cumulants.
TEST(MonteCarlo, IncrementMomentsMatchCumulants) {
    std::uint64_t seed = 100;
    for (const auto& m : sampled_models()) {
        const double tau = 0.5;
        const Cumulants c = cumulants(m);
        const McEstimate mean = mc_expectation(m, tau, [](double x) { return x; }, 400'000, seed++);
        EXPECT_LE(std::abs(mean.mean - c.c1 * tau), 4.0 * mean.std_error) << model_name(m);
        const double mu = c.c1 * tau;
        const McEstimate var =
            mc_expectation(m, tau, [mu](double x) { return (x - mu) * (x - mu); }, 400'000, seed++);
        EXPECT_LE(std::abs(var.mean - c.c2 * tau), 4.0 * var.std_error) << model_name(m);
    }
}

TEST(MonteCarlo, BlackScholesAgainstFourier) {
    const PriceQuote mc = price_call_mc(oracle::kBlackScholes, 100.0, 110.0, 0.5, 500'000, 7);
    const PriceQuote f = price_call_fourier(oracle::kBlackScholes, 100.0, 110.0, 0.5);
    EXPECT_EQ(mc.method, PriceMethod::monte_carlo);
    EXPECT_EQ(mc.n, 500'000);
    EXPECT_LE(std::abs(mc.value - f.value), 3.0 * mc.err);
}

TEST(MonteCarlo, AgreesWithFourierOnGrid) {
    std::uint64_t seed = 1000;
    for (const auto& m : sampled_models())
        for (double ratio : {0.8, 0.9, 1.1, 1.2})
            for (double tau : {0.01, 0.1, 1.0}) {
                const double strike = 100.0 * ratio;
                const PriceQuote mc = price_call_mc(m, 100.0, strike, tau, 200'000, seed++);
                const PriceQuote f = price_call_fourier(m, 100.0, strike, tau);
                // Floor for cells where no path finishes in the money (price ~1e-20).
                EXPECT_LE(std::abs(mc.value - f.value), std::max(3.0 * std::hypot(mc.err, f.err), 1e-12 * 100.0))
                    << model_name(m) << " K/S0=" << ratio << " tau=" << tau << " mc=" << mc.value
                    << " se=" << mc.err << " fourier=" << f.value;
            }
}

TEST(MonteCarlo, DeterministicInSeed) {
    for (const auto& m : sampled_models()) {
        const PriceQuote a = price_call_mc(m, 100.0, 105.0, 0.2, 150'000, 42);
        const PriceQuote b = price_call_mc(m, 100.0, 105.0, 0.2, 150'000, 42);
        EXPECT_EQ(a.value, b.value);
        EXPECT_EQ(a.err, b.err);
        const PriceQuote c = price_call_mc(m, 100.0, 105.0, 0.2, 150'000, 43);
        EXPECT_NE(a.value, c.value);
    }
}

TEST(MonteCarlo, IndependentOfThreadCount) {
    const auto f = [](double x) { return std::exp(x); };
    for (auto sampling : {Sampling::plain, Sampling::jump_stratified}) {
        const McEstimate one = mc_expectation(oracle::kKou, 0.1, f, 5 * kMcBlockSize + 17, 9, sampling, 1);
        for (unsigned threads : {2u, 3u, 8u}) {
            const McEstimate many = mc_expectation(oracle::kKou, 0.1, f, 5 * kMcBlockSize + 17, 9, sampling, threads);
            EXPECT_EQ(one.mean, many.mean) << threads;
            EXPECT_EQ(one.std_error, many.std_error) << threads;
        }
    }
}

TEST(MonteCarlo, CgmyNotSupported) {
    EXPECT_FALSE(mc_supported(oracle::kCgmy));
    EXPECT_THROW(price_call_mc(oracle::kCgmy, 100.0, 110.0, 0.1, 1000, 1), CapabilityError);
}

TEST(MonteCarlo, RejectsBadArguments) {
    EXPECT_THROW(price_call_mc(oracle::kKou, 100.0, 110.0, 0.0, 1000, 1), DomainError);
    EXPECT_THROW(price_call_mc(oracle::kKou, 100.0, 110.0, 0.1, 1, 1), DomainError);
}

TEST(MonteCarlo, StratifiedMatchesPlain) {
    const auto f = [](double x) { return (0.5 <= x && x <= 1.0) ? 1.0 : 0.0; };
    for (const ModelSpec& m : std::vector<ModelSpec>{oracle::kKou, oracle::kMerton}) {
        const McEstimate plain = mc_expectation(m, 0.05, f, 2'000'000, 5, Sampling::plain);
        const McEstimate strat = mc_expectation(m, 0.05, f, 2'000'000, 6, Sampling::jump_stratified);
        EXPECT_LE(std::abs(plain.mean - strat.mean), 4.0 * std::hypot(plain.std_error, strat.std_error))
            << model_name(m);
        EXPECT_LT(strat.std_error, plain.std_error) << model_name(m);
    }
}

// With tau small the stratified estimator of E[f(X_tau)] / tau sits close to
// the Levy-measure integral of f.
TEST(MonteCarlo, StratifiedRateNearLevyIntegral) {
    const auto f = [](double x) { return (0.5 <= x && x <= 1.0) ? 1.0 : 0.0; };
    const double tau = 1e-4;
    const McEstimate e = mc_expectation(oracle::kKou, tau, f, 1'000'000, 77, Sampling::jump_stratified);
    const double want = integrate_payoff([](double) { return 1.0; }, oracle::kKou, Interval{0.5, 1.0}).value;
    EXPECT_NEAR(want, 0.5 * (std::exp(-5.0) - std::exp(-10.0)), 1e-14);
    EXPECT_LE(std::abs(e.mean / tau - want), 4.0 * e.std_error / tau);
}
