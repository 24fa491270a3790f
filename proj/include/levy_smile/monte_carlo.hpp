#pragma once

#include <cstdint>
#include <functional>

#include "levy_smile/models.hpp"

namespace levy {

enum class Sampling {
    plain,
    // Finite-activity models only: the no-jump and at-least-one-jump events
    // are sampled as separate strata and recombined with their exact
    // probabilities. Falls back to plain sampling for other models.
    jump_stratified,
};

struct McEstimate {
    double mean = 0.0;
    double std_error = 0.0;
    std::int64_t n = 0;
};

/// E[f(X_tau)] by exact sampling of the increment X_tau.
///
/// Paths are grouped in blocks of `kMcBlockSize`; block b of stratum s draws
/// from a std::mt19937_64 seeded with SplitMix64 of (seed, s, b), and block
/// results are merged in index order. The result therefore depends only on
/// (model, tau, f, n_paths, seed, sampling), never on the thread count.
/// `f` is called concurrently and must be thread-safe.
/// `threads` = 0 uses the hardware concurrency. Throws CapabilityError for CGMY.
McEstimate mc_expectation(const ModelSpec& model, double tau, const std::function<double(double)>& f,
                          std::int64_t n_paths, std::uint64_t seed, Sampling sampling = Sampling::plain,
                          unsigned threads = 0);

inline constexpr std::int64_t kMcBlockSize = 1 << 16;

/// True for the models the sampler supports (all except CGMY).
bool mc_supported(const ModelSpec& model);

}  // namespace levy
