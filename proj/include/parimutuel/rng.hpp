#pragma once

#include <cstdint>
#include <random>

#include <Eigen/Core>

namespace parimutuel {

using RandomStream = std::mt19937_64;

/// splitmix64 finalizer.
constexpr std::uint64_t mix64(std::uint64_t x) noexcept {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

/// Seed for replication `replication` of grid cell `cell` under `base_seed`:
///   mix64(mix64(mix64(base_seed) ^ cell) ^ replication)
/// Any (cell, replication) can be recomputed without running the others.
constexpr std::uint64_t replication_seed(std::uint64_t base_seed, std::uint64_t cell,
                                         std::uint64_t replication) noexcept {
    return mix64(mix64(mix64(base_seed) ^ cell) ^ replication);
}

/// Multinomial draw of `trials` units over `probs`, written into `out`.
/// Sequential conditional binomials; the last category takes the remainder.
template <typename Probs, typename Out>
void sample_multinomial(std::int64_t trials, const Eigen::MatrixBase<Probs>& probs,
                        Eigen::MatrixBase<Out>& out, RandomStream& rng) {
    const Eigen::Index n = probs.size();
    out.setZero();
    std::int64_t remaining = trials;
    double mass_left = 1.0;
    for (Eigen::Index k = 0; k + 1 < n && remaining > 0; ++k) {
        const double pk = probs[k];
        double share = mass_left > 0.0 ? pk / mass_left : 1.0;
        std::int64_t drawn = 0;
        if (share >= 1.0) {
            drawn = remaining;
        } else if (share > 0.0) {
            std::binomial_distribution<std::int64_t> binomial(remaining, share);
            drawn = binomial(rng);
        }
        out[k] = drawn;
        remaining -= drawn;
        mass_left -= pk;
    }
    if (remaining > 0) out[n - 1] += remaining;
}

}  // namespace parimutuel
