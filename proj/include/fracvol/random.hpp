#pragma once

#include <cstdint>
#include <random>

namespace fracvol {

using Rng = std::mt19937_64;

namespace detail {

constexpr std::uint64_t splitmix64(std::uint64_t x) noexcept {
    x += 0x9E3779B97F4A7C15ULL;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
    return x ^ (x >> 31);
}

}  // namespace detail

/// Key of substream `stream` derived from a master seed.
///
/// The mapping is a pure function of (seed, stream), so work split across
/// threads draws the same numbers regardless of scheduling.
constexpr std::uint64_t substream_key(std::uint64_t seed, std::uint64_t stream) noexcept {
    return detail::splitmix64(detail::splitmix64(seed) ^ detail::splitmix64(stream + 0x632BE59BD9B4E019ULL));
}

inline Rng make_rng(std::uint64_t seed, std::uint64_t stream = 0) {
    return Rng(substream_key(seed, stream));
}

/// Standard normal sampler. One instance per stream; the polar method of
/// libstdc++ is the fixed Gaussian transform of this release.
class NormalSampler {
public:
    explicit NormalSampler(Rng rng) : rng_(std::move(rng)) {}

    double operator()() { return dist_(rng_); }
    Rng& engine() { return rng_; }

private:
    Rng rng_;
    std::normal_distribution<double> dist_{0.0, 1.0};
};

inline NormalSampler make_normal(std::uint64_t seed, std::uint64_t stream = 0) {
    return NormalSampler(make_rng(seed, stream));
}

// Stream tags used by the simulators so independent noises never share a stream.
namespace streams {
inline constexpr std::uint64_t volatility = 1;
inline constexpr std::uint64_t price = 2;
inline constexpr std::uint64_t mixture = 3;
inline constexpr std::uint64_t market = 4;
inline constexpr std::uint64_t evolution = 5;
inline constexpr std::uint64_t book = 6;
inline constexpr std::uint64_t paths = 1000;  // per-path seeds start here
}  // namespace streams

/// Seed of path `index` inside an ensemble generated from `seed`.
constexpr std::uint64_t path_seed(std::uint64_t seed, std::uint64_t index) noexcept {
    return substream_key(seed, streams::paths + index);
}

}  // namespace fracvol
