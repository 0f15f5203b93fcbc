#pragma once

// Fractional Gaussian noise and fractional Brownian motion with exact covariance.

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "fracvol/errors.hpp"
#include "fracvol/fft.hpp"
#include "fracvol/random.hpp"

namespace fracvol {

/// Hurst exponent, 0 < H <= 1.
class HurstExponent {
public:
    explicit HurstExponent(double value) : value_(value) {
        if (!(value > 0.0 && value <= 1.0))
            throw ParameterError("Hurst exponent must lie in (0, 1], got " + std::to_string(value));
    }
    double value() const { return value_; }
    operator double() const { return value_; }

private:
    double value_;
};

struct FgnSeries {
    std::vector<double> values;
    double spacing = 1.0;
    HurstExponent hurst{0.5};
    std::uint64_t seed = 0;
};

struct FbmSeries {
    std::vector<double> values;  // values[0] == 0
    double spacing = 1.0;
    HurstExponent hurst{0.5};
};

/// Cov(B_H(s), B_H(t)) = ½(|t|^{2H} + |s|^{2H} − |t−s|^{2H}).
inline double fbm_covariance(double s, double t, HurstExponent hurst) {
    if (!std::isfinite(s) || !std::isfinite(t)) throw ParameterError("fbm_covariance: times must be finite");
    const double h2 = 2.0 * hurst.value();
    return 0.5 * (std::pow(std::abs(t), h2) + std::pow(std::abs(s), h2) - std::pow(std::abs(t - s), h2));
}

/// Autocovariance of increments of B_H taken at the given spacing.
inline double fgn_autocovariance(std::size_t lag, HurstExponent hurst, double spacing = 1.0) {
    if (!(spacing > 0.0)) throw ParameterError("fgn_autocovariance: spacing must be positive");
    const double h2 = 2.0 * hurst.value();
    const double k = static_cast<double>(lag);
    const double core = lag == 0 ? 1.0
                                 : 0.5 * (std::pow(k + 1.0, h2) - 2.0 * std::pow(k, h2) + std::pow(k - 1.0, h2));
    return std::pow(spacing, h2) * core;
}

enum class FgnMethod {
    automatic,        // circulant embedding, Durbin–Levinson if the embedding is not PSD
    circulant,        // circulant embedding only; fails on a negative eigenvalue
    durbin_levinson,  // sequential conditional Gaussian recursion, O(n²)
};

namespace detail {

/// Eigenvalues of the minimal power-of-two circulant embedding of the fGn
/// covariance for n samples, or an empty vector when one is negative.
inline std::vector<double> circulant_eigenvalues(std::size_t n, HurstExponent hurst, std::size_t& m) {
    m = 2;
    while (m < 2 * (n - 1)) m <<= 1;
    ComplexBuffer c(m);
    for (std::size_t j = 0; j <= m / 2; ++j) c.re(j) = fgn_autocovariance(j, hurst);
    for (std::size_t j = m / 2 + 1; j < m; ++j) c.re(j) = c.re(m - j);
    fft_inplace(c, FFTW_FORWARD);
    std::vector<double> lambda(m);
    double largest = 0.0;
    for (std::size_t j = 0; j < m; ++j) largest = std::max(largest, std::abs(c.re(j)));
    for (std::size_t j = 0; j < m; ++j) {
        const double v = c.re(j);
        if (v < -1e-12 * largest) return {};
        lambda[j] = std::max(v, 0.0);
    }
    return lambda;
}

inline std::vector<double> fgn_circulant(std::size_t n, HurstExponent hurst, NormalSampler& normal) {
    std::size_t m = 0;
    const std::vector<double> lambda = circulant_eigenvalues(n, hurst, m);
    if (lambda.empty()) return {};
    ComplexBuffer w(m);
    const double md = static_cast<double>(m);
    for (std::size_t j = 0; j < m; ++j) {
        const double scale = std::sqrt(lambda[j] / md);
        w.re(j) = scale * normal();
        w.im(j) = scale * normal();
    }
    fft_inplace(w, FFTW_FORWARD);
    std::vector<double> out(n);
    for (std::size_t i = 0; i < n; ++i) out[i] = w.re(i);
    return out;
}

inline std::vector<double> fgn_durbin_levinson(std::size_t n, HurstExponent hurst, NormalSampler& normal) {
    std::vector<double> gamma(n);
    for (std::size_t k = 0; k < n; ++k) gamma[k] = fgn_autocovariance(k, hurst);
    std::vector<double> out(n), phi, prev;
    double v = gamma[0];
    out[0] = std::sqrt(v) * normal();
    phi.reserve(n);
    prev.reserve(n);
    for (std::size_t t = 1; t < n; ++t) {
        // phi_{t,t} from the Levinson recursion on the Toeplitz system.
        double num = gamma[t];
        for (std::size_t j = 0; j + 1 < t; ++j) num -= phi[j] * gamma[t - 1 - j];
        const double reflection = num / v;
        prev = phi;
        phi.resize(t);
        for (std::size_t j = 0; j + 1 < t; ++j) phi[j] = prev[j] - reflection * prev[t - 2 - j];
        phi[t - 1] = reflection;
        v *= (1.0 - reflection * reflection);
        if (!(v > 0.0) || !std::isfinite(v))
            throw GenerationError("durbin-levinson: innovation variance became non-positive at step " +
                                  std::to_string(t));
        double mean = 0.0;
        for (std::size_t j = 0; j < t; ++j) mean += phi[j] * out[t - 1 - j];
        out[t] = mean + std::sqrt(v) * normal();
    }
    return out;
}

}  // namespace detail

/// Draws n samples of fractional Gaussian noise at `spacing` with Hurst exponent H.
inline FgnSeries generate_fgn(std::size_t n, HurstExponent hurst, double spacing, std::uint64_t seed,
                              FgnMethod method = FgnMethod::automatic) {
    if (n == 0) throw GenerationError("generate_fgn: empty request (n = 0)");
    if (!(spacing > 0.0)) throw ParameterError("generate_fgn: spacing must be positive");
    NormalSampler normal = make_normal(seed, streams::volatility);
    FgnSeries series{{}, spacing, hurst, seed};
    const double scale = std::pow(spacing, hurst.value());

    if (hurst.value() == 1.0) {
        // Perfectly correlated increments: every sample is the same draw.
        series.values.assign(n, scale * normal());
        return series;
    }
    if (n == 1) {
        series.values = {scale * normal()};
        return series;
    }

    std::vector<double> unit;
    if (method != FgnMethod::durbin_levinson) {
        unit = detail::fgn_circulant(n, hurst, normal);
        if (unit.empty() && method == FgnMethod::circulant)
            throw GenerationError("circulant embedding: covariance embedding has a negative eigenvalue");
    }
    if (unit.empty()) unit = detail::fgn_durbin_levinson(n, hurst, normal);
    for (double& x : unit) x *= scale;
    series.values = std::move(unit);
    return series;
}

/// Cumulative sum of the noise, same length as the input: values[i] = Σ_{j<i} noise[j].
/// The total of all increments is not part of the output (see fbm_endpoint).
inline FbmSeries fbm_from_fgn(const FgnSeries& noise) {
    if (noise.values.empty()) throw ParameterError("fbm_from_fgn: empty noise series");
    FbmSeries path{std::vector<double>(noise.values.size()), noise.spacing, noise.hurst};
    double acc = 0.0;
    for (std::size_t i = 1; i < noise.values.size(); ++i) {
        acc += noise.values[i - 1];
        path.values[i] = acc;
    }
    return path;
}

/// Value of the path after all increments (the sum dropped by fbm_from_fgn).
inline double fbm_endpoint(const FgnSeries& noise) {
    double acc = 0.0;
    for (double x : noise.values) acc += x;
    return acc;
}

/// Differences of the path, with the endpoint supplied to recover the last increment.
inline std::vector<double> fgn_from_fbm(const FbmSeries& path, double endpoint) {
    std::vector<double> out(path.values.size());
    for (std::size_t i = 0; i + 1 < path.values.size(); ++i) out[i] = path.values[i + 1] - path.values[i];
    out.back() = endpoint - path.values.back();
    return out;
}

}  // namespace fracvol
