#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <functional>
#include <span>
#include <vector>

#include "fracvol/errors.hpp"
#include "fracvol/numerics.hpp"

namespace fracvol::stats {

inline double mean(std::span<const double> x) {
    if (x.empty()) throw InsufficientDataError("mean of an empty series");
    KahanSum s;
    for (double v : x) s.add(v);
    return s.value() / static_cast<double>(x.size());
}

/// Unbiased sample variance.
inline double variance(std::span<const double> x) {
    if (x.size() < 2) throw InsufficientDataError("variance needs at least two samples");
    const double m = mean(x);
    KahanSum s;
    for (double v : x) s.add((v - m) * (v - m));
    return s.value() / static_cast<double>(x.size() - 1);
}

struct Moments {
    double mean = 0.0;
    double variance = 0.0;
    double skewness = 0.0;
    double excess_kurtosis = 0.0;
    std::size_t n = 0;

    /// Large-sample standard errors under normality.
    double skewness_stderr() const { return std::sqrt(6.0 / static_cast<double>(n)); }
    double kurtosis_stderr() const { return std::sqrt(24.0 / static_cast<double>(n)); }
    double mean_stderr() const { return std::sqrt(variance / static_cast<double>(n)); }
};

inline Moments moments(std::span<const double> x) {
    if (x.size() < 4) throw InsufficientDataError("moments need at least four samples");
    Moments m;
    m.n = x.size();
    m.mean = mean(x);
    KahanSum s2, s3, s4;
    for (double v : x) {
        const double d = v - m.mean;
        const double d2 = d * d;
        s2.add(d2);
        s3.add(d2 * d);
        s4.add(d2 * d2);
    }
    const double n = static_cast<double>(x.size());
    const double m2 = s2.value() / n;
    m.variance = s2.value() / (n - 1.0);
    if (m2 > 0.0) {
        m.skewness = (s3.value() / n) / std::pow(m2, 1.5);
        m.excess_kurtosis = (s4.value() / n) / (m2 * m2) - 3.0;
    }
    return m;
}

/// First differences x[i+1] - x[i].
inline std::vector<double> diff(std::span<const double> x) {
    std::vector<double> d;
    if (x.size() < 2) return d;
    d.reserve(x.size() - 1);
    for (std::size_t i = 1; i < x.size(); ++i) d.push_back(x[i] - x[i - 1]);
    return d;
}

/// Kolmogorov–Smirnov distance between the empirical CDF of `samples` and `cdf`.
inline double ks_distance(std::vector<double> samples, const std::function<double(double)>& cdf) {
    if (samples.empty()) throw InsufficientDataError("KS distance of an empty sample");
    std::sort(samples.begin(), samples.end());
    const double n = static_cast<double>(samples.size());
    double d = 0.0;
    for (std::size_t i = 0; i < samples.size(); ++i) {
        const double f = cdf(samples[i]);
        d = std::max({d, std::abs(f - static_cast<double>(i) / n), std::abs(static_cast<double>(i + 1) / n - f)});
    }
    return d;
}

}  // namespace fracvol::stats
