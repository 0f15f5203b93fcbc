#pragma once

#include <cmath>
#include <cstddef>
#include <map>
#include <memory>
#include <mutex>
#include <numbers>
#include <span>
#include <vector>

#include "fracvol/errors.hpp"

namespace fracvol {

inline double normal_pdf(double x) {
    return std::exp(-0.5 * x * x) / std::sqrt(2.0 * std::numbers::pi);
}

inline double normal_cdf(double x) { return 0.5 * std::erfc(-x / std::numbers::sqrt2); }

/// Gaussian density with mean m and standard deviation s.
inline double gaussian_pdf(double x, double m, double s) { return normal_pdf((x - m) / s) / s; }

/// Compensated (Neumaier) accumulator; the order of additions is the only
/// thing that can change the result, so fixed-order loops stay reproducible.
class KahanSum {
public:
    void add(double x) {
        const double t = sum_ + x;
        if (std::abs(sum_) >= std::abs(x))
            comp_ += (sum_ - t) + x;
        else
            comp_ += (x - t) + sum_;
        sum_ = t;
    }
    double value() const { return sum_ + comp_; }

private:
    double sum_ = 0.0;
    double comp_ = 0.0;
};

/// Gauss–Legendre rule on [-1, 1].
struct GaussLegendreRule {
    std::vector<double> nodes;
    std::vector<double> weights;
};

namespace detail {

inline GaussLegendreRule compute_gauss_legendre(int n) {
    GaussLegendreRule rule;
    rule.nodes.resize(static_cast<std::size_t>(n));
    rule.weights.resize(static_cast<std::size_t>(n));
    const int half = (n + 1) / 2;
    for (int i = 0; i < half; ++i) {
        double x = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
        double dp = 0.0;
        for (int iter = 0; iter < 100; ++iter) {
            double p0 = 1.0, p1 = x;
            for (int j = 2; j <= n; ++j) {
                const double p2 = ((2.0 * j - 1.0) * x * p1 - (j - 1.0) * p0) / j;
                p0 = p1;
                p1 = p2;
            }
            dp = n * (x * p1 - p0) / (x * x - 1.0);
            const double dx = p1 / dp;
            x -= dx;
            if (std::abs(dx) < 1e-16) break;
        }
        double p0 = 1.0, p1 = x;
        for (int j = 2; j <= n; ++j) {
            const double p2 = ((2.0 * j - 1.0) * x * p1 - (j - 1.0) * p0) / j;
            p0 = p1;
            p1 = p2;
        }
        dp = n * (x * p1 - p0) / (x * x - 1.0);
        const double w = 2.0 / ((1.0 - x * x) * dp * dp);
        const auto lo = static_cast<std::size_t>(i);
        const auto hi = static_cast<std::size_t>(n - 1 - i);
        rule.nodes[lo] = -x;
        rule.nodes[hi] = x;
        rule.weights[lo] = w;
        rule.weights[hi] = w;
    }
    if (n % 2 == 1) rule.nodes[static_cast<std::size_t>(n / 2)] = 0.0;
    return rule;
}

}  // namespace detail

/// Cached n-point Gauss–Legendre rule. Thread-safe.
inline const GaussLegendreRule& gauss_legendre(int n) {
    if (n < 1) throw ParameterError("Gauss-Legendre rule needs at least one node, got " + std::to_string(n));
    static std::mutex mutex;
    static std::map<int, std::unique_ptr<const GaussLegendreRule>> cache;
    std::lock_guard lock(mutex);
    auto& slot = cache[n];
    if (!slot) slot = std::make_unique<const GaussLegendreRule>(detail::compute_gauss_legendre(n));
    return *slot;
}

/// ∫_lo^hi f(x) dx with an n-point Gauss–Legendre rule.
template <class Fn>
double integrate_gl(Fn&& f, double lo, double hi, int n) {
    const auto& rule = gauss_legendre(n);
    const double half = 0.5 * (hi - lo);
    const double mid = 0.5 * (hi + lo);
    KahanSum acc;
    for (std::size_t i = 0; i < rule.nodes.size(); ++i) acc.add(rule.weights[i] * f(mid + half * rule.nodes[i]));
    return half * acc.value();
}

/// Ordinary least squares y = intercept + slope * x.
struct LinearFit {
    double intercept = 0.0;
    double slope = 0.0;
    double slope_stderr = 0.0;
    double residual_variance = 0.0;
};

inline LinearFit fit_line(std::span<const double> x, std::span<const double> y) {
    const std::size_t n = x.size();
    if (n < 2 || y.size() != n) throw InsufficientDataError("linear fit needs at least two paired points");
    KahanSum sx, sy;
    for (std::size_t i = 0; i < n; ++i) {
        sx.add(x[i]);
        sy.add(y[i]);
    }
    const double mx = sx.value() / static_cast<double>(n);
    const double my = sy.value() / static_cast<double>(n);
    KahanSum sxx, sxy;
    for (std::size_t i = 0; i < n; ++i) {
        sxx.add((x[i] - mx) * (x[i] - mx));
        sxy.add((x[i] - mx) * (y[i] - my));
    }
    if (sxx.value() <= 0.0) throw InsufficientDataError("linear fit needs at least two distinct abscissae");
    LinearFit fit;
    fit.slope = sxy.value() / sxx.value();
    fit.intercept = my - fit.slope * mx;
    KahanSum rss;
    for (std::size_t i = 0; i < n; ++i) {
        const double e = y[i] - fit.intercept - fit.slope * x[i];
        rss.add(e * e);
    }
    if (n > 2) {
        fit.residual_variance = rss.value() / static_cast<double>(n - 2);
        fit.slope_stderr = std::sqrt(fit.residual_variance / sxx.value());
    }
    return fit;
}

/// Least squares over an arbitrary design matrix (rows = observations),
/// solved by normal equations with Gaussian elimination. Small systems only.
inline std::vector<double> least_squares(const std::vector<std::vector<double>>& rows, std::span<const double> y) {
    const std::size_t p = rows.empty() ? 0 : rows.front().size();
    if (rows.size() < p || p == 0) throw InsufficientDataError("least squares: fewer observations than unknowns");
    std::vector<std::vector<double>> a(p, std::vector<double>(p + 1, 0.0));
    for (std::size_t r = 0; r < rows.size(); ++r)
        for (std::size_t i = 0; i < p; ++i) {
            for (std::size_t j = 0; j < p; ++j) a[i][j] += rows[r][i] * rows[r][j];
            a[i][p] += rows[r][i] * y[r];
        }
    for (std::size_t c = 0; c < p; ++c) {
        std::size_t piv = c;
        for (std::size_t r = c + 1; r < p; ++r)
            if (std::abs(a[r][c]) > std::abs(a[piv][c])) piv = r;
        std::swap(a[c], a[piv]);
        if (a[c][c] == 0.0) throw InsufficientDataError("least squares: singular design");
        for (std::size_t r = 0; r < p; ++r) {
            if (r == c) continue;
            const double f = a[r][c] / a[c][c];
            for (std::size_t j = c; j <= p; ++j) a[r][j] -= f * a[c][j];
        }
    }
    std::vector<double> beta(p);
    for (std::size_t i = 0; i < p; ++i) beta[i] = a[i][p] / a[i][i];
    return beta;
}

}  // namespace fracvol
