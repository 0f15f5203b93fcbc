#pragma once

// Return distribution of the fractional volatility model: a lognormal
// mixture of Gaussians, its CDF, sampler and large-return asymptotics.

#include <boost/math/tools/minima.hpp>

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <numbers>
#include <utility>
#include <vector>

#include "fracvol/errors.hpp"
#include "fracvol/fgn.hpp"
#include "fracvol/model.hpp"
#include "fracvol/numerics.hpp"
#include "fracvol/random.hpp"

namespace fracvol {

struct ReturnDistParams {
    double beta = -5.0;
    double k = 0.59;
    double delta = 1.0;
    HurstExponent hurst{0.83};
    double mu = 0.0;
    double lag = 1.0;  // Δ = T − t

    static ReturnDistParams from_model(const ModelParams& m, double lag) {
        return {m.beta, m.k, m.delta, m.hurst, m.mu, lag};
    }

    void validate() const {
        detail::require(k >= 0.0, "ReturnDistParams: k must be non-negative");
        detail::require(delta > 0.0, "ReturnDistParams: delta must be positive");
        detail::require(lag > 0.0, "ReturnDistParams: lag must be positive");
        detail::require(std::isfinite(beta) && std::isfinite(mu), "ReturnDistParams: beta and mu must be finite");
    }

    double theta() const { return std::exp(beta); }
    double sigma_logvol() const { return k * std::pow(delta, hurst.value() - 1.0); }
    double C() const { return 8.0 * sigma_logvol() * sigma_logvol(); }
};

struct QuadratureOptions {
    int nodes = 256;
    double width = 8.0;  // truncation in standard deviations of log σ
};

namespace detail {

inline void check_quadrature(const QuadratureOptions& q) {
    if (q.nodes < 1) throw ParameterError("quadrature: node count must be positive");
    if (!(q.width > 0.0)) throw ParameterError("quadrature: width must be positive");
}

// log of the mixture integrand in u = log σ, up to a constant.
inline double log_mixture_integrand(double u, double r, const ReturnDistParams& p, double s) {
    const double var = std::exp(2.0 * u) * p.lag;
    const double m = (p.mu - 0.5 * std::exp(2.0 * u)) * p.lag;
    const double z = (u - p.beta) / s;
    return -0.5 * z * z - u - 0.5 * (r - m) * (r - m) / var;
}

// Integration range in u: β ± width·s, widened to cover the integrand peak
// when r lies far in a tail (the peak then moves to large σ).
inline std::pair<double, double> mixture_range(double r, const ReturnDistParams& p, double s, double width) {
    double lo = p.beta - width * s;
    double hi = p.beta + width * s;
    const auto [u_peak, neg_log] = boost::math::tools::brent_find_minima(
        [&](double u) { return -log_mixture_integrand(u, r, p, s); }, lo, p.beta + 6.0 * width * s, 52);
    (void)neg_log;
    lo = std::min(lo, u_peak - width * s);
    hi = std::max(hi, u_peak + width * s);
    return {lo, hi};
}

}  // namespace detail

/// P_δ(r) = ∫ p_δ(σ) p_σ(r) dσ, by Gauss–Legendre quadrature in log σ.
inline double pdf(double r, const ReturnDistParams& p, const QuadratureOptions& q = {}) {
    p.validate();
    detail::check_quadrature(q);
    const double s = p.sigma_logvol();
    if (s == 0.0) {
        const double sigma = p.theta();
        return gaussian_pdf(r, (p.mu - 0.5 * sigma * sigma) * p.lag, sigma * std::sqrt(p.lag));
    }
    const auto [lo, hi] = detail::mixture_range(r, p, s, q.width);
    const double sqrt_lag = std::sqrt(p.lag);
    return integrate_gl(
        [&](double u) {
            const double sigma = std::exp(u);
            return gaussian_pdf(u, p.beta, s) *
                   gaussian_pdf(r, (p.mu - 0.5 * sigma * sigma) * p.lag, sigma * sqrt_lag);
        },
        lo, hi, q.nodes);
}

/// P(return ≤ r). The upper half is computed through the survival function.
inline double cdf(double r, const ReturnDistParams& p, const QuadratureOptions& q = {}) {
    p.validate();
    detail::check_quadrature(q);
    const double s = p.sigma_logvol();
    const double sqrt_lag = std::sqrt(p.lag);
    auto conditional = [&](double sigma) { return (r - (p.mu - 0.5 * sigma * sigma) * p.lag) / (sigma * sqrt_lag); };
    if (s == 0.0) return normal_cdf(conditional(p.theta()));
    const double center = (p.mu - 0.5 * p.theta() * p.theta()) * p.lag;
    const bool upper = r > center;
    const auto [lo, hi] = detail::mixture_range(r, p, s, q.width);
    const double tail = integrate_gl(
        [&](double u) {
            const double z = conditional(std::exp(u));
            return gaussian_pdf(u, p.beta, s) * normal_cdf(upper ? -z : z);
        },
        lo, hi, q.nodes);
    // Mass of log σ outside [lo, hi] is below 1e-15 and ignored.
    return std::clamp(upper ? 1.0 - tail : tail, 0.0, 1.0);
}

/// Draws n returns: log σ ~ N(β, k²δ^{2H−2}), then r ~ N((μ − σ²/2)Δ, σ²Δ).
inline std::vector<double> sample_returns(const ReturnDistParams& p, std::size_t n, std::uint64_t seed) {
    p.validate();
    if (n < 1) throw ParameterError("sample_returns: n must be at least 1");
    NormalSampler normal = make_normal(seed, streams::mixture);
    const double s = p.sigma_logvol();
    const double sqrt_lag = std::sqrt(p.lag);
    std::vector<double> out(n);
    for (double& r : out) {
        const double sigma = std::exp(p.beta + s * normal());
        r = (p.mu - 0.5 * sigma * sigma) * p.lag + sigma * sqrt_lag * normal();
    }
    return out;
}

/// Conventions for the large-return form (Δλ)^{−1/2} exp(−log²λ / C).
struct TailConvention {
    /// Constant multiplying the asymptotic form; see fit_log_tail.
    double prefactor = 1.0;
    /// Volatility used in r₀ = (μ − σ²/2)Δ; non-positive means θ = e^β.
    double central_vol = 0.0;
};

/// λ = (r − r₀)² / (2Δθ²).
inline double tail_lambda(double r, const ReturnDistParams& p, const TailConvention& conv = {}) {
    const double theta = p.theta();
    const double vol = conv.central_vol > 0.0 ? conv.central_vol : theta;
    const double r0 = (p.mu - 0.5 * vol * vol) * p.lag;
    return (r - r0) * (r - r0) / (2.0 * p.lag * theta * theta);
}

inline double tail_asymptotic(double r, const ReturnDistParams& p, const TailConvention& conv = {}) {
    p.validate();
    const double lambda = tail_lambda(r, p, conv);
    if (!(lambda > 1.0))
        throw OutOfRegimeError("tail_asymptotic: lambda = " + std::to_string(lambda) + " is not in the large-return regime");
    const double c = p.C();
    if (c == 0.0) return 0.0;
    const double l = std::log(lambda);
    return conv.prefactor * std::exp(-l * l / c) / std::sqrt(p.lag * lambda);
}

/// Positive return r with the given λ (inverse of tail_lambda on the right branch).
inline double return_at_lambda(double lambda, const ReturnDistParams& p, const TailConvention& conv = {}) {
    const double theta = p.theta();
    const double vol = conv.central_vol > 0.0 ? conv.central_vol : theta;
    const double r0 = (p.mu - 0.5 * vol * vol) * p.lag;
    return r0 + theta * std::sqrt(2.0 * p.lag * lambda);
}

/// Comparison of the quadrature density with the asymptotic form on a
/// log-spaced λ grid in the right tail.
struct TailFit {
    /// −log pdf ≈ c0 + c1·log λ + c2·log²λ
    double c0 = 0.0, c1 = 0.0, c2 = 0.0;
    /// c2·C; equals 1 when the log²λ coefficient matches 1/C exactly.
    double coefficient_ratio = 0.0;
    /// Least-squares constant such that pdf ≈ prefactor·tail_asymptotic.
    double prefactor = 0.0;
    /// max/min of pdf/(prefactor·tail) over the grid.
    double ratio_spread = 0.0;
};

inline TailFit fit_log_tail(const ReturnDistParams& p, double lambda_lo, double lambda_hi, std::size_t points = 41,
                            const QuadratureOptions& q = {}, const TailConvention& conv = {}) {
    if (!(lambda_lo > 1.0 && lambda_hi > lambda_lo) || points < 4)
        throw ParameterError("fit_log_tail: need 1 < lambda_lo < lambda_hi and at least 4 points");
    std::vector<std::vector<double>> rows;
    std::vector<double> y, log_ratio;
    for (std::size_t i = 0; i < points; ++i) {
        const double l = std::log(lambda_lo) +
                         (std::log(lambda_hi) - std::log(lambda_lo)) * static_cast<double>(i) / static_cast<double>(points - 1);
        const double r = return_at_lambda(std::exp(l), p, conv);
        const double density = pdf(r, p, q);
        rows.push_back({1.0, l, l * l});
        y.push_back(-std::log(density));
        TailConvention unit = conv;
        unit.prefactor = 1.0;
        log_ratio.push_back(std::log(density) - std::log(tail_asymptotic(r, p, unit)));
    }
    const std::vector<double> c = least_squares(rows, y);
    TailFit fit;
    fit.c0 = c[0];
    fit.c1 = c[1];
    fit.c2 = c[2];
    fit.coefficient_ratio = c[2] * p.C();
    double mean_lr = 0.0;
    for (double v : log_ratio) mean_lr += v;
    mean_lr /= static_cast<double>(log_ratio.size());
    fit.prefactor = std::exp(mean_lr);
    double lo = std::numeric_limits<double>::infinity(), hi = -lo;
    for (double v : log_ratio) {
        lo = std::min(lo, v);
        hi = std::max(hi, v);
    }
    fit.ratio_spread = std::exp(hi - lo);
    return fit;
}

}  // namespace fracvol
