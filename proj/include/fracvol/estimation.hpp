#pragma once

// Volatility statistics reconstructed from a price series: induced volatility,
// integrated log-volatility decomposition, scaling exponent, leverage, ACF.

#include <cmath>
#include <cstddef>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "fracvol/errors.hpp"
#include "fracvol/model.hpp"
#include "fracvol/numerics.hpp"
#include "fracvol/stats.hpp"

namespace fracvol {

/// What "variance of log S over the window" is taken to mean.
enum class VarianceEstimator {
    /// Sum of squared log-price increments inside the window (realized variance).
    increments,
    /// Plain sample variance of the log-price levels inside the window.
    levels,
};

struct InducedVolOptions {
    VarianceEstimator estimator = VarianceEstimator::increments;
    /// Remove the window mean return (increments) or the fitted line (levels).
    bool detrend = false;
};

/// Sliding-window induced volatility σ_t² = var(log S)/|T1 − T0| with |T1 − T0| = window·dt.
///
/// Element i covers log_prices[i .. i+window] for the increments estimator
/// (window increments, n − window outputs) and log_prices[i .. i+window−1]
/// for the levels estimator (n − window + 1 outputs). Its center time is
/// (i + window/2)·dt in both cases.
inline std::vector<double> induced_volatility(std::span<const double> log_prices, std::size_t window, double dt,
                                              InducedVolOptions options = {}) {
    if (window < 8) throw ParameterError("induced_volatility: window must be at least 8 samples");
    if (!(dt > 0.0)) throw ParameterError("induced_volatility: dt must be positive");
    if (log_prices.size() <= window)
        throw InsufficientDataError("induced_volatility: series of length " + std::to_string(log_prices.size()) +
                                    " is not longer than the window " + std::to_string(window));
    const double span_time = static_cast<double>(window) * dt;
    const double w = static_cast<double>(window);
    std::vector<double> out;

    if (options.estimator == VarianceEstimator::increments) {
        out.resize(log_prices.size() - window);
        for (std::size_t i = 0; i < out.size(); ++i) {
            double sum = 0.0, sum2 = 0.0;
            for (std::size_t j = i; j < i + window; ++j) {
                const double r = log_prices[j + 1] - log_prices[j];
                sum += r;
                sum2 += r * r;
            }
            double var = sum2 / span_time;
            if (options.detrend) var = std::max(0.0, sum2 - sum * sum / w) / ((w - 1.0) * dt);
            out[i] = std::sqrt(var);
        }
        return out;
    }

    out.resize(log_prices.size() - window + 1);
    const double tbar = 0.5 * (w - 1.0);
    const double stt = w * (w * w - 1.0) / 12.0;  // Σ (j − tbar)²
    for (std::size_t i = 0; i < out.size(); ++i) {
        // Deviations from the window's first value keep a flat window exactly zero.
        const double anchor = log_prices[i];
        double mean = 0.0;
        for (std::size_t j = 0; j < window; ++j) mean += log_prices[i + j] - anchor;
        mean /= w;
        double ss = 0.0, sty = 0.0;
        for (std::size_t j = 0; j < window; ++j) {
            const double d = (log_prices[i + j] - anchor) - mean;
            ss += d * d;
            sty += (static_cast<double>(j) - tbar) * d;
        }
        if (options.detrend) ss = std::max(0.0, ss - sty * sty / stt);
        out[i] = std::sqrt(ss / w / span_time);
    }
    return out;
}

/// Every `stride`-th element starting at `offset`.
inline std::vector<double> subsample(std::span<const double> x, std::size_t stride, std::size_t offset = 0) {
    if (stride < 1) throw ParameterError("subsample: stride must be at least 1");
    std::vector<double> out;
    for (std::size_t i = offset; i < x.size(); i += stride) out.push_back(x[i]);
    return out;
}

struct LogVolDecomposition {
    double beta_hat = 0.0;   // slope per δ-step
    double intercept = 0.0;  // OLS intercept, so that r_sigma has zero mean
    std::vector<double> cumulative;
    std::vector<double> r_sigma;
    double delta = 1.0;

    /// Time (in units of the observation scale) of element n: (n + 1)·δ.
    double time(std::size_t n) const { return static_cast<double>(n + 1) * delta; }
};

/// Splits Σ_{n≤t/δ} log σ(nδ) into a linear trend and the residual R_σ.
/// The trend is fitted by OLS with intercept; t counts δ-steps, so
/// cumulative[n] = intercept + beta_hat·(n+1) + r_sigma[n].
inline LogVolDecomposition integrated_logvol_decompose(std::span<const double> vol, double delta = 1.0) {
    if (!(delta > 0.0)) throw ParameterError("integrated_logvol_decompose: delta must be positive");
    if (vol.size() < 3) throw InsufficientDataError("integrated_logvol_decompose: need at least 3 volatility values");
    LogVolDecomposition out;
    out.delta = delta;
    out.cumulative.resize(vol.size());
    KahanSum acc;
    for (std::size_t i = 0; i < vol.size(); ++i) {
        if (!(vol[i] > 0.0))
            throw ParameterError("integrated_logvol_decompose: non-positive volatility at index " + std::to_string(i));
        acc.add(std::log(vol[i]));
        out.cumulative[i] = acc.value();
    }
    std::vector<double> t(vol.size());
    for (std::size_t i = 0; i < t.size(); ++i) t[i] = static_cast<double>(i + 1);
    const LinearFit fit = fit_line(t, out.cumulative);
    out.beta_hat = fit.slope;
    out.intercept = fit.intercept;
    out.r_sigma.resize(vol.size());
    for (std::size_t i = 0; i < t.size(); ++i) out.r_sigma[i] = out.cumulative[i] - fit.intercept - fit.slope * t[i];
    return out;
}

/// Powers of two from 1 up to length/64.
inline std::vector<std::size_t> default_scaling_lags(std::size_t length) {
    std::vector<std::size_t> lags;
    for (std::size_t lag = 1; lag <= length / 64; lag <<= 1) lags.push_back(lag);
    return lags;
}

struct ScalingFit {
    double hurst = 0.0;
    double std_error = 0.0;
    std::vector<std::size_t> lags;
    std::vector<double> mean_abs_increment;  // E|R(t+Δ) − R(t)| per lag, time-averaged
};

/// Slope of log E|R(t+Δ) − R(t)| against log Δ.
inline ScalingFit scaling_exponent(std::span<const double> r_sigma, std::span<const std::size_t> lags) {
    ScalingFit out;
    std::vector<double> lx, ly;
    for (std::size_t lag : lags) {
        if (lag < 1 || lag >= r_sigma.size()) continue;
        KahanSum s;
        for (std::size_t t = 0; t + lag < r_sigma.size(); ++t) s.add(std::abs(r_sigma[t + lag] - r_sigma[t]));
        const double m = s.value() / static_cast<double>(r_sigma.size() - lag);
        if (!(m > 0.0)) continue;
        bool duplicate = false;
        for (std::size_t l : out.lags) duplicate = duplicate || l == lag;
        if (duplicate) continue;
        out.lags.push_back(lag);
        out.mean_abs_increment.push_back(m);
        lx.push_back(std::log(static_cast<double>(lag)));
        ly.push_back(std::log(m));
    }
    if (out.lags.size() < 4)
        throw InsufficientDataError("scaling_exponent: only " + std::to_string(out.lags.size()) +
                                    " usable lags, need at least 4");
    const LinearFit fit = fit_line(lx, ly);
    out.hurst = fit.slope;
    out.std_error = fit.slope_stderr;
    return out;
}

inline ScalingFit scaling_exponent(std::span<const double> r_sigma) {
    const auto lags = default_scaling_lags(r_sigma.size());
    return scaling_exponent(r_sigma, lags);
}

struct LeveragePoint {
    long lag = 0;
    double value = 0.0;
    double std_error = 0.0;
};

namespace detail {

// L(τ) on one series, plus its i.i.d.-approximation standard error.
inline std::pair<double, double> leverage_one(std::span<const double> r, long tau) {
    const std::size_t shift = static_cast<std::size_t>(tau < 0 ? -tau : tau);
    const std::size_t n = r.size() - shift;
    // pairs (a, b) = (r(t+τ)², r(t))
    auto a_at = [&](std::size_t i) {
        const double x = tau >= 0 ? r[i + shift] : r[i];
        return x * x;
    };
    auto b_at = [&](std::size_t i) { return tau >= 0 ? r[i] : r[i + shift]; };
    KahanSum sa, sb;
    for (std::size_t i = 0; i < n; ++i) {
        sa.add(a_at(i));
        sb.add(b_at(i));
    }
    const double ma = sa.value() / static_cast<double>(n);
    const double mb = sb.value() / static_cast<double>(n);
    KahanSum sc, sc2;
    for (std::size_t i = 0; i < n; ++i) {
        const double c = (a_at(i) - ma) * (b_at(i) - mb);
        sc.add(c);
        sc2.add(c * c);
    }
    const double l = sc.value() / static_cast<double>(n);
    const double var = std::max(0.0, sc2.value() / static_cast<double>(n) - l * l);
    return {l, std::sqrt(var / static_cast<double>(n))};
}

}  // namespace detail

/// Leverage L(τ) = ⟨r(t+τ)² r(t)⟩ − ⟨r(t+τ)²⟩⟨r(t)⟩ for τ in [−max_lag, max_lag].
/// With several paths the averages ⟨·⟩ are pooled over the ensemble, so no
/// per-path demeaning bias enters, and the standard error is the delta-method
/// spread across paths. With one path the error is the i.i.d. approximation.
/// `normalized` divides by ⟨r²⟩².
inline std::vector<LeveragePoint> leverage(std::span<const std::vector<double>> paths, std::size_t max_lag,
                                           bool normalized = false) {
    if (paths.empty()) throw InsufficientDataError("leverage: no return series");
    for (const auto& r : paths)
        if (r.size() <= 2 * max_lag)
            throw InsufficientDataError("leverage: series length must exceed 2*max_lag");
    const long ml = static_cast<long>(max_lag);
    std::vector<LeveragePoint> out;

    if (paths.size() == 1) {
        double norm = 1.0;
        if (normalized) {
            KahanSum s;
            for (double x : paths[0]) s.add(x * x);
            const double m2 = s.value() / static_cast<double>(paths[0].size());
            norm = m2 > 0.0 ? 1.0 / (m2 * m2) : 0.0;
        }
        for (long tau = -ml; tau <= ml; ++tau) {
            const auto [l, se] = detail::leverage_one(paths[0], tau);
            out.push_back({tau, l * norm, se * norm});
        }
        return out;
    }

    double norm = 1.0;
    if (normalized) {
        KahanSum s;
        double count = 0.0;
        for (const auto& r : paths) {
            for (double x : r) s.add(x * x);
            count += static_cast<double>(r.size());
        }
        const double m2 = s.value() / count;
        norm = m2 > 0.0 ? 1.0 / (m2 * m2) : 0.0;
    }
    const std::size_t np = paths.size();
    std::vector<double> m_ab(np), m_a(np), m_b(np), weight(np);
    for (long tau = -ml; tau <= ml; ++tau) {
        const std::size_t shift = static_cast<std::size_t>(tau < 0 ? -tau : tau);
        double total = 0.0;
        for (std::size_t p = 0; p < np; ++p) {
            const auto& r = paths[p];
            const std::size_t n = r.size() - shift;
            KahanSum sab, sa, sb;
            for (std::size_t i = 0; i < n; ++i) {
                const double later = r[i + shift], earlier = r[i];
                const double a = tau >= 0 ? later * later : earlier * earlier;
                const double b = tau >= 0 ? earlier : later;
                sab.add(a * b);
                sa.add(a);
                sb.add(b);
            }
            const double dn = static_cast<double>(n);
            m_ab[p] = sab.value() / dn;
            m_a[p] = sa.value() / dn;
            m_b[p] = sb.value() / dn;
            weight[p] = dn;
            total += dn;
        }
        double mab = 0.0, ma = 0.0, mb = 0.0;
        for (std::size_t p = 0; p < np; ++p) {
            weight[p] /= total;
            mab += weight[p] * m_ab[p];
            ma += weight[p] * m_a[p];
            mb += weight[p] * m_b[p];
        }
        // Influence of each path on mab − ma·mb.
        double u_mean = 0.0;
        std::vector<double> u(np);
        for (std::size_t p = 0; p < np; ++p) {
            u[p] = m_ab[p] - mb * m_a[p] - ma * m_b[p];
            u_mean += weight[p] * u[p];
        }
        double var = 0.0;
        for (std::size_t p = 0; p < np; ++p) var += weight[p] * weight[p] * (u[p] - u_mean) * (u[p] - u_mean);
        var *= static_cast<double>(np) / static_cast<double>(np - 1);
        out.push_back({tau, (mab - ma * mb) * norm, std::sqrt(var) * norm});
    }
    return out;
}

inline std::vector<LeveragePoint> leverage(std::span<const double> returns, std::size_t max_lag,
                                           bool normalized = false) {
    const std::vector<std::vector<double>> one{std::vector<double>(returns.begin(), returns.end())};
    return leverage(one, max_lag, normalized);
}

/// Sample autocorrelation normalized by the lag-0 variance.
inline std::vector<std::pair<std::size_t, double>> autocorrelation(std::span<const double> x,
                                                                   std::span<const std::size_t> lags) {
    const std::size_t n = x.size();
    for (std::size_t lag : lags)
        if (2 * lag >= n) throw ParameterError("autocorrelation: lag " + std::to_string(lag) + " >= length/2");
    const double m = stats::mean(x);
    KahanSum s0;
    for (double v : x) s0.add((v - m) * (v - m));
    if (!(s0.value() > 0.0)) throw ParameterError("autocorrelation: series has zero variance");
    std::vector<std::pair<std::size_t, double>> out;
    for (std::size_t lag : lags) {
        KahanSum s;
        for (std::size_t t = 0; t + lag < n; ++t) s.add((x[t] - m) * (x[t + lag] - m));
        out.emplace_back(lag, s.value() / s0.value());
    }
    return out;
}

struct EstimationOptions {
    std::size_t window = 21;
    /// Samples between retained induced-volatility values (δ/dt).
    std::size_t stride = 1;
    InducedVolOptions induced{};
    std::size_t leverage_max_lag = 20;
    bool leverage_normalized = false;
    std::size_t acf_max_lag = 20;
    /// Empty: powers of two up to length/64.
    std::vector<std::size_t> scaling_lags{};
};

struct EstimationReport {
    std::vector<double> induced_vol;  // after subsampling at the observation scale
    double beta_hat = 0.0;
    double intercept = 0.0;
    std::vector<double> r_sigma;
    double hurst_hat = 0.0;
    double hurst_stderr = 0.0;
    std::vector<std::size_t> scaling_lags;
    std::vector<double> scaling_values;
    std::vector<LeveragePoint> leverage;
    std::vector<std::pair<std::size_t, double>> acf;
    double dt = 1.0;
    double delta = 1.0;
};

/// Full pipeline on one path: induced volatility → decomposition → scaling
/// exponent, plus leverage and autocorrelation of the log returns.
inline EstimationReport estimate(const MarketPath& path, const EstimationOptions& options = {}) {
    path.validate();
    if (path.size() < 3) throw InsufficientDataError("estimate: path too short");
    const double dt = path.times[1] - path.times[0];
    const std::vector<double> logp = path.log_prices();
    const std::vector<double> returns = path.log_returns();

    EstimationReport report;
    report.dt = dt;
    report.delta = dt * static_cast<double>(options.stride);
    report.induced_vol = subsample(induced_volatility(logp, options.window, dt, options.induced), options.stride);
    const LogVolDecomposition dec = integrated_logvol_decompose(report.induced_vol, report.delta);
    report.beta_hat = dec.beta_hat;
    report.intercept = dec.intercept;
    report.r_sigma = dec.r_sigma;
    const ScalingFit fit = options.scaling_lags.empty() ? scaling_exponent(dec.r_sigma)
                                                        : scaling_exponent(dec.r_sigma, options.scaling_lags);
    report.hurst_hat = fit.hurst;
    report.hurst_stderr = fit.std_error;
    report.scaling_lags = fit.lags;
    report.scaling_values = fit.mean_abs_increment;

    const std::size_t max_lag = std::min(options.leverage_max_lag, (returns.size() - 1) / 2);
    report.leverage = leverage(std::span<const double>(returns), max_lag, options.leverage_normalized);
    std::vector<std::size_t> acf_lags;
    for (std::size_t k = 1; k <= options.acf_max_lag && 2 * k < returns.size(); ++k) acf_lags.push_back(k);
    if (stats::variance(returns) > 0.0) report.acf = autocorrelation(returns, acf_lags);
    return report;
}

}  // namespace fracvol
