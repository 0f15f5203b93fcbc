#pragma once

// Path simulation of the fractional volatility model.

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <utility>
#include <vector>

#include "fracvol/errors.hpp"
#include "fracvol/fft.hpp"
#include "fracvol/fgn.hpp"
#include "fracvol/model.hpp"
#include "fracvol/random.hpp"

namespace fracvol {

/// Mean and variance of log σ_t at a fixed time: (β, k² δ^{2H−2}).
inline std::pair<double, double> logvol_marginal_moments(const ModelParams& params) {
    params.validate();
    const double sd = params.logvol_stddev();
    return {params.beta, sd * sd};
}

namespace detail {

inline double checked_price(double log_s) {
    const double s = std::exp(log_s);
    if (!(s > 0.0) || !std::isfinite(s))
        throw Error("simulated price left the representable range (log price " + std::to_string(log_s) + ")");
    return s;
}

// Integer ratio a/b, or 0 when a/b is not an integer to 1e-9 relative.
inline std::size_t integer_ratio(double a, double b) {
    const double r = a / b;
    const double n = std::round(r);
    if (n < 1.0 || std::abs(r - n) > 1e-9 * n) return 0;
    return static_cast<std::size_t>(n);
}

}  // namespace detail

/// Simulates the fractional-noise form of the model on a grid of `n_steps`
/// steps of length dt. log σ is sampled every δ and held constant in between;
/// the price uses the exact log-Euler step given σ.
///
/// dt must divide δ, or be an integer multiple of it.
inline MarketPath simulate_path(const ModelParams& params, std::size_t n_steps, double dt, double s0,
                                std::uint64_t seed) {
    params.validate();
    if (params.coupling == DriverCoupling::identified_drivers)
        throw ParameterError("simulate_path: identified drivers need the kernel form (simulate_identified)");
    if (n_steps < 1) throw ParameterError("simulate_path: n_steps must be at least 1");
    if (!(dt > 0.0)) throw ParameterError("simulate_path: dt must be positive");
    if (!(s0 > 0.0)) throw ParameterError("simulate_path: initial price must be positive");

    // Fine grid: `sub` fine steps per price step, `per_block` fine steps per δ block.
    std::size_t sub = 1, per_block = 1;
    if (dt <= params.delta) {
        per_block = detail::integer_ratio(params.delta, dt);
        if (per_block == 0) throw GridMismatchError("simulate_path: delta/dt must be an integer when dt <= delta");
    } else {
        sub = detail::integer_ratio(dt, params.delta);
        if (sub == 0) throw GridMismatchError("simulate_path: dt/delta must be an integer when dt > delta");
    }
    const double h = dt / static_cast<double>(sub);
    const std::size_t fine_steps = n_steps * sub;
    const std::size_t blocks = fine_steps / per_block + 1;

    std::vector<double> logvol(blocks, params.beta);
    if (params.k > 0.0) {
        const FgnSeries noise = generate_fgn(blocks, params.hurst, params.delta, seed);
        const double scale = params.k / params.delta;
        for (std::size_t j = 0; j < blocks; ++j) logvol[j] += scale * noise.values[j];
    }

    NormalSampler normal = make_normal(seed, streams::price);
    MarketPath path;
    path.seed = seed;
    path.times.reserve(n_steps + 1);
    path.prices.reserve(n_steps + 1);
    path.logvol.reserve(n_steps + 1);

    double log_s = std::log(s0);
    const double sqrt_h = std::sqrt(h);
    path.times.push_back(0.0);
    path.prices.push_back(s0);
    path.logvol.push_back(logvol[0]);
    for (std::size_t i = 0; i < fine_steps; ++i) {
        const double lv = logvol[i / per_block];
        const double sigma = std::exp(lv);
        log_s += (params.mu - 0.5 * sigma * sigma) * h + sigma * sqrt_h * normal();
        if ((i + 1) % sub == 0) {
            const std::size_t step = (i + 1) / sub;
            path.times.push_back(static_cast<double>(step) * dt);
            path.prices.push_back(detail::checked_price(log_s));
            path.logvol.push_back(logvol[(i + 1) / per_block]);
        }
    }
    return path;
}

/// Kernel weights (j·dt)^{H−3/2}, j = 1..history.
inline std::vector<double> kernel_weights(HurstExponent hurst, double dt, std::size_t history) {
    std::vector<double> w(history);
    for (std::size_t j = 0; j < history; ++j) w[j] = std::pow(static_cast<double>(j + 1) * dt, hurst.value() - 1.5);
    return w;
}

/// |k′| that makes the stationary variance of the truncated kernel sum equal
/// k² δ^{2H−2}, the marginal variance of the fractional-noise form.
inline double calibrated_kprime(const ModelParams& params, double dt, std::size_t history) {
    params.validate();
    if (history < 1) throw ParameterError("calibrated_kprime: history must be at least 1");
    const std::vector<double> w = kernel_weights(params.hurst, dt, history);
    double ss = 0.0;
    for (double x : w) ss += x * x;
    return params.logvol_stddev() / std::sqrt(ss * dt);
}

/// Simulates the moving-average form log σ_t = β + k′ Σ_j (t − s_j)^{H−3/2} ΔB(s_j)
/// over the last `history` increments. With identified drivers the same ΔB
/// drives the price; otherwise an independent stream does. The first
/// `history` increments are a discarded burn-in.
inline MarketPath simulate_identified(const ModelParams& params, std::size_t n_steps, double dt, double s0,
                                      std::size_t history, std::uint64_t seed) {
    params.validate();
    if (n_steps < 1) throw ParameterError("simulate_identified: n_steps must be at least 1");
    if (history < 1) throw ParameterError("simulate_identified: history must be at least 1");
    if (!(dt > 0.0)) throw ParameterError("simulate_identified: dt must be positive");
    if (!(s0 > 0.0)) throw ParameterError("simulate_identified: initial price must be positive");

    const std::size_t total = history + n_steps + 1;
    const double sqrt_dt = std::sqrt(dt);
    std::vector<double> dB(total);
    {
        NormalSampler normal = make_normal(seed, streams::volatility);
        for (double& x : dB) x = sqrt_dt * normal();
    }

    // logvol[t] at absolute index history + t: causal convolution of dB with the kernel, via FFT.
    std::vector<double> logvol(n_steps + 1, params.beta);
    if (params.kprime != 0.0) {
        const std::vector<double> w = kernel_weights(params.hurst, dt, history);
        std::size_t m = 1;
        while (m < total + history) m <<= 1;
        detail::ComplexBuffer a(m), b(m);
        for (std::size_t i = 0; i < total; ++i) a.re(i) = dB[i];
        for (std::size_t j = 0; j < history; ++j) b.re(j + 1) = w[j];  // lag j+1 ↔ weight w[j]
        detail::fft_inplace(a, FFTW_FORWARD);
        detail::fft_inplace(b, FFTW_FORWARD);
        for (std::size_t i = 0; i < m; ++i) {
            const double re = a.re(i) * b.re(i) - a.im(i) * b.im(i);
            const double im = a.re(i) * b.im(i) + a.im(i) * b.re(i);
            a.re(i) = re;
            a.im(i) = im;
        }
        detail::fft_inplace(a, FFTW_BACKWARD);
        const double norm = 1.0 / static_cast<double>(m);
        for (std::size_t t = 0; t <= n_steps; ++t) logvol[t] += params.kprime * a.re(history + t) * norm;
    }

    std::vector<double> price_driver;
    if (params.coupling == DriverCoupling::independent_drivers) {
        NormalSampler normal = make_normal(seed, streams::price);
        price_driver.resize(n_steps);
        for (double& x : price_driver) x = sqrt_dt * normal();
    }

    MarketPath path;
    path.seed = seed;
    path.times.reserve(n_steps + 1);
    path.prices.reserve(n_steps + 1);
    path.logvol.reserve(n_steps + 1);
    double log_s = std::log(s0);
    path.times.push_back(0.0);
    path.prices.push_back(s0);
    path.logvol.push_back(logvol[0]);
    for (std::size_t t = 0; t < n_steps; ++t) {
        const double sigma = std::exp(logvol[t]);
        const double drive = params.coupling == DriverCoupling::identified_drivers ? dB[history + t] : price_driver[t];
        log_s += (params.mu - 0.5 * sigma * sigma) * dt + sigma * drive;
        path.times.push_back(static_cast<double>(t + 1) * dt);
        path.prices.push_back(detail::checked_price(log_s));
        path.logvol.push_back(logvol[t + 1]);
    }
    return path;
}

}  // namespace fracvol
