#pragma once

// Risk-neutral option pricing under the fractional volatility model.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <numbers>
#include <optional>
#include <string>
#include <vector>

#include "fracvol/errors.hpp"
#include "fracvol/fgn.hpp"
#include "fracvol/fracvol_sim.hpp"
#include "fracvol/model.hpp"
#include "fracvol/numerics.hpp"
#include "fracvol/parallel.hpp"
#include "fracvol/random.hpp"
#include "fracvol/stats.hpp"

namespace fracvol {

struct OptionInputs {
    double spot = 1.0;
    double strike = 1.0;
    double rate = 0.0;
    double sigma = 0.2;  // current volatility σ_t
    double tau = 1.0;    // T − t

    void validate() const {
        detail::require(spot > 0.0, "OptionInputs: spot must be positive");
        detail::require(strike > 0.0, "OptionInputs: strike must be positive");
        detail::require(sigma > 0.0, "OptionInputs: sigma must be positive");
        detail::require(tau > 0.0, "OptionInputs: tau must be positive");
        detail::require(std::isfinite(rate), "OptionInputs: rate must be finite");
    }

    /// a = (log(S/K)/√τ + r√τ)/σ
    double a() const { return (std::log(spot / strike) / std::sqrt(tau) + rate * std::sqrt(tau)) / sigma; }
    /// b = σ√τ/2
    double b() const { return 0.5 * sigma * std::sqrt(tau); }
};

/// Dispersion α of the mean log-volatility over the option's life.
struct VolDispersion {
    double alpha = 0.0;

    /// α = k δ^{H−1}, the marginal standard deviation of log σ.
    static VolDispersion from_model(const ModelParams& m) { return {m.logvol_stddev()}; }
};

struct MFunctionOptions {
    int nodes = 512;
    double width = 8.0;  // integration range ±width·α in log x
};

namespace detail {

inline double m_integrand(double u, double alpha, double a, double b) {
    const double x = std::exp(u);
    const double c = a * x + b / x;
    return std::exp(-0.5 * u * u / (alpha * alpha) + u) * std::erfc(-c / std::numbers::sqrt2) / c;
}

}  // namespace detail

/// M(α, a, b) = (1/(4α))√(2/π) ∫₀^∞ dx e^{−log²x/(2α²)} erfc(−(ax + b/x)/√2) / (ax + b/x).
///
/// Integrated in u = log x. When a and b have opposite signs, ax + b/x
/// vanishes at u* = ½ log(−b/a); the integral is then taken as a principal
/// value by pairing Gauss–Legendre nodes symmetrically about u*, so the odd
/// 1/(ax + b/x) part cancels node by node. α = 0 returns the limit Φ(a+b)/(a+b).
inline double m_function(double alpha, double a, double b, const MFunctionOptions& opts = {}) {
    if (!(alpha >= 0.0)) throw ParameterError("m_function: alpha must be non-negative");
    if (opts.nodes < 2) throw ParameterError("m_function: need at least two nodes");
    if (a == 0.0 && b == 0.0) throw SingularIntegrandError("m_function: a = b = 0 makes ax + b/x vanish identically");
    if (alpha == 0.0) {
        const double c = a + b;
        if (c == 0.0)
            throw SingularIntegrandError("m_function: a + b = 0 at alpha = 0; use a small positive alpha instead");
        return normal_cdf(c) / c;
    }

    const double lo = -opts.width * alpha;
    const double hi = opts.width * alpha;
    auto f = [&](double u) { return detail::m_integrand(u, alpha, a, b); };
    double integral = 0.0;

    const bool crosses = (a > 0.0 && b < 0.0) || (a < 0.0 && b > 0.0);
    const double u_star = crosses ? 0.5 * std::log(-b / a) : 0.0;
    if (crosses && u_star > lo && u_star < hi) {
        // Keep the symmetric piece wide enough that its endpoints stay away from u*.
        const double h = std::max(std::min(u_star - lo, hi - u_star), 0.25 * alpha);
        integral += integrate_gl([&](double t) { return f(u_star + t) + f(u_star - t); }, 0.0, h, opts.nodes);
        if (u_star - h > lo) integral += integrate_gl(f, lo, u_star - h, opts.nodes);
        if (u_star + h < hi) integral += integrate_gl(f, u_star + h, hi, opts.nodes);
    } else {
        integral = integrate_gl(f, lo, hi, opts.nodes);
    }
    return integral * std::sqrt(2.0 / std::numbers::pi) / (4.0 * alpha);
}

/// Black–Scholes call with d₁ = a + b, d₂ = a − b.
inline double black_scholes(const OptionInputs& opt) {
    opt.validate();
    const double a = opt.a(), b = opt.b();
    return opt.spot * normal_cdf(a + b) - opt.strike * std::exp(-opt.rate * opt.tau) * normal_cdf(a - b);
}

inline double black_scholes_put(const OptionInputs& opt) {
    opt.validate();
    const double a = opt.a(), b = opt.b();
    return opt.strike * std::exp(-opt.rate * opt.tau) * normal_cdf(b - a) - opt.spot * normal_cdf(-a - b);
}

/// V = S[aM(α,a,b) + bM(α,b,a)] − K e^{−rτ}[aM(α,a,−b) − bM(α,−b,a)].
inline double price(const OptionInputs& opt, const VolDispersion& disp, const MFunctionOptions& mopts = {}) {
    opt.validate();
    if (!(disp.alpha >= 0.0)) throw ParameterError("price: dispersion alpha must be non-negative");
    if (disp.alpha == 0.0) return black_scholes(opt);
    const double a = opt.a(), b = opt.b(), alpha = disp.alpha;
    auto term = [&](double coeff, double x, double y) { return coeff == 0.0 ? 0.0 : coeff * m_function(alpha, x, y, mopts); };
    const double spot_leg = term(a, a, b) + term(b, b, a);
    const double strike_leg = term(a, a, -b) - term(b, -b, a);
    return opt.spot * spot_leg - opt.strike * std::exp(-opt.rate * opt.tau) * strike_leg;
}

/// σ with black_scholes(σ) = target, by bisection on [1e−8, 5].
inline double implied_vol(double target, OptionInputs opt) {
    opt.sigma = 1.0;
    opt.validate();
    const double lower = std::max(0.0, opt.spot - opt.strike * std::exp(-opt.rate * opt.tau));
    // Prices that round onto the intrinsic value are accepted and map to the bottom of the bracket.
    if (!(target >= lower - 1e-14 * opt.spot && target < opt.spot))
        throw NoSolutionError("implied_vol: target " + std::to_string(target) + " outside the no-arbitrage band (" +
                              std::to_string(lower) + ", " + std::to_string(opt.spot) + ")");
    double lo = 1e-8, hi = 5.0;
    auto bs = [&](double s) {
        opt.sigma = s;
        return black_scholes(opt);
    };
    if (target <= bs(lo)) return lo;
    if (target > bs(hi)) throw NoSolutionError("implied_vol: target needs a volatility above 5");
    for (int iter = 0; iter < 200 && hi - lo > 1e-15 * hi; ++iter) {
        const double mid = 0.5 * (lo + hi);
        const double v = bs(mid);
        if (v == target) return mid;
        (v < target ? lo : hi) = mid;
    }
    return 0.5 * (lo + hi);
}

struct SmilePoint {
    double moneyness = 0.0;  // S/K with K = 1
    double tau = 0.0;
    double price = 0.0;
    double implied_vol = 0.0;
    double delta_vs_bs = 0.0;  // (V − C_BS)/K
};

/// Default grids: S/K in [0.5, 1.5], τ in [5, 100].
inline std::vector<double> linear_grid(double lo, double hi, std::size_t n) {
    std::vector<double> g(n);
    for (std::size_t i = 0; i < n; ++i) g[i] = n == 1 ? lo : lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(n - 1);
    return g;
}

/// Price, implied volatility and deviation from Black–Scholes on a
/// moneyness × maturity grid (row-major, maturity outer).
inline std::vector<SmilePoint> smile_surface(const std::vector<double>& moneyness, const std::vector<double>& taus,
                                             const ModelParams& model, double sigma_t, double rate,
                                             std::optional<VolDispersion> disp = std::nullopt,
                                             const MFunctionOptions& mopts = {}) {
    model.validate();
    const VolDispersion d = disp.value_or(VolDispersion::from_model(model));
    std::vector<SmilePoint> out(moneyness.size() * taus.size());
    parallel_for(out.size(), [&](std::size_t idx) {
        const double tau = taus[idx / moneyness.size()];
        const double m = moneyness[idx % moneyness.size()];
        const OptionInputs opt{m, 1.0, rate, sigma_t, tau};
        SmilePoint pt{m, tau, price(opt, d, mopts), 0.0, 0.0};
        pt.delta_vs_bs = pt.price - black_scholes(opt);
        pt.implied_vol = implied_vol(pt.price, opt);
        out[idx] = pt;
    });
    return out;
}

/// Lognormal moment match of the average variance (1/n)Σσ_i² over a
/// maturity of n = τ/δ observation blocks, with the volatility process
/// started from its stationary law. Returns the central volatility and
/// dispersion that make price() reproduce the model's risk-neutral price.
struct EffectiveVolatility {
    double sigma = 0.0;
    double alpha = 0.0;
};

inline EffectiveVolatility effective_volatility(const ModelParams& model, double tau) {
    model.validate();
    const std::size_t n = detail::integer_ratio(tau, model.delta);
    if (n == 0) throw GridMismatchError("effective_volatility: tau must be a positive multiple of delta");
    const double v = model.logvol_stddev() * model.logvol_stddev();
    // E[V²]/E[V]² = (1/n²) Σ_ij exp(4 v ρ_ij)
    double acc = 0.0;
    for (std::size_t lag = 0; lag < n; ++lag) {
        const double rho = fgn_autocovariance(lag, model.hurst, 1.0);
        acc += (lag == 0 ? 1.0 : 2.0) * static_cast<double>(n - lag) * std::exp(4.0 * v * rho);
    }
    const double s2 = std::log(acc / (static_cast<double>(n) * static_cast<double>(n)));
    const double log_mean_var = 2.0 * model.beta + 2.0 * v;
    const double m = log_mean_var - 0.5 * s2;
    return {std::exp(0.5 * m), 0.5 * std::sqrt(s2)};
}

struct MonteCarloPrice {
    double price = 0.0;
    double std_error = 0.0;
};

/// Discounted call payoff averaged over paths of the model simulated with
/// μ = r and independent drivers, one observation block per step.
inline MonteCarloPrice monte_carlo_price(double spot, double strike, double rate, double tau, ModelParams model,
                                         std::size_t paths, std::uint64_t seed) {
    model.mu = rate;
    model.coupling = DriverCoupling::independent_drivers;
    const std::size_t n = detail::integer_ratio(tau, model.delta);
    if (n == 0) throw GridMismatchError("monte_carlo_price: tau must be a positive multiple of delta");
    if (paths < 2) throw ParameterError("monte_carlo_price: need at least two paths");
    std::vector<double> payoff(paths);
    const double discount = std::exp(-rate * tau);
    parallel_for(paths, [&](std::size_t i) {
        const MarketPath p = simulate_path(model, n, model.delta, spot, path_seed(seed, i));
        payoff[i] = discount * std::max(p.prices.back() - strike, 0.0);
    });
    return {stats::mean(payoff), std::sqrt(stats::variance(payoff) / static_cast<double>(paths))};
}

}  // namespace fracvol
