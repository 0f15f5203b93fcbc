#pragma once

#include <cmath>
#include <cstdint>
#include <string>
#include <vector>

#include "fracvol/errors.hpp"
#include "fracvol/fgn.hpp"

namespace fracvol {

enum class DriverCoupling {
    independent_drivers,  // price and volatility driven by different Brownian motions
    identified_drivers,   // the price driver is the volatility integrator
};

/// Parameters of the fractional volatility model
///   dS = μ S dt + σ S dB,  log σ_t = β + (k/δ)(B_H(t) − B_H(t−δ)).
struct ModelParams {
    double mu = 0.0;
    double beta = -5.0;
    double k = 0.59;
    double delta = 1.0;
    HurstExponent hurst{0.83};
    DriverCoupling coupling = DriverCoupling::independent_drivers;
    /// Amplitude of the moving-average kernel form. Its sign sets the sign of
    /// the leverage correlation when drivers are identified.
    double kprime = 0.0;

    void validate() const {
        detail::require(delta > 0.0, "ModelParams: delta must be positive");
        detail::require(k >= 0.0, "ModelParams: k must be non-negative");
        detail::require(std::isfinite(mu) && std::isfinite(beta) && std::isfinite(kprime),
                        "ModelParams: mu, beta and kprime must be finite");
    }

    /// Standard deviation of log σ_t: k δ^{H−1}.
    double logvol_stddev() const { return k * std::pow(delta, hurst.value() - 1.0); }
};

/// A price path with the log-volatility in force at each grid time.
struct MarketPath {
    std::vector<double> times;
    std::vector<double> prices;
    std::vector<double> logvol;
    std::uint64_t seed = 0;

    std::size_t size() const { return prices.size(); }

    std::vector<double> log_prices() const {
        std::vector<double> out(prices.size());
        for (std::size_t i = 0; i < prices.size(); ++i) out[i] = std::log(prices[i]);
        return out;
    }

    std::vector<double> log_returns() const {
        std::vector<double> out;
        if (prices.size() < 2) return out;
        out.reserve(prices.size() - 1);
        for (std::size_t i = 1; i < prices.size(); ++i) out.push_back(std::log(prices[i]) - std::log(prices[i - 1]));
        return out;
    }

    /// Throws unless prices are positive, times increase strictly and lengths agree.
    void validate() const {
        if (times.size() != prices.size() || (!logvol.empty() && logvol.size() != prices.size()))
            throw ParameterError("MarketPath: arrays must have equal length");
        for (std::size_t i = 0; i < prices.size(); ++i) {
            if (!(prices[i] > 0.0)) throw ParameterError("MarketPath: non-positive price at index " + std::to_string(i));
            if (i > 0 && !(times[i] > times[i - 1]))
                throw ParameterError("MarketPath: times not strictly increasing at index " + std::to_string(i));
        }
    }
};

}  // namespace fracvol
