#pragma once

// Strategy-agent market: value investors and trend followers trading through
// a nonlinear market-impact function, with optional strategy evolution.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <map>
#include <numeric>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "fracvol/errors.hpp"
#include "fracvol/estimation.hpp"
#include "fracvol/model.hpp"
#include "fracvol/random.hpp"
#include "fracvol/stats.hpp"

namespace fracvol::abm {

/// Response to the four information states (misprice sign × trend sign);
/// each entry is −1 (sell), 0 (hold) or 1 (buy).
struct Strategy {
    std::array<int, 4> entries{0, 0, 0, 0};

    friend bool operator==(const Strategy&, const Strategy&) = default;
};

inline constexpr int kStrategyCount = 81;
inline constexpr int kFundamental = 72;     // (1, 1, −1, −1)
inline constexpr int kTrendFollowing = 60;  // (1, −1, 1, −1)

/// n = Σ_{k=0}^{3} 3^k (α_{3−k} + 1); the first component is the most significant digit.
inline int strategy_code(const Strategy& s) {
    int code = 0;
    for (int entry : s.entries) {
        if (entry < -1 || entry > 1)
            throw ParameterError("strategy_code: entry " + std::to_string(entry) + " not in {-1, 0, 1}");
        code = 3 * code + (entry + 1);
    }
    return code;
}

inline Strategy strategy_decode(int code) {
    if (code < 0 || code >= kStrategyCount) throw ParameterError("strategy_decode: code must lie in [0, 80]");
    Strategy s;
    for (int i = 3; i >= 0; --i) {
        s.entries[static_cast<std::size_t>(i)] = code % 3 - 1;
        code /= 3;
    }
    return s;
}

enum class SignalKind { step, logistic };

/// Non-decreasing f with f(−∞) = 0, f(∞) = 1: the step θ(x) with θ(0) = 1,
/// or the logistic 1/(1 + e^{−βx}).
struct SignalShape {
    SignalKind kind = SignalKind::logistic;
    double beta = 1.0;

    double operator()(double x) const {
        if (kind == SignalKind::step) return x >= 0.0 ? 1.0 : 0.0;
        return 1.0 / (1.0 + std::exp(-beta * x));
    }
};

/// γ = (f(m)f(t), f(m)(1−f(t)), (1−f(m))f(t), (1−f(m))(1−f(t))) for misprice m and trend t.
inline std::array<double, 4> info_vector(double misprice, double trend, const SignalShape& f) {
    const double fm = f(misprice), ft = f(trend);
    return {fm * ft, fm * (1.0 - ft), (1.0 - fm) * ft, (1.0 - fm) * (1.0 - ft)};
}

struct ImpactParams {
    double lambda0 = 1.0;
    double lambda1 = 0.0;
    double exponent = 0.5;

    void validate() const {
        detail::require(lambda0 > 0.0, "ImpactParams: lambda0 must be positive");
        detail::require(lambda1 >= 0.0, "ImpactParams: lambda1 must be non-negative");
        detail::require(exponent > 0.0 && exponent <= 1.0, "ImpactParams: exponent must lie in (0, 1]");
    }
};

/// Log-price change caused by aggregate order ω: ω / (λ₀ + λ₁|ω|^α).
inline double market_impact(double omega, const ImpactParams& p) {
    return omega / (p.lambda0 + p.lambda1 * std::pow(std::abs(omega), p.exponent));
}

struct AgentState {
    double cash = 0.0;
    double stock = 0.0;
    Strategy strategy{};
    double wealth0 = 0.0;     // m₀ + p₀ s₀
    double checkpoint = 0.0;  // wealth at the last evolution round

    double wealth(double price) const { return cash + price * stock; }
    /// Δ = (m + p s) − (m₀ + p₀ s₀)
    double payoff(double price) const { return wealth(price) - wealth0; }
};

struct MarketEnv {
    double z = 0.0;       // log price
    double z_prev = 0.0;  // previous log price
    double xi = 0.0;      // log perceived value
    ImpactParams impact{};
    double noise_sigma = 0.0;       // sd of η_t
    double value_walk_sigma = 0.0;  // sd of the ξ random-walk step
    SignalShape f{};
    double unit_investment = 1.0;

    double price() const { return std::exp(z); }
};

struct StepResult {
    double omega = 0.0;
    double price = 0.0;
    std::array<double, 4> gamma{};
};

/// One trading round. Orders ω_i = unit·(α_i·γ) are summed in agent order,
/// the log price moves by market_impact(Σω) + η, the value walks, and every
/// order settles at the post-impact price.
inline StepResult step(MarketEnv& env, std::vector<AgentState>& agents, NormalSampler& normal) {
    if (agents.empty()) throw ParameterError("abm::step: empty population");
    env.impact.validate();
    StepResult res;
    res.gamma = info_vector(env.xi - env.z, env.z - env.z_prev, env.f);
    std::vector<double> orders(agents.size());
    for (std::size_t i = 0; i < agents.size(); ++i) {
        const auto& a = agents[i].strategy.entries;
        double dot = 0.0;
        for (std::size_t c = 0; c < 4; ++c) dot += a[c] * res.gamma[c];
        orders[i] = env.unit_investment * dot;
        res.omega += orders[i];
    }
    const double eta = env.noise_sigma * normal();
    const double walk = env.value_walk_sigma * normal();
    env.z_prev = env.z;
    env.z += market_impact(res.omega, env.impact) + eta;
    env.xi += walk;
    res.price = env.price();
    for (std::size_t i = 0; i < agents.size(); ++i) {
        agents[i].cash -= orders[i];
        agents[i].stock += orders[i] / res.price;
    }
    return res;
}

enum class Selection {
    worst,   // the `copiers` lowest performers copy
    random,  // `copiers` agents chosen uniformly at random copy
};

struct EvolutionParams {
    std::size_t period = 100;
    std::size_t copiers = 5;
    double mutation_prob = 0.05;
    Selection selection = Selection::worst;
};

/// Strategy evolution round. Performance is the wealth change since the
/// previous round. Selected agents adopt the strategy of a uniformly chosen
/// agent among the `copiers` best performers; each copy then mutates with
/// probability mutation_prob (one uniformly chosen entry redrawn uniformly
/// from {−1, 0, 1}).
inline void evolve(std::vector<AgentState>& agents, const EvolutionParams& evo, double price, Rng& rng) {
    const std::size_t n = agents.size();
    if (evo.copiers > n) throw ParameterError("abm::evolve: copiers exceed population size");
    if (!(evo.mutation_prob >= 0.0 && evo.mutation_prob <= 1.0))
        throw ParameterError("abm::evolve: mutation_prob must lie in [0, 1]");
    std::vector<double> perf(n);
    for (std::size_t i = 0; i < n; ++i) perf[i] = agents[i].wealth(price) - agents[i].checkpoint;
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(), [&](std::size_t x, std::size_t y) { return perf[x] > perf[y]; });

    std::vector<std::size_t> chosen;
    if (evo.selection == Selection::worst) {
        chosen.assign(order.end() - static_cast<std::ptrdiff_t>(evo.copiers), order.end());
    } else {
        std::vector<std::size_t> idx(n);
        std::iota(idx.begin(), idx.end(), std::size_t{0});
        for (std::size_t i = 0; i < evo.copiers; ++i) {
            std::uniform_int_distribution<std::size_t> pick(i, n - 1);
            std::swap(idx[i], idx[pick(rng)]);
        }
        chosen.assign(idx.begin(), idx.begin() + static_cast<std::ptrdiff_t>(evo.copiers));
    }

    std::vector<Strategy> snapshot(n);
    for (std::size_t i = 0; i < n; ++i) snapshot[i] = agents[i].strategy;
    std::uniform_int_distribution<std::size_t> pick_best(0, evo.copiers == 0 ? 0 : evo.copiers - 1);
    std::uniform_int_distribution<std::size_t> pick_entry(0, 3);
    std::uniform_int_distribution<int> pick_value(-1, 1);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    for (std::size_t target : chosen) {
        Strategy s = snapshot[order[pick_best(rng)]];
        if (unit(rng) < evo.mutation_prob) s.entries[pick_entry(rng)] = pick_value(rng);
        agents[target].strategy = s;
    }
    for (auto& a : agents) a.checkpoint = a.wealth(price);
}

struct AbmConfig {
    /// (strategy code, number of agents)
    std::vector<std::pair<int, std::size_t>> population{{kFundamental, 50}, {kTrendFollowing, 50}};
    ImpactParams impact{1000.0, 10.0, 0.5};
    double noise_sigma = 0.01;
    double value_walk_sigma = 0.001;
    SignalShape f{SignalKind::logistic, 10.0};
    double unit_investment = 1.0;
    double initial_price = 1.0;
    double initial_cash = 0.0;
    double initial_stock = 0.0;
    std::size_t steps = 1 << 15;
    std::uint64_t seed = 1;
    std::optional<EvolutionParams> evolution{};
    EstimationOptions estimation{.window = 21, .stride = 21};
    /// Skip the estimation pipeline (path and statistics only).
    bool estimate = true;
};

struct AbmRun {
    MarketPath path;
    std::optional<EstimationReport> report;
    stats::Moments increments;  // of the log-price increments
    std::map<int, double> final_shares;
    std::vector<double> fundamental_share;  // share of strategy 72 after each evolution round
    std::vector<AgentState> agents;
};

inline std::vector<AgentState> make_population(const AbmConfig& cfg) {
    std::vector<AgentState> agents;
    for (const auto& [code, count] : cfg.population) {
        const Strategy s = strategy_decode(code);
        for (std::size_t i = 0; i < count; ++i) {
            AgentState a{cfg.initial_cash, cfg.initial_stock, s, 0.0, 0.0};
            a.wealth0 = a.checkpoint = a.wealth(cfg.initial_price);
            agents.push_back(a);
        }
    }
    if (agents.empty()) throw ParameterError("abm: empty population");
    return agents;
}

inline std::map<int, double> strategy_shares(const std::vector<AgentState>& agents) {
    std::map<int, double> shares;
    for (const auto& a : agents) shares[strategy_code(a.strategy)] += 1.0 / static_cast<double>(agents.size());
    return shares;
}

/// Runs the market for cfg.steps rounds and feeds the price path to the
/// estimation pipeline.
inline AbmRun run_experiment(const AbmConfig& cfg) {
    if (!(cfg.initial_price > 0.0)) throw ParameterError("abm: initial price must be positive");
    if (cfg.steps < 1) throw ParameterError("abm: steps must be at least 1");
    AbmRun run;
    run.agents = make_population(cfg);
    if (cfg.evolution && cfg.evolution->period < 1) throw ParameterError("abm: evolution period must be at least 1");

    MarketEnv env;
    env.z = env.z_prev = env.xi = std::log(cfg.initial_price);
    env.impact = cfg.impact;
    env.noise_sigma = cfg.noise_sigma;
    env.value_walk_sigma = cfg.value_walk_sigma;
    env.f = cfg.f;
    env.unit_investment = cfg.unit_investment;

    NormalSampler normal = make_normal(cfg.seed, streams::market);
    Rng evo_rng = make_rng(cfg.seed, streams::evolution);
    run.path.seed = cfg.seed;
    run.path.times.reserve(cfg.steps + 1);
    run.path.prices.reserve(cfg.steps + 1);
    run.path.times.push_back(0.0);
    run.path.prices.push_back(env.price());
    for (std::size_t t = 1; t <= cfg.steps; ++t) {
        const StepResult r = step(env, run.agents, normal);
        run.path.times.push_back(static_cast<double>(t));
        run.path.prices.push_back(r.price);
        if (cfg.evolution && t % cfg.evolution->period == 0) {
            evolve(run.agents, *cfg.evolution, r.price, evo_rng);
            run.fundamental_share.push_back(strategy_shares(run.agents)[kFundamental]);
        }
    }
    run.final_shares = strategy_shares(run.agents);
    const std::vector<double> inc = run.path.log_returns();
    run.increments = stats::moments(inc);
    if (cfg.estimate) run.report = estimate(run.path, cfg.estimation);
    return run;
}

}  // namespace fracvol::abm
