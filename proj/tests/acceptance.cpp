// Acceptance run: one PASS/FAIL line per criterion, followed by indented diagnostics.

#include <sys/wait.h>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <functional>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "fracvol/fracvol.hpp"
#include "lob_oracle.hpp"
#include "oracles.hpp"

using namespace fracvol;

namespace {

struct Outcome {
    bool pass = false;
    std::string summary;
    std::vector<std::string> notes;
};

std::string fmt(const char* f, auto... args) {
    char buf[512];
    std::snprintf(buf, sizeof buf, f, args...);
    return buf;
}

ModelParams reference_model() {
    ModelParams m;
    m.hurst = HurstExponent(0.83);
    m.k = 0.59;
    m.beta = -5.0;
    m.delta = 1.0;
    return m;
}

// ---------------------------------------------------------------------------
Outcome ac1_fgn() {
    Outcome o;
    const std::size_t paths = 200, n = std::size_t{1} << 12, max_lag = 20;
    int violations = 0;
    double worst = 0.0;
    for (double h : {0.6, 0.8, 0.9}) {
        std::vector<std::vector<double>> acov(max_lag + 1, std::vector<double>(paths));
        parallel_for(paths, [&](std::size_t p) {
            const auto x = generate_fgn(n, HurstExponent(h), 1.0, path_seed(100, p)).values;
            for (std::size_t k = 0; k <= max_lag; ++k) acov[k][p] = oracle::zero_mean_autocov(x, k);
        });
        for (std::size_t k = 0; k <= max_lag; ++k) {
            const double kk = static_cast<double>(k), h2 = 2.0 * h;
            const double expected = 0.5 * (std::pow(kk + 1.0, h2) - 2.0 * std::pow(kk, h2) + std::pow(std::abs(kk - 1.0), h2));
            const auto ms = oracle::mean_se(acov[k]);
            const double z = std::abs(ms.mean - expected) / ms.se;
            worst = std::max(worst, z);
            violations += z > 4.0;
        }
    }
    o.pass = violations == 0;
    o.summary = fmt("63 autocovariances (H 0.6/0.8/0.9, lags 0..20), %d outside 4 SE, largest |z| %.2f", violations, worst);
    return o;
}

// ---------------------------------------------------------------------------
Outcome ac2_hurst_recovery() {
    Outcome o;
    const std::size_t sub = 16, blocks = std::size_t{1} << 16, seeds = 10;
    std::vector<double> h(seeds), b(seeds);
    parallel_for(seeds, [&](std::size_t i) {
        const auto path = simulate_path(reference_model(), blocks * sub, 1.0 / static_cast<double>(sub), 1.0, path_seed(200, i));
        EstimationOptions opt;
        opt.window = sub;
        opt.stride = sub;
        const auto rep = estimate(path, opt);
        h[i] = rep.hurst_hat;
        b[i] = rep.beta_hat;
    });
    int ok = 0;
    std::string hs, bs;
    for (std::size_t i = 0; i < seeds; ++i) {
        ok += std::abs(h[i] - 0.83) <= 0.07 && std::abs(b[i] + 5.0) <= 0.1;
        hs += fmt(" %.3f", h[i]);
        bs += fmt(" %.3f", b[i]);
    }
    o.pass = ok >= 8;
    o.summary = fmt("%d/10 seeds with |H-0.83| <= 0.07 and |beta+5| <= 0.1 (need 8)", ok);
    o.notes.push_back("H_hat:" + hs);
    o.notes.push_back("beta_hat:" + bs);
    o.notes.push_back("2^16 blocks of delta, 16 price steps per block, window = stride = 16");
    return o;
}

// ---------------------------------------------------------------------------
double log_grid_mass(const ReturnDistParams& p) {
    const double c = (p.mu - 0.5 * p.theta() * p.theta()) * p.lag;
    const double scale = std::log(p.theta() * std::sqrt(p.lag)), s = p.sigma_logvol();
    auto side = [&](double sign) {
        return oracle::simpson(
            [&](double t) {
                const double x = std::exp(t);
                return pdf(c + sign * x, p) * x;
            },
            scale - 12.0 * s - 30.0, scale + 12.0 * s + 4.0, 3000);
    };
    return side(1.0) + side(-1.0);
}

Outcome ac3_return_pdf() {
    Outcome o;
    double worst_norm = 0.0;
    for (double k : {0.0, 0.3, 0.59, 1.0})
        for (double h : {0.6, 0.8, 0.9})
            for (double lag : {1.0 / 440.0, 1.0, 10.0}) {
                ReturnDistParams p;
                p.k = k;
                p.hurst = HurstExponent(h);
                p.lag = lag;
                worst_norm = std::max(worst_norm, std::abs(log_grid_mass(p) - 1.0));
            }
    const ReturnDistParams p;
    const double s = p.sigma_logvol();
    const std::size_t draws = 10'000'000, chunks = 100;
    const std::vector<double> probes{0.0, 0.01, 0.05};
    double worst_z = 0.0;
    for (double r : probes) {
        std::vector<double> sum(chunks), sum2(chunks);
        parallel_for(chunks, [&](std::size_t c) {
            auto z = make_normal(300, 1000 + c);
            for (std::size_t i = 0; i < draws / chunks; ++i) {
                const double sigma = std::exp(p.beta + s * z());
                const double d = gaussian_pdf(r, -0.5 * sigma * sigma, sigma);
                sum[c] += d;
                sum2[c] += d * d;
            }
        });
        double m = 0.0, m2 = 0.0;
        for (std::size_t c = 0; c < chunks; ++c) m += sum[c], m2 += sum2[c];
        m /= static_cast<double>(draws);
        const double se = std::sqrt((m2 / static_cast<double>(draws) - m * m) / static_cast<double>(draws));
        const double z = std::abs(pdf(r, p) - m) / se;
        worst_z = std::max(worst_z, z);
        o.notes.push_back(fmt("pdf(%.2f) = %.6g, Monte Carlo %.6g +- %.2g (|z| %.2f)", r, pdf(r, p), m, se, z));
    }
    const auto x = sample_returns(p, 100000, 301);
    const double ks = stats::ks_distance(x, [&](double r) { return cdf(r, p); });
    const double band = 1.358 / std::sqrt(1e5);
    o.pass = worst_norm < 1e-6 && worst_z < 3.0 && ks < band;
    o.summary = fmt("normalization error %.1e over 36 configs; MC |z| max %.2f; KS D = %.4f (95%% band %.4f)", worst_norm,
                    worst_z, ks, band);
    return o;
}

// ---------------------------------------------------------------------------
Outcome ac4_tail_law() {
    Outcome o;
    const ReturnDistParams p;
    const TailFit fit = fit_log_tail(p, 1e3, 1e5);
    o.pass = std::abs(fit.coefficient_ratio - 1.0) <= 0.05;
    o.summary = fmt("fitted log^2(lambda) coefficient x C = %.4f over lambda in [1e3, 1e5] (need 1 +- 0.05)", fit.coefficient_ratio);
    o.notes.push_back(fmt("fit -log pdf = %.3f + %.3f log(lambda) + %.5f log^2(lambda); 1/C = %.5f", fit.c0, fit.c1, fit.c2, 1.0 / p.C()));
    const TailFit wide = fit_log_tail(p, 1e2, 1e6);
    o.notes.push_back(fmt("same fit over [1e2, 1e6]: coefficient x C = %.4f", wide.coefficient_ratio));
    // The closed-form asymptotic law run through the same fit recovers 1/C, so the fit itself is sound.
    std::vector<std::vector<double>> rows;
    std::vector<double> y;
    for (int i = 0; i <= 40; ++i) {
        const double l = std::log(1e3) + (std::log(1e5) - std::log(1e3)) * i / 40.0;
        rows.push_back({1.0, l, l * l});
        y.push_back(-std::log(tail_asymptotic(return_at_lambda(std::exp(l), p), p)));
    }
    o.notes.push_back(fmt("asymptotic form through the same fit: coefficient x C = %.4f", least_squares(rows, y)[2] * p.C()));
    o.notes.push_back("the gap is the next saddle-point order: -log pdf ~ L^2/(8s^2) - L log(L/2s^2)/(4s^2), L = log 2lambda,");
    o.notes.push_back("whose L log L term is not small at lambda <= 1e5 and leaks into the quadratic coefficient");
    return o;
}

// ---------------------------------------------------------------------------
Outcome ac5_options() {
    Outcome o;
    double worst_m = 0.0;
    for (double alpha : {0.5, 1.0, 2.0})
        for (double a : {0.2, 1.0})
            for (double b : {0.1, 0.5}) {
                const double ref = oracle::m_double_integral(alpha, a, b);
                worst_m = std::max(worst_m, std::abs(m_function(alpha, a, b) - ref) / std::abs(ref));
            }
    const bool pa = worst_m < 1e-6;

    double worst_bs = 0.0;
    for (double s : linear_grid(0.5, 1.5, 21))
        for (double tau : linear_grid(5.0, 100.0, 20)) {
            const OptionInputs opt{s, 1.0, 0.001, 0.01, tau};
            worst_bs = std::max(worst_bs, std::abs(price(opt, {1e-8}) - black_scholes(opt)));
        }
    const bool pb = worst_bs < 1e-5;

    bool pc = true;
    for (double k : {0.25, 0.5}) {
        ModelParams m;
        m.hurst = HurstExponent(0.8);
        m.k = k;
        m.beta = std::log(0.01);
        const double tau = 20.0, r = 0.001;
        const auto eff = effective_volatility(m, tau);
        const double v = price({1.0, 1.0, r, eff.sigma, tau}, {eff.alpha});
        const auto mc = monte_carlo_price(1.0, 1.0, r, tau, m, 100000, 500);
        const double z = (v - mc.price) / mc.std_error;
        pc = pc && std::abs(z) < 3.0;
        const double literal = price({1.0, 1.0, r, 0.01, tau}, VolDispersion::from_model(m));
        o.notes.push_back(fmt("k = %.2f: quadrature %.6f (sigma %.5f, alpha %.4f) vs Monte Carlo %.6f +- %.6f, z = %.2f; "
                              "sigma_t = e^beta with alpha = k delta^(H-1) gives %.6f",
                              k, v, eff.sigma, eff.alpha, mc.price, mc.std_error, z, literal));
    }

    ModelParams m1;
    m1.hurst = HurstExponent(0.8);
    m1.k = 1.0;
    m1.beta = std::log(0.01);
    const auto taus = linear_grid(5.0, 100.0, 20);
    const std::vector<double> money{0.5, 0.75, 1.0, 1.25, 1.5};
    const auto surf = smile_surface(money, taus, m1, 0.01, 0.001);
    bool pd = true;
    double prev = std::numeric_limits<double>::infinity();
    std::string amps;
    for (std::size_t t = 0; t < taus.size(); ++t) {
        double lo = 1e9, hi = -1e9;
        for (std::size_t j = 0; j < money.size(); ++j) {
            lo = std::min(lo, surf[t * money.size() + j].implied_vol);
            hi = std::max(hi, surf[t * money.size() + j].implied_vol);
        }
        const double wing_lo = surf[t * money.size()].implied_vol, mid = surf[t * money.size() + 2].implied_vol,
                     wing_hi = surf[t * money.size() + 4].implied_vol;
        pd = pd && wing_lo > mid && wing_hi > mid && hi - lo < prev;
        prev = hi - lo;
        if (t % 5 == 0) amps += fmt(" tau=%g:%.4f", taus[t], hi - lo);
    }
    o.notes.push_back(fmt("(a) single vs nested M-function, worst relative gap %.2e", worst_m));
    o.notes.push_back(fmt("(b) alpha -> 0 vs Black-Scholes, worst |gap| %.2e on 21 x 20 grid", worst_bs));
    o.notes.push_back("(d) smile amplitude (k = 1):" + amps);
    o.pass = pa && pb && pc && pd;
    o.summary = fmt("(a) %s  (b) %s  (c) %s  (d) %s", pa ? "ok" : "FAIL", pb ? "ok" : "FAIL", pc ? "ok" : "FAIL", pd ? "ok" : "FAIL");
    return o;
}

// ---------------------------------------------------------------------------
Outcome ac6_leverage() {
    Outcome o;
    const std::size_t paths = 1000, steps = 10000, history = 1000, max_lag = 10;
    bool pass = true;
    for (auto coupling : {DriverCoupling::identified_drivers, DriverCoupling::independent_drivers}) {
        ModelParams m = reference_model();
        m.coupling = coupling;
        m.kprime = -calibrated_kprime(m, 1.0, history);
        std::vector<std::vector<double>> simple(paths), logr(paths);
        parallel_for(paths, [&](std::size_t i) {
            const auto p = simulate_identified(m, steps, 1.0, 1.0, history, path_seed(600, i));
            simple[i].resize(steps);
            for (std::size_t t = 0; t < steps; ++t) simple[i][t] = p.prices[t + 1] / p.prices[t] - 1.0;
            logr[i] = p.log_returns();
        });
        const auto lev = leverage(std::span<const std::vector<double>>(simple), max_lag, true);
        const auto lev_log = leverage(std::span<const std::vector<double>>(logr), max_lag, true);
        const bool identified = coupling == DriverCoupling::identified_drivers;
        double worst_past = 0.0, weakest_future = -1e9, worst_future = 0.0, worst_log = 0.0;
        for (std::size_t i = 0; i < lev.size(); ++i) {
            const auto& pt = lev[i];
            const double z = pt.value / pt.std_error;
            if (pt.lag < 0) worst_past = std::max(worst_past, std::abs(z));
            if (pt.lag > 0) {
                weakest_future = std::max(weakest_future, z);
                worst_future = std::max(worst_future, std::abs(z));
            }
            if (pt.lag != 0) worst_log = std::max(worst_log, std::abs(lev_log[i].value / lev_log[i].std_error));
        }
        if (identified) {
            pass = pass && weakest_future < -4.0 && worst_past < 4.0;
            o.notes.push_back(fmt("identified: L(1) = %.2f +- %.2f, weakest tau in 1..10 at z = %.1f; tau < 0 max |z| = %.2f",
                                  lev[max_lag + 1].value, lev[max_lag + 1].std_error, weakest_future, worst_past));
        } else {
            pass = pass && worst_future < 4.0 && worst_past < 4.0;
            o.notes.push_back(fmt("independent: tau != 0 max |z| = %.2f", std::max(worst_future, worst_past)));
        }
        o.notes.push_back(fmt("  with log returns instead: tau != 0 max |z| = %.2f (drift -sigma^2/2 couples to volatility memory)", worst_log));
    }
    o.pass = pass;
    o.summary = "returns dS/S, ensemble-pooled L(tau)/<r^2>^2, 1000 paths x 1e4 steps, 4 SE bands, tau = 0 excluded";
    return o;
}

// ---------------------------------------------------------------------------
Outcome ac7_agents() {
    Outcome o;
    const std::size_t seeds = 10;
    std::vector<double> kurt(seeds), hurst(seeds), fk(seeds), fk_se(seeds), share(seeds);
    parallel_for(seeds, [&](std::size_t i) {
        abm::AbmConfig mixed;
        mixed.seed = i + 1;
        const auto run = abm::run_experiment(mixed);
        kurt[i] = run.increments.excess_kurtosis;
        hurst[i] = run.report->hurst_hat;
        abm::AbmConfig fund;
        fund.population = {{abm::kFundamental, 100}};
        fund.evolution = abm::EvolutionParams{};
        fund.steps = 10000;
        fund.seed = i + 1;
        fund.estimate = false;
        const auto f = abm::run_experiment(fund);
        fk[i] = f.increments.excess_kurtosis;
        fk_se[i] = f.increments.kurtosis_stderr();
        share[i] = f.final_shares.count(abm::kFundamental) ? f.final_shares.at(abm::kFundamental) : 0.0;
    });
    int fat = 0, scaling = 0, gauss = 0, dominant = 0;
    std::string ks, hs;
    for (std::size_t i = 0; i < seeds; ++i) {
        fat += kurt[i] > 1.0;
        scaling += std::abs(hurst[i] - 0.55) <= 0.10;
        gauss += std::abs(fk[i]) < 4.0 * fk_se[i];
        dominant += share[i] >= 0.5;
        ks += fmt(" %.2f", kurt[i]);
        hs += fmt(" %.2f", hurst[i]);
    }
    o.pass = fat >= 6 && scaling >= 6 && gauss >= 6 && dominant >= 6;
    o.summary = fmt("50/50: kurtosis > 1 in %d/10, H in 0.55 +- 0.1 in %d/10; all-fundamental: Gaussian in %d/10, share >= 0.5 in %d/10",
                    fat, scaling, gauss, dominant);
    o.notes.push_back("50/50 excess kurtosis:" + ks);
    o.notes.push_back("50/50 H_hat:" + hs);
    o.notes.push_back("with a shared information function the trend/value loop has gain G; a quiet phase needs G < 1,");
    o.notes.push_back("saturated bursts need G >> 1, so the literal dynamics give no intermittent fat tails");
    return o;
}

// ---------------------------------------------------------------------------
Outcome ac8_lob() {
    Outcome o;
    const std::size_t seeds = 10;
    std::vector<double> hurst(seeds), kurt(seeds), max_acf(seeds), max_robust(seeds), band(seeds);
    parallel_for(seeds, [&](std::size_t i) {
        lob::LobParams p;
        p.seed = i + 1;
        const auto run = lob::run_lob(p);
        EstimationOptions opt;
        opt.window = 512;
        opt.stride = 32;
        hurst[i] = estimate(run.path, opt).hurst_hat;
        const auto r = run.path.log_returns();
        kurt[i] = stats::moments(r).excess_kurtosis;
        std::vector<std::size_t> lags;
        for (std::size_t k = 5; k <= 20; ++k) lags.push_back(k);
        const auto acf = autocorrelation(r, lags);
        double s2 = 0.0;
        for (double x : r) s2 += x * x;
        band[i] = 3.0 / std::sqrt(static_cast<double>(r.size()));
        for (const auto& [k, v] : acf) {
            max_acf[i] = std::max(max_acf[i], std::abs(v));
            double q = 0.0;
            for (std::size_t t = 0; t + k < r.size(); ++t) q += r[t] * r[t] * r[t + k] * r[t + k];
            max_robust[i] = std::max(max_robust[i], std::abs(v) / (std::sqrt(q) / s2));
        }
    });
    int hs_ok = 0, acf_ok = 0, kurt_ok = 0, robust_ok = 0;
    std::string hs, as;
    for (std::size_t i = 0; i < seeds; ++i) {
        hs_ok += std::abs(hurst[i] - 0.96) <= 0.10;
        acf_ok += max_acf[i] < band[i];
        kurt_ok += kurt[i] > 0.0;
        robust_ok += max_robust[i] < 3.0;
        hs += fmt(" %.3f", hurst[i]);
        as += fmt(" %.4f", max_acf[i]);
    }
    o.pass = hs_ok >= 6 && acf_ok >= 6 && kurt_ok >= 6;
    o.summary = fmt("H in 0.96 +- 0.1 in %d/10; max |acf(k>=5)| < 3/sqrt(N) in %d/10; excess kurtosis > 0 in %d/10", hs_ok,
                    acf_ok, kurt_ok);
    o.notes.push_back("H_hat (window 512, stride 32):" + hs);
    o.notes.push_back(fmt("max |acf| over lags 5..20:%s (band %.4f)", as.c_str(), band[0]));
    o.notes.push_back(fmt("excess kurtosis of returns: median %.1f", [&] {
        auto k = kurt;
        std::nth_element(k.begin(), k.begin() + 5, k.end());
        return k[5];
    }()));
    o.notes.push_back(fmt("against a heteroskedasticity-robust 3 SE band the acf passes in %d/10 runs", robust_ok));
    return o;
}

// ---------------------------------------------------------------------------
Outcome ac9_exactness() {
    Outcome o;
    const std::vector<std::pair<abm::Strategy, int>> labels{
        {{{1, 1, -1, -1}}, 72}, {{{1, -1, 1, -1}}, 60}, {{{0, 1, -1, -1}}, 45},
        {{{-1, 1, -1, -1}}, 18}, {{{1, 1, -1, 0}}, 73}, {{{1, 1, 0, -1}}, 75}};
    bool codes = true;
    for (const auto& [s, code] : labels) codes = codes && abm::strategy_code(s) == code && abm::strategy_decode(code) == s;
    for (int c = 0; c < abm::kStrategyCount; ++c) codes = codes && abm::strategy_code(abm::strategy_decode(c)) == c;

    abm::AbmConfig cfg;
    auto agents = abm::make_population(cfg);
    abm::MarketEnv env;
    env.impact = cfg.impact;
    env.noise_sigma = cfg.noise_sigma;
    env.value_walk_sigma = cfg.value_walk_sigma;
    env.f = cfg.f;
    auto normal = make_normal(900, streams::market);
    double worst = 0.0;
    for (int t = 0; t < 20000; ++t) {
        const auto before = agents;
        const auto r = abm::step(env, agents, normal);
        double dc = 0.0, ds = 0.0;
        for (std::size_t i = 0; i < agents.size(); ++i) {
            dc += agents[i].cash - before[i].cash;
            ds += agents[i].stock - before[i].stock;
        }
        worst = std::max(worst, std::abs(dc + r.price * ds) / std::max(1.0, std::abs(dc)));
    }
    const auto [cases, mismatch] = oracle::lob_exhaustive_check();
    o.pass = codes && worst < 1e-9 && mismatch.empty();
    o.summary = fmt("codes %s; settlement worst relative gap %.1e over 2e4 steps; LOB oracle %zu cases, %s", codes ? "exact" : "WRONG",
                    worst, cases, mismatch.empty() ? "all match" : ("mismatch at " + mismatch).c_str());
    return o;
}

// ---------------------------------------------------------------------------
int run_cli(const std::string& args, const std::string& threads) {
    const std::string cmd = "FRACVOL_THREADS=" + threads + " \"" FRACVOL_CLI_PATH "\" " + args + " > /dev/null 2>&1";
    const int status = std::system(cmd.c_str());
    return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::string slurp(const std::filesystem::path& p) {
    try {
        return io::read_file(p);
    } catch (const std::exception&) {
        return "<missing>";
    }
}

Outcome ac10_determinism() {
    Outcome o;
    namespace fs = std::filesystem;
    const fs::path dir = fs::temp_directory_path() / "fracvol_acceptance_determinism";
    fs::remove_all(dir);
    fs::create_directories(dir);
    struct Cmd {
        std::string name, args, ext;
        std::size_t members;
        std::string trace;
        bool seeded = true;
    };
    const std::vector<Cmd> cmds{
        {"fgn", "fgn --steps 65536", "csv", 1, ""},
        {"simulate", "simulate --steps 20000 --paths 4", "csv", 4, ""},
        {"simulate-identified", "simulate --steps 5000 --paths 3 --identified --history 500", "csv", 3, ""},
        {"pdf", "pdf --points 101", "csv", 1, "", false},
        {"price", "price --paths 20000 --tau 20", "json", 1, ""},
        {"smile", "smile --moneyness-points 11 --tau-points 10", "csv", 1, "", false},
        {"abm", "abm --steps 21000 --paths 3", "csv", 3, ""},
        {"abm-evolution", "abm --steps 10000 --population 72:100 --evolution --format json", "json", 1, ""},
        {"lob", "lob --steps 50000 --paths 3", "csv", 3, "trace"},
    };
    int identical = 0, total = 0;
    for (const auto& c : cmds) {
        std::vector<std::string> outputs[2];
        bool ran = true;
        for (int v = 0; v < 2; ++v) {
            const std::string threads = v == 0 ? "1" : "8";
            const fs::path out = dir / (c.name + "_t" + threads + "." + c.ext);
            const fs::path trace = dir / (c.name + "_trace_t" + threads + ".csv");
            std::string args = c.args + (c.seeded ? " --seed 77" : "") + " --out " + out.string();
            if (!c.trace.empty()) args += " --book-trace " + trace.string();
            ran = ran && run_cli(args, threads) == 0;
            for (std::size_t i = 0; i < c.members; ++i) {
                auto member = [&](const fs::path& base) {
                    if (c.members == 1) return base;
                    return base.parent_path() / (base.stem().string() + "_" + std::to_string(i) + base.extension().string());
                };
                outputs[v].push_back(slurp(member(out)));
                if (!c.trace.empty()) outputs[v].push_back(slurp(member(trace)));
            }
        }
        ++total;
        const bool present = std::none_of(outputs[0].begin(), outputs[0].end(),
                                          [](const std::string& s) { return s.empty() || s == "<missing>"; });
        const bool same = ran && present && outputs[0] == outputs[1];
        identical += same;
        if (!same) o.notes.push_back(c.name + ": artifacts differ or command failed");
    }
    // Estimation of a fixed input is part of the contract too.
    ++total;
    {
        const fs::path prices = dir / "simulate_t1_0.csv";
        const bool ok = run_cli("estimate --in " + prices.string() + " --out " + (dir / "est1.json").string(), "1") == 0 &&
                        run_cli("estimate --in " + prices.string() + " --out " + (dir / "est8.json").string(), "8") == 0;
        const std::string a = slurp(dir / "est1.json");
        const bool same = ok && a != "<missing>" && a == slurp(dir / "est8.json");
        identical += same;
        if (!same) o.notes.push_back("estimate: artifacts differ or command failed");
    }
    fs::remove_all(dir);
    o.pass = identical == total;
    o.summary = fmt("%d/%d commands byte-identical under FRACVOL_THREADS = 1 and 8", identical, total);
    return o;
}

}  // namespace

int main() {
    struct Criterion {
        int id;
        const char* title;
        double budget_s;
        std::function<Outcome()> run;
    };
    const std::vector<Criterion> criteria{
        {1, "fGn exactness", 30, ac1_fgn},
        {2, "end-to-end Hurst recovery", 120, ac2_hurst_recovery},
        {3, "return pdf", 120, ac3_return_pdf},
        {4, "tail law", 60, ac4_tail_law},
        {5, "option pricing", 300, ac5_options},
        {6, "leverage dichotomy", 300, ac6_leverage},
        {7, "strategy-agent model", 180, ac7_agents},
        {8, "limit-order-book model", 180, ac8_lob},
        {9, "encoding and bookkeeping", 5, ac9_exactness},
        {10, "determinism", 60, ac10_determinism},
    };
    int passed = 0;
    for (const auto& c : criteria) {
        const auto start = std::chrono::steady_clock::now();
        Outcome o;
        try {
            o = c.run();
        } catch (const std::exception& e) {
            o.pass = false;
            o.summary = std::string("exception: ") + e.what();
        }
        const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        const bool in_time = secs <= c.budget_s;
        const bool pass = o.pass && in_time;
        passed += pass;
        std::cout << "AC" << c.id << (c.id < 10 ? "  " : " ") << (pass ? "PASS" : "FAIL") << "  " << c.title << ": " << o.summary
                  << fmt(" [%.1f s of %.0f s%s]", secs, c.budget_s, in_time ? "" : ", over budget") << std::endl;
        for (const auto& n : o.notes) std::cout << "        " << n << '\n';
        std::cout.flush();
    }
    std::cout << passed << "/" << criteria.size() << " acceptance criteria pass" << std::endl;
    return passed == static_cast<int>(criteria.size()) ? 0 : 1;
}
