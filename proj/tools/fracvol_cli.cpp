// fracvol command-line tool.

#include <chrono>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <iostream>
#include <limits>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "fracvol/fracvol.hpp"

namespace {

using namespace fracvol;
using json = nlohmann::ordered_json;
namespace fs = std::filesystem;

struct Common {
    std::uint64_t seed = 1;
    std::string out;
    std::string format = "csv";
    std::string config;
};

struct ModelOpts {
    double hurst = 0.83;
    double k = 0.59;
    double beta = -5.0;
    double delta = 1.0;
    double mu = 0.0;

    ModelParams params() const {
        ModelParams m;
        m.hurst = HurstExponent(hurst);
        m.k = k;
        m.beta = beta;
        m.delta = delta;
        m.mu = mu;
        m.validate();
        return m;
    }
};

void add_common(CLI::App* app, Common& c, bool stochastic = true) {
    if (stochastic) app->add_option("--seed", c.seed, "Master seed");
    app->add_option("--out", c.out, "Output file (default: <command>.<format>)");
    app->add_option("--format", c.format, "Output format")->check(CLI::IsMember({"csv", "json"}));
    app->add_option("--config", c.config, "File of 'flag = value' lines; explicit flags win");
}

void add_model(CLI::App* app, ModelOpts& m) {
    app->add_option("--hurst", m.hurst, "Hurst exponent H of the log-volatility noise");
    app->add_option("--k", m.k, "Log-volatility noise intensity k");
    app->add_option("--beta", m.beta, "Mean log-volatility β");
    app->add_option("--delta", m.delta, "Observation time scale δ");
    app->add_option("--mu", m.mu, "Price drift μ");
}

std::string output_path(const std::string& command, const Common& c) {
    return c.out.empty() ? command + "." + c.format : c.out;
}

/// `base_i.ext` for ensemble member i when more than one artifact is written.
std::string member_path(const std::string& base, std::size_t i, std::size_t count) {
    if (count == 1) return base;
    const fs::path p(base);
    return (p.parent_path() / (p.stem().string() + "_" + std::to_string(i) + p.extension().string())).string();
}

json path_json(const MarketPath& p) {
    json j;
    j["t"] = p.times;
    j["price"] = p.prices;
    if (!p.logvol.empty()) j["logvol"] = p.logvol;
    return j;
}

std::string render_path(const MarketPath& p, const std::string& format) {
    return format == "json" ? path_json(p).dump() + "\n" : io::path_to_csv(p);
}

std::string num(double x) { return io::format_double(x); }

/// Appends `--key value` for every config key not already given on the command line.
std::vector<std::string> expand_config(std::vector<std::string> args) {
    std::string file;
    for (std::size_t i = 0; i < args.size(); ++i) {
        if (args[i] == "--config" && i + 1 < args.size()) file = args[i + 1];
        else if (args[i].rfind("--config=", 0) == 0) file = args[i].substr(9);
    }
    if (file.empty()) return args;
    const io::KeyValueConfig cfg = io::KeyValueConfig::load(file);
    auto given = [&](const std::string& key) {
        for (const auto& a : args)
            if (a == "--" + key || a.rfind("--" + key + "=", 0) == 0) return true;
        return false;
    };
    std::vector<std::string> extra;
    for (const auto& key : cfg.unused()) {
        if (key == "config" || given(key)) continue;
        const std::string value = cfg.get(key, std::string());
        if (value == "true" || value == "false") {
            if (value == "true") extra.push_back("--" + key);
        } else {
            extra.push_back("--" + key);
            extra.push_back(value);
        }
    }
    args.insert(args.end(), extra.begin(), extra.end());
    return args;
}

std::vector<std::pair<int, std::size_t>> parse_population(const std::string& text) {
    std::vector<std::pair<int, std::size_t>> pop;
    for (auto cell : io::split(text)) {
        cell = io::trim(cell);
        const auto colon = cell.find(':');
        if (colon == std::string_view::npos) throw ParameterError("population entries look like code:count, got '" + std::string(cell) + "'");
        const auto code = io::parse_double(cell.substr(0, colon));
        const auto count = io::parse_double(cell.substr(colon + 1));
        if (!code || !count || *code != std::floor(*code) || *count != std::floor(*count) || *count < 0)
            throw ParameterError("population entry '" + std::string(cell) + "' is not code:count");
        pop.emplace_back(static_cast<int>(*code), static_cast<std::size_t>(*count));
    }
    return pop;
}

VarianceEstimator parse_estimator(const std::string& s) {
    return s == "levels" ? VarianceEstimator::levels : VarianceEstimator::increments;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Fractional volatility model: simulation, estimation, return laws, option pricing and agent markets"};
    app.require_subcommand(1);
    app.option_defaults()->always_capture_default();
    app.set_help_all_flag("--help-all", "Help for every command");

    const auto start = std::chrono::steady_clock::now();
    json summary;

    // fgn ---------------------------------------------------------------
    Common fgn_c;
    double fgn_h = 0.83, fgn_spacing = 1.0;
    std::size_t fgn_n = 4096;
    std::string fgn_method = "automatic";
    auto* fgn = app.add_subcommand("fgn", "Fractional Gaussian noise samples (index,value)");
    add_common(fgn, fgn_c);
    fgn->add_option("--hurst", fgn_h, "Hurst exponent");
    fgn->add_option("--steps", fgn_n, "Number of samples")->check(CLI::PositiveNumber);
    fgn->add_option("--delta", fgn_spacing, "Sample spacing");
    fgn->add_option("--method", fgn_method, "Generator")->check(CLI::IsMember({"automatic", "circulant", "durbin-levinson"}));

    // simulate ----------------------------------------------------------
    Common sim_c;
    ModelOpts sim_m;
    std::size_t sim_steps = 4096, sim_paths = 1, sim_history = 1000;
    double sim_dt = 0.0, sim_spot = 100.0, sim_kprime = 0.0;
    bool sim_identified = false;
    auto* sim = app.add_subcommand("simulate", "Price paths of the fractional volatility model (t,price,logvol)");
    add_common(sim, sim_c);
    add_model(sim, sim_m);
    sim->add_option("--steps", sim_steps, "Price steps per path")->check(CLI::PositiveNumber);
    sim->add_option("--paths", sim_paths, "Number of paths; more than one writes <out>_<i>")->check(CLI::PositiveNumber);
    sim->add_option("--dt", sim_dt, "Price step (0: δ)");
    sim->add_option("--spot", sim_spot, "Initial price");
    sim->add_flag("--identified", sim_identified, "Moving-average form with the price driven by the volatility noise");
    sim->add_option("--kprime", sim_kprime, "Kernel amplitude k' for the moving-average form (0: calibrated to k, negative)");
    sim->add_option("--history", sim_history, "Kernel memory in steps for the moving-average form");

    // estimate ----------------------------------------------------------
    Common est_c;
    est_c.format = "json";
    std::string est_in;
    std::size_t est_window = 21, est_stride = 1, est_lev = 20, est_acf = 20;
    std::string est_estimator = "increments";
    bool est_detrend = false;
    auto* est = app.add_subcommand("estimate", "Induced volatility, Hurst exponent, leverage and autocorrelation of a price CSV");
    add_common(est, est_c, false);
    est->add_option("--in,input", est_in, "Price CSV with a t,price header")->required()->check(CLI::ExistingFile);
    est->add_option("--window", est_window, "Induced-volatility window in samples");
    est->add_option("--stride", est_stride, "Samples per observation block δ/dt");
    est->add_option("--estimator", est_estimator, "Window variance")->check(CLI::IsMember({"increments", "levels"}));
    est->add_flag("--detrend", est_detrend, "Remove the window trend before taking the variance");
    est->add_option("--leverage-lags", est_lev, "Largest leverage lag");
    est->add_option("--acf-lags", est_acf, "Largest autocorrelation lag");

    // pdf ---------------------------------------------------------------
    Common pdf_c;
    ModelOpts pdf_m;
    double pdf_tau = 1.0, pdf_range = 10.0;
    std::size_t pdf_points = 201;
    auto* pdf_cmd = app.add_subcommand("pdf", "Return density on a grid (r,pdf,tail)");
    add_common(pdf_cmd, pdf_c, false);
    add_model(pdf_cmd, pdf_m);
    pdf_cmd->add_option("--tau", pdf_tau, "Return horizon T - t");
    pdf_cmd->add_option("--points", pdf_points, "Grid points")->check(CLI::Range(std::size_t{2}, std::size_t{1} << 20));
    pdf_cmd->add_option("--range", pdf_range, "Half width of the grid in units of e^β·sqrt(tau)");

    // price -------------------------------------------------------------
    Common pr_c;
    pr_c.format = "json";
    ModelOpts pr_m;
    pr_m.hurst = 0.8;
    pr_m.k = 1.0;
    double pr_spot = 1.0, pr_strike = 1.0, pr_rate = 0.001, pr_sigma = 0.01, pr_tau = 50.0, pr_alpha = -1.0;
    std::size_t pr_paths = 0;
    auto* pr = app.add_subcommand("price", "European call under the fractional volatility model");
    add_common(pr, pr_c);
    add_model(pr, pr_m);
    pr->add_option("--spot", pr_spot, "Spot price S");
    pr->add_option("--strike", pr_strike, "Strike K");
    pr->add_option("--rate", pr_rate, "Risk-free rate r");
    pr->add_option("--sigma", pr_sigma, "Current volatility σ_t");
    pr->add_option("--tau", pr_tau, "Time to maturity T - t");
    pr->add_option("--alpha-disp", pr_alpha, "Volatility dispersion α (negative: k δ^(H-1))");
    pr->add_option("--paths", pr_paths, "Monte Carlo paths for a simulated reference price (0: none)");

    // smile -------------------------------------------------------------
    Common sm_c;
    ModelOpts sm_m;
    sm_m.hurst = 0.8;
    sm_m.k = 1.0;
    double sm_rate = 0.001, sm_sigma = 0.01, sm_alpha = -1.0;
    double sm_mlo = 0.5, sm_mhi = 1.5, sm_tlo = 5.0, sm_thi = 100.0;
    std::size_t sm_mn = 21, sm_tn = 20;
    auto* sm = app.add_subcommand("smile", "Price and implied-volatility surface (moneyness,tau,price,implied_vol,delta_vs_bs)");
    add_common(sm, sm_c, false);
    add_model(sm, sm_m);
    sm->add_option("--rate", sm_rate, "Risk-free rate r");
    sm->add_option("--sigma", sm_sigma, "Current volatility σ_t");
    sm->add_option("--alpha-disp", sm_alpha, "Volatility dispersion α (negative: k δ^(H-1))");
    sm->add_option("--moneyness-min", sm_mlo, "Smallest S/K");
    sm->add_option("--moneyness-max", sm_mhi, "Largest S/K");
    sm->add_option("--moneyness-points", sm_mn, "S/K grid points")->check(CLI::PositiveNumber);
    sm->add_option("--tau-min", sm_tlo, "Shortest maturity");
    sm->add_option("--tau-max", sm_thi, "Longest maturity");
    sm->add_option("--tau-points", sm_tn, "Maturity grid points")->check(CLI::PositiveNumber);

    // abm ---------------------------------------------------------------
    Common abm_c;
    abm::AbmConfig abm_cfg;
    std::string abm_pop = "72:50,60:50", abm_signal = "logistic", abm_selection = "worst";
    bool abm_evolve = false;
    abm::EvolutionParams abm_evo;
    std::size_t abm_paths = 1;
    auto* abm_cmd = app.add_subcommand("abm", "Strategy-agent market (t,price)");
    add_common(abm_cmd, abm_c);
    abm_cmd->add_option("--steps", abm_cfg.steps, "Trading rounds")->check(CLI::PositiveNumber);
    abm_cmd->add_option("--paths", abm_paths, "Independent runs; more than one writes <out>_<i>")->check(CLI::PositiveNumber);
    abm_cmd->add_option("--population", abm_pop, "Comma-separated code:count pairs");
    abm_cmd->add_option("--lambda0", abm_cfg.impact.lambda0, "Loglinear liquidity λ0");
    abm_cmd->add_option("--lambda1", abm_cfg.impact.lambda1, "Square-root liquidity λ1");
    abm_cmd->add_option("--impact-exponent", abm_cfg.impact.exponent, "Exponent of |ω| in the impact denominator");
    abm_cmd->add_option("--noise-sigma", abm_cfg.noise_sigma, "Standard deviation of the log-price noise");
    abm_cmd->add_option("--value-walk-sigma", abm_cfg.value_walk_sigma, "Step of the perceived-value random walk");
    abm_cmd->add_option("--signal", abm_signal, "Information function")->check(CLI::IsMember({"step", "logistic"}));
    abm_cmd->add_option("--signal-beta", abm_cfg.f.beta, "Logistic steepness");
    abm_cmd->add_option("--unit", abm_cfg.unit_investment, "Order size per unit signal");
    abm_cmd->add_flag("--evolution", abm_evolve, "Enable strategy evolution");
    abm_cmd->add_option("--evo-period", abm_evo.period, "Rounds between evolution steps");
    abm_cmd->add_option("--copiers", abm_evo.copiers, "Agents that copy per evolution step");
    abm_cmd->add_option("--mutation", abm_evo.mutation_prob, "Mutation probability per copy");
    abm_cmd->add_option("--selection", abm_selection, "Which agents copy")->check(CLI::IsMember({"worst", "random"}));
    abm_cmd->add_option("--window", abm_cfg.estimation.window, "Induced-volatility window");
    abm_cmd->add_option("--stride", abm_cfg.estimation.stride, "Samples per observation block");

    // lob ---------------------------------------------------------------
    Common lob_c;
    lob::LobParams lob_p;
    std::string lob_trace, lob_placement = "literal";
    std::size_t lob_paths = 1, lob_window = 512, lob_stride = 32;
    auto* lob_cmd = app.add_subcommand("lob", "Random limit-order book (t,price)");
    add_common(lob_cmd, lob_c);
    lob_cmd->add_option("--steps", lob_p.steps, "Events after burn-in")->check(CLI::PositiveNumber);
    lob_cmd->add_option("--paths", lob_paths, "Independent runs; more than one writes <out>_<i>")->check(CLI::PositiveNumber);
    lob_cmd->add_option("--width", lob_p.half_width, "Half width w of the order window in slots");
    lob_cmd->add_option("--order-size", lob_p.order_size, "Limit order size n");
    lob_cmd->add_option("--slot-size", lob_p.slot_size, "Price slot Δp");
    lob_cmd->add_option("--initial-price", lob_p.initial_price, "Price at the end of burn-in");
    lob_cmd->add_option("--placement", lob_placement, "Limit order range")->check(CLI::IsMember({"literal", "sides"}));
    lob_cmd->add_option("--book-trace", lob_trace, "Per-event log file (step,event,slot,price)");
    lob_cmd->add_option("--window", lob_window, "Induced-volatility window for the summary estimate");
    lob_cmd->add_option("--stride", lob_stride, "Samples per observation block for the summary estimate");

    std::vector<std::string> args(argv + 1, argv + argc);
    try {
        args = expand_config(std::move(args));
    } catch (const std::exception& e) {
        std::cerr << json{{"error", e.what()}}.dump() << '\n';
        return 2;
    }
    std::reverse(args.begin(), args.end());
    try {
        app.parse(args);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    try {
        const std::string command = app.get_subcommands().front()->get_name();
        summary["command"] = command;

        if (fgn->parsed()) {
            const FgnMethod method = fgn_method == "circulant"         ? FgnMethod::circulant
                                     : fgn_method == "durbin-levinson" ? FgnMethod::durbin_levinson
                                                                       : FgnMethod::automatic;
            const FgnSeries s = generate_fgn(fgn_n, HurstExponent(fgn_h), fgn_spacing, fgn_c.seed, method);
            std::string text;
            if (fgn_c.format == "json") {
                text = json{{"hurst", fgn_h}, {"spacing", fgn_spacing}, {"values", s.values}}.dump() + "\n";
            } else {
                text = "index,value\n";
                for (std::size_t i = 0; i < s.values.size(); ++i) text += std::to_string(i) + "," + num(s.values[i]) + "\n";
            }
            const auto out = output_path(command, fgn_c);
            io::write_atomic(out, text);
            summary["seed"] = fgn_c.seed;
            summary["output"] = out;
            summary["samples"] = s.values.size();
        } else if (sim->parsed()) {
            ModelParams m = sim_m.params();
            const double dt = sim_dt > 0.0 ? sim_dt : m.delta;
            if (sim_identified) {
                m.coupling = DriverCoupling::identified_drivers;
                m.kprime = sim_kprime != 0.0 ? sim_kprime : -calibrated_kprime(m, dt, sim_history);
            }
            const std::string base = output_path(command, sim_c);
            std::vector<std::string> outs(sim_paths);
            parallel_for(sim_paths, [&](std::size_t i) {
                const std::uint64_t seed = sim_paths == 1 ? sim_c.seed : path_seed(sim_c.seed, i);
                const MarketPath p = sim_identified ? simulate_identified(m, sim_steps, dt, sim_spot, sim_history, seed)
                                                    : simulate_path(m, sim_steps, dt, sim_spot, seed);
                outs[i] = member_path(base, i, sim_paths);
                io::write_atomic(outs[i], render_path(p, sim_c.format));
            });
            summary["seed"] = sim_c.seed;
            summary["output"] = sim_paths == 1 ? json(outs.front()) : json(outs);
            summary["rows"] = sim_steps + 1;
        } else if (est->parsed()) {
            const MarketPath path = io::ingest_prices(est_in);
            EstimationOptions opts;
            opts.window = est_window;
            opts.stride = est_stride;
            opts.induced = {parse_estimator(est_estimator), est_detrend};
            opts.leverage_max_lag = est_lev;
            opts.acf_max_lag = est_acf;
            const EstimationReport r = estimate(path, opts);
            std::string text;
            if (est_c.format == "json") {
                text = io::report_to_json(r).dump(2) + "\n";
            } else {
                text = "lag,mean_abs_increment\n";
                for (std::size_t i = 0; i < r.scaling_lags.size(); ++i)
                    text += std::to_string(r.scaling_lags[i]) + "," + num(r.scaling_values[i]) + "\n";
            }
            const auto out = output_path(command, est_c);
            io::write_atomic(out, text);
            summary["input"] = est_in;
            summary["output"] = out;
            summary["hurst_hat"] = r.hurst_hat;
            summary["beta_hat"] = r.beta_hat;
        } else if (pdf_cmd->parsed()) {
            const ReturnDistParams p = ReturnDistParams::from_model(pdf_m.params(), pdf_tau);
            const double half = pdf_range * p.theta() * std::sqrt(pdf_tau);
            const double center = (p.mu - 0.5 * p.theta() * p.theta()) * pdf_tau;
            std::vector<double> rs(pdf_points), dens(pdf_points), tail(pdf_points);
            parallel_for(pdf_points, [&](std::size_t i) {
                rs[i] = center - half + 2.0 * half * static_cast<double>(i) / static_cast<double>(pdf_points - 1);
                dens[i] = pdf(rs[i], p);
                tail[i] = tail_lambda(rs[i], p) > 1.0 ? tail_asymptotic(rs[i], p) : std::numeric_limits<double>::quiet_NaN();
            });
            std::string text;
            if (pdf_c.format == "json") {
                json j;
                j["r"] = rs;
                j["pdf"] = dens;
                j["tail"] = tail;
                text = j.dump() + "\n";
            } else {
                text = "r,pdf,tail\n";
                for (std::size_t i = 0; i < pdf_points; ++i) text += num(rs[i]) + "," + num(dens[i]) + "," + num(tail[i]) + "\n";
            }
            const auto out = output_path(command, pdf_c);
            io::write_atomic(out, text);
            summary["output"] = out;
            summary["C"] = p.C();
            if (p.k > 0.0) {
                // Fitted log² coefficient against 1/C under two readings of the drift volatility.
                TailConvention mean_vol;
                mean_vol.central_vol = std::exp(p.beta + p.sigma_logvol() * p.sigma_logvol());
                summary["tail_coefficient_ratio"] = {{"theta", fit_log_tail(p, 1e3, 1e5).coefficient_ratio},
                                                     {"rms_vol", fit_log_tail(p, 1e3, 1e5, 41, {}, mean_vol).coefficient_ratio}};
            }
        } else if (pr->parsed()) {
            const ModelParams m = pr_m.params();
            const OptionInputs opt{pr_spot, pr_strike, pr_rate, pr_sigma, pr_tau};
            const VolDispersion disp = pr_alpha >= 0.0 ? VolDispersion{pr_alpha} : VolDispersion::from_model(m);
            json j;
            j["price"] = price(opt, disp);
            j["black_scholes"] = black_scholes(opt);
            j["implied_vol"] = implied_vol(j["price"].get<double>(), opt);
            j["alpha"] = disp.alpha;
            if (pr_paths > 0) {
                ModelParams mc = m;
                mc.beta = std::log(pr_sigma);
                const auto eff = effective_volatility(mc, pr_tau);
                const auto ref = monte_carlo_price(pr_spot, pr_strike, pr_rate, pr_tau, mc, pr_paths, pr_c.seed);
                j["effective_sigma"] = eff.sigma;
                j["effective_alpha"] = eff.alpha;
                j["effective_price"] = price({pr_spot, pr_strike, pr_rate, eff.sigma, pr_tau}, {eff.alpha});
                j["monte_carlo"] = ref.price;
                j["monte_carlo_stderr"] = ref.std_error;
            }
            std::string text;
            if (pr_c.format == "json") {
                text = j.dump(2) + "\n";
            } else {
                std::string head, row;
                for (const auto& [key, value] : j.items()) {
                    head += (head.empty() ? "" : ",") + key;
                    row += (row.empty() ? "" : ",") + num(value.get<double>());
                }
                text = head + "\n" + row + "\n";
            }
            const auto out = output_path(command, pr_c);
            io::write_atomic(out, text);
            summary["seed"] = pr_c.seed;
            summary["output"] = out;
            summary["price"] = j["price"];
        } else if (sm->parsed()) {
            const ModelParams m = sm_m.params();
            std::optional<VolDispersion> disp;
            if (sm_alpha >= 0.0) disp = VolDispersion{sm_alpha};
            const auto surf = smile_surface(linear_grid(sm_mlo, sm_mhi, sm_mn), linear_grid(sm_tlo, sm_thi, sm_tn), m,
                                            sm_sigma, sm_rate, disp);
            std::string text;
            if (sm_c.format == "json") {
                json arr = json::array();
                for (const auto& pt : surf)
                    arr.push_back({{"moneyness", pt.moneyness}, {"tau", pt.tau}, {"price", pt.price},
                                   {"implied_vol", pt.implied_vol}, {"delta_vs_bs", pt.delta_vs_bs}});
                text = arr.dump() + "\n";
            } else {
                text = "moneyness,tau,price,implied_vol,delta_vs_bs\n";
                for (const auto& pt : surf)
                    text += num(pt.moneyness) + "," + num(pt.tau) + "," + num(pt.price) + "," + num(pt.implied_vol) + "," +
                            num(pt.delta_vs_bs) + "\n";
            }
            const auto out = output_path(command, sm_c);
            io::write_atomic(out, text);
            summary["output"] = out;
            summary["points"] = surf.size();
        } else if (abm_cmd->parsed()) {
            abm_cfg.population = parse_population(abm_pop);
            abm_cfg.f.kind = abm_signal == "step" ? abm::SignalKind::step : abm::SignalKind::logistic;
            abm_evo.selection = abm_selection == "random" ? abm::Selection::random : abm::Selection::worst;
            if (abm_evolve) abm_cfg.evolution = abm_evo;
            const std::string base = output_path(command, abm_c);
            std::vector<json> runs(abm_paths);
            parallel_for(abm_paths, [&](std::size_t i) {
                abm::AbmConfig cfg = abm_cfg;
                cfg.seed = abm_paths == 1 ? abm_c.seed : path_seed(abm_c.seed, i);
                cfg.estimate = false;
                const abm::AbmRun run = abm::run_experiment(cfg);
                json info;
                info["output"] = member_path(base, i, abm_paths);
                info["excess_kurtosis"] = run.increments.excess_kurtosis;
                info["kurtosis_stderr"] = run.increments.kurtosis_stderr();
                try {
                    info["hurst_hat"] = estimate(run.path, cfg.estimation).hurst_hat;
                } catch (const InsufficientDataError&) {
                    info["hurst_hat"] = nullptr;
                }
                const auto it = run.final_shares.find(abm::kFundamental);
                info["fundamental_share"] = it == run.final_shares.end() ? 0.0 : it->second;
                std::string text;
                if (abm_c.format == "json") {
                    json j = path_json(run.path);
                    json shares = json::object();
                    for (const auto& [code, share] : run.final_shares) shares[std::to_string(code)] = share;
                    j["final_shares"] = shares;
                    j["fundamental_share"] = run.fundamental_share;
                    text = j.dump() + "\n";
                } else {
                    text = io::path_to_csv(run.path);
                }
                io::write_atomic(info["output"].get<std::string>(), text);
                runs[i] = std::move(info);
            });
            summary["seed"] = abm_c.seed;
            if (abm_paths == 1) {
                for (const auto& [key, value] : runs.front().items()) summary[key] = value;
            } else {
                summary["runs"] = runs;
            }
        } else if (lob_cmd->parsed()) {
            lob_p.placement = lob_placement == "sides" ? lob::Placement::sides_only : lob::Placement::literal;
            const std::string base = output_path(command, lob_c);
            std::vector<json> runs(lob_paths);
            parallel_for(lob_paths, [&](std::size_t i) {
                lob::LobParams p = lob_p;
                p.seed = lob_paths == 1 ? lob_c.seed : path_seed(lob_c.seed, i);
                const lob::LobRun run = lob::run_lob(p, !lob_trace.empty());
                json info;
                info["output"] = member_path(base, i, lob_paths);
                info["excess_kurtosis"] = stats::moments(run.path.log_returns()).excess_kurtosis;
                try {
                    info["hurst_hat"] = estimate(run.path, {.window = lob_window, .stride = lob_stride}).hurst_hat;
                } catch (const InsufficientDataError&) {
                    info["hurst_hat"] = nullptr;
                }
                io::write_atomic(info["output"].get<std::string>(), render_path(run.path, lob_c.format));
                if (!lob_trace.empty()) {
                    std::string text = "step,event,slot,price\n";
                    for (const auto& row : run.trace)
                        text += std::to_string(row.step) + "," + std::string(lob::to_string(row.event)) + "," +
                                std::to_string(row.slot) + "," + num(row.price) + "\n";
                    const std::string trace_path = member_path(lob_trace, i, lob_paths);
                    io::write_atomic(trace_path, text);
                    info["book_trace"] = trace_path;
                }
                runs[i] = std::move(info);
            });
            summary["seed"] = lob_c.seed;
            if (lob_paths == 1) {
                for (const auto& [key, value] : runs.front().items()) summary[key] = value;
            } else {
                summary["runs"] = runs;
            }
        }

        summary["wall_time_s"] = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        std::cout << summary.dump() << std::endl;
        return 0;
    } catch (const fracvol::Error& e) {
        std::cerr << json{{"error", e.what()}, {"kind", "domain"}}.dump() << '\n';
        return 1;
    } catch (const std::exception& e) {
        std::cerr << json{{"error", e.what()}, {"kind", "runtime"}}.dump() << '\n';
        return 1;
    }
}
