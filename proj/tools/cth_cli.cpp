// Command-line front end for the experiment driver.

#include <iostream>
#include <map>
#include <string>

#include "CLI11.hpp"

#include "cth/experiment.hpp"

namespace {

struct Flags {
    std::string config, out_dir, family;
    std::uint64_t seed = 0;
    unsigned threads = 1;
    double alpha = 0, beta = 0;
    // task overrides
    std::string inequality, symbol, input, u0, u1, coeff, psi;
    double p = 0, q = 0, b = 0, c = 0, T = 0, tol = 0, gamma = 0, t_min = 0, t_max = 0, T_max = 0;
    std::size_t steps = 0, t_count = 0;
};

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Fourier analysis on Chebli-Trimeche hypergroups: experiments and checks"};
    app.fallthrough();
    app.require_subcommand(0, 1);
    Flags f;
    auto* o_config = app.add_option("--config", f.config, "YAML experiment config");
    auto* o_seed = app.add_option("--seed", f.seed, "seed for the probe family");
    app.add_option("--threads", f.threads, "worker threads")->check(CLI::Range(1u, 256u));
    app.add_option("--out-dir", f.out_dir, "directory for JSON/CSV artifacts");
    auto* o_family = app.add_option("--family,--model", f.family, "bessel-kingman, jacobi or custom");
    auto* o_alpha = app.add_option("--alpha", f.alpha, "model alpha");
    auto* o_beta = app.add_option("--beta", f.beta, "model beta (jacobi)");
    double xmax = 0, lmax = 0;
    std::size_t nodes = 0;
    auto* o_xmax = app.add_option("--xmax", xmax, "spatial truncation");
    auto* o_lmax = app.add_option("--lmax", lmax, "spectral truncation");
    auto* o_nodes = app.add_option("--nodes", nodes, "Gauss-Legendre points per panel");

    std::map<std::string, CLI::App*> subs;
    for (const auto& name : cth::task_names()) subs[name] = app.add_subcommand(name, "run the '" + name + "' task");

    std::map<std::string, CLI::Option*> ov;
    auto opt = [&](const std::string& sub, const std::string& flag, auto& var, const std::string& help) {
        ov[sub + flag] = subs[sub]->add_option(flag, var, help);
    };
    opt("verify", "--inequality", f.inequality, "paley, hyp, hy or hormander");
    opt("verify", "--psi", f.psi, "weight function psi, e.g. bessel:2");
    opt("multiplier", "--symbol", f.symbol, "symbol, e.g. bessel:1 or heat:0.1");
    opt("multiplier", "--input", f.input, "signal, e.g. gaussian:1:1");
    opt("transform", "--input", f.input, "signal, e.g. gaussian:1:1");
    opt("heat-decay", "--p", f.p, "source exponent");
    opt("heat-decay", "--q", f.q, "target exponent");
    opt("heat-decay", "--t-min", f.t_min, "first time");
    opt("heat-decay", "--t-max", f.t_max, "last time");
    opt("heat-decay", "--t-count", f.t_count, "number of times");
    opt("embed", "--b", f.b, "Sobolev order");
    opt("embed", "--p", f.p, "source exponent");
    opt("embed", "--q", f.q, "target exponent");
    for (const std::string s : {"solve-heat", "solve-wave"}) {
        opt(s, "--symbol", f.symbol, "symbol of B");
        opt(s, "--p", f.p, "power of the nonlinearity");
        opt(s, "--c", f.c, "set constant c >= 1");
        opt(s, "--T", f.T, "final time (default: half the existence time)");
        opt(s, "--steps", f.steps, "time steps");
        opt(s, "--tol", f.tol, "Picard tolerance");
        opt(s, "--u0", f.u0, "initial datum, e.g. gaussian:1:0.1");
    }
    opt("solve-wave", "--u1", f.u1, "initial velocity");
    opt("solve-wave", "--b-coeff", f.coeff, "time coefficient, e.g. const:1");
    opt("solve-wave", "--T-max", f.T_max, "horizon for ||b||");
    opt("solve-wave", "--gamma", f.gamma, "run the global check with this gamma");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : cth::kConfigError;
    }

    cth::ExperimentConfig cfg;
    try {
        if (*o_config) cfg = cth::load_config(f.config);
    } catch (const cth::ConfigError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return cth::kConfigError;
    }

    std::string sub;
    for (const auto& [name, s] : subs)
        if (s->parsed()) sub = name;
    if (!sub.empty()) {
        if (*o_config && cfg.task.name != sub) {
            std::cerr << "error: config task '" << cfg.task.name << "' does not match subcommand '" << sub << "'\n";
            return cth::kConfigError;
        }
        cfg.task.name = sub;
    }
    auto set = [&](const std::string& flag, auto& field, const auto& value) {
        auto it = ov.find(cfg.task.name + flag);
        if (it != ov.end() && *it->second) field = value;
    };
    set("--inequality", cfg.task.inequality, f.inequality);
    set("--psi", cfg.task.psi, f.psi);
    set("--symbol", cfg.task.symbol, f.symbol);
    set("--input", cfg.task.input, f.input);
    set("--t-min", cfg.task.t_min, f.t_min);
    set("--t-max", cfg.task.t_max, f.t_max);
    set("--t-count", cfg.task.t_count, f.t_count);
    set("--b", cfg.task.b, f.b);
    set("--q", cfg.task.q, f.q);
    if (cfg.task.name == "solve-heat" || cfg.task.name == "solve-wave")
        set("--p", cfg.task.power, f.p);
    else
        set("--p", cfg.task.p, f.p);
    set("--c", cfg.task.c, f.c);
    set("--T", cfg.task.T, f.T);
    set("--steps", cfg.task.steps, f.steps);
    set("--tol", cfg.task.tol, f.tol);
    set("--u0", cfg.task.u0, f.u0);
    set("--u1", cfg.task.u1, f.u1);
    set("--b-coeff", cfg.task.coeff, f.coeff);
    set("--T-max", cfg.task.T_max, f.T_max);
    set("--gamma", cfg.task.gamma, f.gamma);
    if (*o_seed) cfg.seed = f.seed;
    if (*o_family) cfg.model.family = f.family;
    if (*o_alpha) cfg.model.alpha = f.alpha;
    if (*o_beta) cfg.model.beta = f.beta;
    if (*o_xmax) cfg.grid.x_max = xmax;
    if (*o_lmax) cfg.grid.lambda_max = lmax;
    if (*o_nodes) cfg.grid.nodes = nodes;

    cth::RunOptions ro;
    ro.out_dir = f.out_dir;
    ro.threads = f.threads;
    const auto res = cth::run(cfg, ro, &std::cerr);
    for (const auto& file : res.files) std::cout << file << "\n";
    return res.exit_code;
}
