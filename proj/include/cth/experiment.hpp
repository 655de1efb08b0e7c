#pragma once

// Batch experiment driver: YAML configs, one task per run, JSON report plus
// optional CSV table in an output directory. Needs yaml-cpp and nlohmann/json.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <optional>
#include <ostream>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <yaml-cpp/yaml.h>

#include "json.hpp"

#include "cth/catalog.hpp"
#include "cth/cth.hpp"

namespace cth {

enum ExitCode : int { kOk = 0, kAssertionFailed = 1, kConfigError = 2, kHypothesisViolation = 3, kNumericalFailure = 4 };

class ConfigError : public std::runtime_error {
public:
    ConfigError(const std::string& msg, int line = -1, int column = -1)
        : std::runtime_error(line >= 0 ? "config:" + std::to_string(line + 1) + ":" + std::to_string(column + 1) +
                                             ": " + msg
                                       : "config: " + msg) {}
};

struct ModelConfig {
    std::string family = "bessel-kingman";
    double alpha = 0.5;
    double beta = 0.5;
    // custom family only
    std::string weight = "power";  // power: x^{2 alpha+1}; sinh-cosh: sinh^{2 alpha+1} cosh^{2 beta+1}
    double rho = 0.0;
    double a = 0.5;
    double K = 1.0;
    bool operator==(const ModelConfig&) const = default;
};

struct GridConfig {
    double x_max = 12.0;
    double lambda_max = 40.0;
    std::size_t nodes = 16;  // Gauss-Legendre points per panel
    double panel = 0.0;      // panel width beyond 1; 0 picks it from the grids' extents
    bool operator==(const GridConfig&) const = default;
};

/// Union of the task keys; each subcommand accepts its own subset.
struct TaskConfig {
    std::string name = "verify";
    // phi
    std::vector<double> lambdas{0.5, 1.0, 4.0};
    double x_end = 10.0;
    std::size_t samples = 201;
    // density
    double lambda_end = 40.0;
    // transform, multiplier
    std::string input = "gaussian:1:1";
    std::string symbol = "bessel:1";
    // verify
    std::string inequality = "hy";
    std::vector<double> p_list{4.0 / 3.0, 1.5, 2.0};
    std::vector<double> q_list{4.0, 3.0, 2.0};
    std::vector<double> b_list{1.75};
    std::string psi = "bessel:2";
    std::vector<std::string> inputs = gaussian_suite();
    std::vector<std::string> symbols = multiplier_suite();
    // heat-decay, embed
    double p = 4.0 / 3.0;
    double q = 4.0;
    double t_min = 1e-3;
    double t_max = 1e-1;
    std::size_t t_count = 9;
    double b = 0.8;
    // solve-heat, solve-wave
    double power = 2.0;
    double c = 2.0;
    double T = 0.0;  // 0: half the existence time
    std::size_t steps = 20;
    double tol = 1e-10;
    int max_iters = 50;
    std::string u0 = "gaussian:1:1";
    double u0_norm = 0.1;  // 0 keeps the named amplitude
    std::string u1 = "gaussian:0.6:1";
    double u1_norm = 0.02;
    std::string coeff = "const:1";
    double T_max = 2.0;
    double gamma = 0.0;  // > 3/2 enables the global check
    std::vector<double> T_list{1.0, 2.0, 4.0, 8.0};
    std::string global_coeff = "exp:0.01:1";

    bool operator==(const TaskConfig&) const = default;
};

struct ExperimentConfig {
    ModelConfig model;
    GridConfig grid;
    TaskConfig task;
    std::uint64_t seed = 42;
    std::string out_dir = "out";  // not part of the digest
    bool operator==(const ExperimentConfig&) const = default;
};

inline const std::vector<std::string>& task_names() {
    static const std::vector<std::string> names{"phi",        "density", "transform",  "verify",    "multiplier",
                                                "heat-decay", "embed",   "solve-heat", "solve-wave"};
    return names;
}

inline const std::vector<std::string>& task_keys(const std::string& task) {
    static const std::map<std::string, std::vector<std::string>> keys{
        {"phi", {"lambdas", "x_end", "samples"}},
        {"density", {"lambda_end", "samples"}},
        {"transform", {"input"}},
        {"verify", {"inequality", "p_list", "q_list", "b_list", "psi", "inputs", "symbols"}},
        {"multiplier", {"input", "symbol"}},
        {"heat-decay", {"p", "q", "t_min", "t_max", "t_count"}},
        {"embed", {"b", "p", "q"}},
        {"solve-heat", {"symbol", "power", "c", "T", "steps", "tol", "max_iters", "u0", "u0_norm"}},
        {"solve-wave",
         {"symbol", "power", "c", "T", "steps", "tol", "max_iters", "u0", "u0_norm", "u1", "u1_norm", "coeff", "T_max",
          "gamma", "T_list", "global_coeff"}},
    };
    const auto it = keys.find(task);
    if (it == keys.end()) throw ConfigError("unknown task '" + task + "'");
    return it->second;
}

namespace detail {

// Visits every task field by key so parsing and emitting share one table.
template <class V>
void visit_task(TaskConfig& t, V&& v) {
    v("lambdas", t.lambdas);
    v("x_end", t.x_end);
    v("samples", t.samples);
    v("lambda_end", t.lambda_end);
    v("input", t.input);
    v("symbol", t.symbol);
    v("inequality", t.inequality);
    v("p_list", t.p_list);
    v("q_list", t.q_list);
    v("b_list", t.b_list);
    v("psi", t.psi);
    v("inputs", t.inputs);
    v("symbols", t.symbols);
    v("p", t.p);
    v("q", t.q);
    v("t_min", t.t_min);
    v("t_max", t.t_max);
    v("t_count", t.t_count);
    v("b", t.b);
    v("power", t.power);
    v("c", t.c);
    v("T", t.T);
    v("steps", t.steps);
    v("tol", t.tol);
    v("max_iters", t.max_iters);
    v("u0", t.u0);
    v("u0_norm", t.u0_norm);
    v("u1", t.u1);
    v("u1_norm", t.u1_norm);
    v("coeff", t.coeff);
    v("T_max", t.T_max);
    v("gamma", t.gamma);
    v("T_list", t.T_list);
    v("global_coeff", t.global_coeff);
}

template <class T>
T read_as(const YAML::Node& n, const std::string& key) {
    try {
        return n.as<T>();
    } catch (const YAML::Exception&) {
        throw ConfigError("bad value for '" + key + "'", n.Mark().line, n.Mark().column);
    }
}

inline void check_keys(const YAML::Node& n, const std::set<std::string>& allowed, const std::string& where) {
    if (!n.IsMap()) throw ConfigError("'" + where + "' must be a mapping", n.Mark().line, n.Mark().column);
    for (const auto& kv : n) {
        const auto k = kv.first.as<std::string>();
        if (!allowed.count(k))
            throw ConfigError("unknown key '" + k + "' in '" + where + "'", kv.first.Mark().line,
                              kv.first.Mark().column);
    }
}

} // namespace detail

inline ExperimentConfig parse_config(const std::string& text) {
    YAML::Node root;
    try {
        root = YAML::Load(text);
    } catch (const YAML::Exception& e) {
        throw ConfigError(e.msg, e.mark.line, e.mark.column);
    }
    ExperimentConfig cfg;
    if (root.IsNull()) return cfg;
    detail::check_keys(root, {"model", "grid", "task", "seed", "output"}, "top level");
    if (auto m = root["model"]) {
        if (m["family"]) cfg.model.family = detail::read_as<std::string>(m["family"], "family");
        if (cfg.model.family == "custom")
            detail::check_keys(m, {"family", "alpha", "beta", "weight", "rho", "a", "K"}, "model");
        else
            detail::check_keys(m, {"family", "alpha", "beta"}, "model");
        if (m["alpha"]) cfg.model.alpha = detail::read_as<double>(m["alpha"], "alpha");
        if (m["beta"]) cfg.model.beta = detail::read_as<double>(m["beta"], "beta");
        if (m["weight"]) cfg.model.weight = detail::read_as<std::string>(m["weight"], "weight");
        if (m["rho"]) cfg.model.rho = detail::read_as<double>(m["rho"], "rho");
        if (m["a"]) cfg.model.a = detail::read_as<double>(m["a"], "a");
        if (m["K"]) cfg.model.K = detail::read_as<double>(m["K"], "K");
        if (cfg.model.family != "bessel-kingman" && cfg.model.family != "jacobi" && cfg.model.family != "custom")
            throw ConfigError("family must be bessel-kingman, jacobi or custom", m["family"].Mark().line,
                              m["family"].Mark().column);
        if (cfg.model.weight != "power" && cfg.model.weight != "sinh-cosh")
            throw ConfigError("weight must be power or sinh-cosh", m["weight"].Mark().line, m["weight"].Mark().column);
    }
    if (auto g = root["grid"]) {
        detail::check_keys(g, {"x_max", "lambda_max", "nodes", "panel"}, "grid");
        if (g["x_max"]) cfg.grid.x_max = detail::read_as<double>(g["x_max"], "x_max");
        if (g["lambda_max"]) cfg.grid.lambda_max = detail::read_as<double>(g["lambda_max"], "lambda_max");
        if (g["nodes"]) cfg.grid.nodes = detail::read_as<std::size_t>(g["nodes"], "nodes");
        if (g["panel"]) cfg.grid.panel = detail::read_as<double>(g["panel"], "panel");
    }
    if (auto t = root["task"]) {
        if (!t.IsMap()) throw ConfigError("'task' must be a mapping", t.Mark().line, t.Mark().column);
        if (!t["name"]) throw ConfigError("task needs a 'name'", t.Mark().line, t.Mark().column);
        cfg.task.name = detail::read_as<std::string>(t["name"], "name");
        const auto& names = task_names();
        if (std::find(names.begin(), names.end(), cfg.task.name) == names.end())
            throw ConfigError("unknown task '" + cfg.task.name + "'", t["name"].Mark().line, t["name"].Mark().column);
        const auto& keys = task_keys(cfg.task.name);
        std::set<std::string> allowed(keys.begin(), keys.end());
        allowed.insert("name");
        detail::check_keys(t, allowed, "task");
        detail::visit_task(cfg.task, [&](const std::string& key, auto& field) {
            if (t[key]) field = detail::read_as<std::decay_t<decltype(field)>>(t[key], key);
        });
    }
    if (auto s = root["seed"]) cfg.seed = detail::read_as<std::uint64_t>(s, "seed");
    if (auto o = root["output"]) {
        detail::check_keys(o, {"dir"}, "output");
        if (o["dir"]) cfg.out_dir = detail::read_as<std::string>(o["dir"], "dir");
    }
    return cfg;
}

inline ExperimentConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot read '" + path + "'");
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_config(ss.str());
}

/// Canonical YAML. Only the keys of the configured task are written; the
/// output block is left out when `with_output` is false.
inline std::string serialize_config(const ExperimentConfig& cfg, bool with_output = true) {
    YAML::Emitter out;
    out.SetDoublePrecision(17);
    out << YAML::BeginMap;
    out << YAML::Key << "model" << YAML::Value << YAML::BeginMap;
    out << YAML::Key << "family" << YAML::Value << cfg.model.family;
    out << YAML::Key << "alpha" << YAML::Value << cfg.model.alpha;
    out << YAML::Key << "beta" << YAML::Value << cfg.model.beta;
    if (cfg.model.family == "custom") {
        out << YAML::Key << "weight" << YAML::Value << cfg.model.weight;
        out << YAML::Key << "rho" << YAML::Value << cfg.model.rho;
        out << YAML::Key << "a" << YAML::Value << cfg.model.a;
        out << YAML::Key << "K" << YAML::Value << cfg.model.K;
    }
    out << YAML::EndMap;
    out << YAML::Key << "grid" << YAML::Value << YAML::BeginMap;
    out << YAML::Key << "x_max" << YAML::Value << cfg.grid.x_max;
    out << YAML::Key << "lambda_max" << YAML::Value << cfg.grid.lambda_max;
    out << YAML::Key << "nodes" << YAML::Value << cfg.grid.nodes;
    out << YAML::Key << "panel" << YAML::Value << cfg.grid.panel;
    out << YAML::EndMap;
    out << YAML::Key << "task" << YAML::Value << YAML::BeginMap;
    out << YAML::Key << "name" << YAML::Value << cfg.task.name;
    const auto& keys = task_keys(cfg.task.name);
    auto task = cfg.task;
    detail::visit_task(task, [&](const std::string& key, auto& field) {
        if (std::find(keys.begin(), keys.end(), key) == keys.end()) return;
        out << YAML::Key << key << YAML::Value;
        using F = std::decay_t<decltype(field)>;
        if constexpr (std::is_same_v<F, std::vector<double>> || std::is_same_v<F, std::vector<std::string>>)
            out << YAML::Flow << field;
        else
            out << field;
    });
    out << YAML::EndMap;
    out << YAML::Key << "seed" << YAML::Value << cfg.seed;
    if (with_output) {
        out << YAML::Key << "output" << YAML::Value << YAML::BeginMap;
        out << YAML::Key << "dir" << YAML::Value << cfg.out_dir;
        out << YAML::EndMap;
    }
    out << YAML::EndMap;
    return out.c_str();
}

/// FNV-1a over the canonical serialisation without the output block.
inline std::string config_digest(const ExperimentConfig& cfg) {
    std::uint64_t h = 1469598103934665603ull;
    for (unsigned char ch : serialize_config(cfg, false)) {
        h ^= ch;
        h *= 1099511628211ull;
    }
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

inline std::string fmt17(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

/// CSV table with a fixed header row.
class CsvTable {
public:
    explicit CsvTable(std::vector<std::string> header) : header_(std::move(header)) {}

    void row(const std::vector<std::string>& cells) {
        if (cells.size() != header_.size()) throw std::logic_error("csv: row width");
        rows_.push_back(cells);
    }

    std::string str() const {
        std::string s;
        auto line = [&](const std::vector<std::string>& r) {
            for (std::size_t i = 0; i < r.size(); ++i) s += (i ? "," : "") + r[i];
            s += '\n';
        };
        line(header_);
        for (const auto& r : rows_) line(r);
        return s;
    }

    bool empty() const { return rows_.empty(); }

private:
    std::vector<std::string> header_;
    std::vector<std::vector<std::string>> rows_;
};

struct Assertion {
    std::string name;
    bool pass = false;
    std::string detail;
};

struct TaskOutput {
    nlohmann::ordered_json results = nlohmann::ordered_json::object();
    std::vector<Assertion> assertions;
    std::vector<std::pair<std::string, CsvTable>> tables;  // file suffix, table

    void check(std::string name, bool pass, std::string detail = {}) {
        assertions.push_back({std::move(name), pass, std::move(detail)});
    }
};

struct RunOptions {
    std::string out_dir;  // overrides the config when non-empty
    unsigned threads = 1;
};

namespace detail {

inline HypergroupModel config_model(const ModelConfig& m) {
    if (m.family == "bessel-kingman") return make_bessel_kingman(m.alpha);
    if (m.family == "jacobi") return make_jacobi(m.alpha, m.beta);
    if (m.family != "custom") throw ConfigError("unknown family '" + m.family + "'");
    const double k = 2.0 * m.alpha + 1.0, n = 2.0 * m.beta + 1.0;
    if (m.weight == "power")
        return make_custom([k](double x) { return std::pow(x, k); }, [k](double x) { return k / x; }, m.alpha, m.rho,
                           m.a, m.K, "custom(power)");
    return make_custom([k, n](double x) { return std::pow(std::sinh(x), k) * std::pow(std::cosh(x), n); },
                       [k, n](double x) { return k / std::tanh(x) + n * std::tanh(x); }, m.alpha, m.rho, m.a, m.K,
                       "custom(sinh-cosh)");
}

/// Raw density of a custom expression form, calibrated before use.
inline RealFn custom_raw_density(const ModelConfig& m) {
    if (m.weight == "power") {
        const double e = 2.0 * m.alpha + 1.0;
        return [e](double l) { return std::pow(l, e); };
    }
    return [al = m.alpha, be = m.beta](double l) { return jacobi_c_inverse_sq(al, be, l); };
}

inline PanelLayout with_panel(PanelLayout l, double panel) {
    if (panel > 0.0) l.panel_width = panel;
    return l;
}

class Machinery {
public:
    Machinery(const ExperimentConfig& cfg, unsigned threads)
        : cfg_(cfg), threads_(threads), model_(config_model(cfg.model)) {}

    const HypergroupModel& model() const { return model_; }

    const HarmonicContext& ctx() {
        if (!ctx_) {
            const auto& g = cfg_.grid;
            if (!(g.x_max > 0.0 && g.lambda_max > 0.0 && g.nodes >= 2 && g.panel >= 0.0))
                throw ConfigError("grid: need x_max > 0, lambda_max > 0, nodes >= 2, panel >= 0");
            auto sx = make_spatial_grid(with_panel(spatial_layout(g.x_max, g.lambda_max, g.nodes), g.panel));
            auto sl = make_spectral_grid(with_panel(spectral_layout(g.x_max, g.lambda_max, g.nodes), g.panel));
            const CalibrationGrids cg{g.x_max, g.lambda_max, g.nodes, threads_};
            std::optional<SpectralDensity> sd;
            if (model_.family() == Family::BesselKingman)
                sd.emplace(density_bessel_kingman(model_.alpha()));
            else if (model_.family() == Family::Jacobi)
                sd.emplace(density_jacobi(model_.alpha(), model_.beta(), cg));
            else
                sd.emplace(calibrate(model_, custom_raw_density(cfg_.model), default_calibration_functions(), cg));
            ctx_.emplace(std::move(*sd), sx, sl, threads_);
        }
        return *ctx_;
    }

    unsigned threads() const { return threads_; }

private:
    const ExperimentConfig& cfg_;
    unsigned threads_;
    HypergroupModel model_;
    std::optional<HarmonicContext> ctx_;
};

inline nlohmann::ordered_json to_json(const InequalityReport& r) {
    return {{"inequality", r.inequality}, {"lhs", r.lhs}, {"rhs_core", r.rhs_core}, {"ratio", r.ratio},
            {"inputs", r.inputs}};
}

inline std::vector<double> linspace(double a, double b, std::size_t n) {
    std::vector<double> v(n);
    for (std::size_t i = 0; i < n; ++i) v[i] = n == 1 ? a : a + (b - a) * static_cast<double>(i) / (n - 1);
    return v;
}

inline std::vector<double> geomspace(double a, double b, std::size_t n) {
    std::vector<double> v(n);
    for (std::size_t i = 0; i < n; ++i) v[i] = n == 1 ? a : a * std::pow(b / a, static_cast<double>(i) / (n - 1));
    return v;
}

inline double rel_l2_error(const WeightedSignal& a, const WeightedSignal& b) {
    return l2_distance(a, b) / lp_norm(b, 2.0);
}

/// A named signal, or "csv:PATH" with columns x,f (header row, increasing x)
/// interpolated linearly onto the grid and set to zero beyond the last sample.
inline WeightedSignal input_signal(const HarmonicContext& ctx, const std::string& spec) {
    if (spec.rfind("csv:", 0) != 0) return ctx.sample(named_signal(spec));
    const std::string path = spec.substr(4);
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot read input '" + path + "'");
    std::vector<double> xs, fs;
    std::string line;
    std::getline(in, line);
    int row = 1;
    while (std::getline(in, line)) {
        ++row;
        if (line.empty()) continue;
        double x = 0.0, f = 0.0;
        if (std::sscanf(line.c_str(), "%lf,%lf", &x, &f) != 2)
            throw ConfigError(path + ":" + std::to_string(row) + ": expected 'x,f'");
        if (!xs.empty() && !(x > xs.back())) throw ConfigError(path + ":" + std::to_string(row) + ": x not increasing");
        xs.push_back(x);
        fs.push_back(f);
    }
    if (xs.size() < 2) throw ConfigError(path + ": need at least two samples");
    return ctx.sample([&](double x) {
        if (x < xs.front() || x > xs.back()) return x < xs.front() ? fs.front() : 0.0;
        const auto k = static_cast<std::size_t>(std::upper_bound(xs.begin(), xs.end(), x) - xs.begin());
        if (k >= xs.size()) return fs.back();
        const double t = (x - xs[k - 1]) / (xs[k] - xs[k - 1]);
        return (1.0 - t) * fs[k - 1] + t * fs[k];
    });
}

inline void collect_warnings(nlohmann::ordered_json& j, const std::vector<std::string>& w) {
    for (const auto& s : w) j["warnings"].push_back(s);
}

inline WeightedSignal scaled_signal(const HarmonicContext& ctx, const std::string& spec, double norm) {
    auto s = ctx.sample(named_signal(spec));
    if (norm > 0.0) {
        const double n = lp_norm(s, 2.0);
        if (n > 0.0)
            for (double& v : s.values) v *= norm / n;
    }
    return s;
}

// --- tasks ------------------------------------------------------------------

inline TaskOutput task_phi(const ExperimentConfig& cfg, Machinery& m) {
    const auto& t = cfg.task;
    if (t.samples < 2 || !(t.x_end > 0.0)) throw ConfigError("phi: need samples >= 2 and x_end > 0");
    TaskOutput out;
    EigenfunctionEvaluator ev(m.model());
    const auto xs = linspace(0.0, t.x_end, t.samples);
    CsvTable csv({"lambda", "x", "phi"});
    double worst_bound = 0.0, worst_oracle = 0.0;
    const bool bk = m.model().family() == Family::BesselKingman;
    for (double l : t.lambdas) {
        const auto phi = ev.evaluate_grid(l, xs);
        for (std::size_t i = 0; i < xs.size(); ++i) {
            csv.row({fmt17(l), fmt17(xs[i]), fmt17(phi[i])});
            worst_bound = std::max(worst_bound, std::abs(phi[i]));
            if (bk) worst_oracle = std::max(worst_oracle, std::abs(phi[i] - hankel_oracle(m.model().alpha(), l, xs[i])));
        }
    }
    out.results["max_abs_phi"] = worst_bound;
    out.check("characters bounded by 1", worst_bound <= 1.0 + 1e-8, "max |phi| = " + fmt17(worst_bound));
    if (bk) {
        out.results["max_error_vs_bessel"] = worst_oracle;
        out.check("normalised Bessel oracle within 1e-7", worst_oracle < 1e-7, "max error = " + fmt17(worst_oracle));
    }
    out.tables.emplace_back("", std::move(csv));
    return out;
}

inline TaskOutput task_density(const ExperimentConfig& cfg, Machinery& m) {
    const auto& t = cfg.task;
    if (t.samples < 2 || !(t.lambda_end > 0.0)) throw ConfigError("density: need samples >= 2 and lambda_end > 0");
    TaskOutput out;
    const auto& sd = m.ctx().density();
    CsvTable csv({"lambda", "density"});
    for (std::size_t i = 1; i <= t.samples; ++i) {
        const double l = t.lambda_end * static_cast<double>(i) / static_cast<double>(t.samples);
        csv.row({fmt17(l), fmt17(sd(l))});
    }
    const auto fit = fit_density_exponents(sd);
    const auto env = density_envelope(sd, m.model().a_exponent(), m.model().alpha(), m.model().K_crossover(),
                                      cfg.grid.lambda_max);
    out.results["C0"] = sd.C0();
    out.results["a_fit"] = fit.a_fit;
    out.results["alpha_fit"] = fit.alpha_fit;
    out.results["K_fit"] = fit.K_fit;
    out.results["envelope_spread"] = env.spread();
    out.results["plancherel_defect"] = plancherel_defect(m.ctx(), m.ctx().sample(named_signal("poly-gauss")));
    const double ta = 0.05 * std::max(std::abs(m.model().a_exponent()), 1.0);
    const double tal = 0.05 * std::max(std::abs(m.model().alpha()), 1.0);
    out.check("small-lambda exponent", std::abs(fit.a_fit - m.model().a_exponent()) <= ta, fmt17(fit.a_fit));
    out.check("large-lambda exponent", std::abs(fit.alpha_fit - m.model().alpha()) <= tal, fmt17(fit.alpha_fit));
    out.tables.emplace_back("", std::move(csv));
    return out;
}

inline TaskOutput task_transform(const ExperimentConfig& cfg, Machinery& m) {
    TaskOutput out;
    const auto& ctx = m.ctx();
    const auto f = input_signal(ctx, cfg.task.input);
    const auto F = ctx.forward(f);
    const auto back = ctx.inverse(F);
    CsvTable csv({"lambda", "transform"});
    for (std::size_t j = 0; j < F.size(); ++j) csv.row({fmt17(F.nodes()[j]), fmt17(F.values[j])});
    const double defect = plancherel_defect(ctx, f);
    const double rt = rel_l2_error(back, f);
    out.results["plancherel_defect"] = defect;
    out.results["round_trip_error"] = rt;
    collect_warnings(out.results, F.warnings);
    collect_warnings(out.results, back.warnings);
    out.check("plancherel defect < 1e-3", defect < 1e-3, fmt17(defect));
    out.check("round trip < 1e-4", rt < 1e-4, fmt17(rt));
    out.tables.emplace_back("", std::move(csv));
    return out;
}

inline bool is_dilation(const Probe& p) { return p.descriptor.rfind("dilation", 0) == 0; }

inline TaskOutput task_verify(const ExperimentConfig& cfg, Machinery& m) {
    const auto& t = cfg.task;
    TaskOutput out;
    const auto& ctx = m.ctx();
    auto reports = nlohmann::ordered_json::array();
    std::vector<WeightedSignal> fs;
    for (const auto& s : t.inputs) fs.push_back(ctx.sample(named_signal(s)));
    for (double p : t.p_list)
        if (!(p > 1.0 && p <= 2.0)) throw ConfigError("verify: p_list entries must lie in (1, 2]");

    if (t.inequality == "hy") {
        for (std::size_t k = 0; k < fs.size(); ++k)
            for (double p : t.p_list) {
                auto r = hy_report(ctx, fs[k], p);
                r.inputs = t.inputs[k] + " " + r.inputs;
                reports.push_back(to_json(r));
                out.check("hausdorff-young " + r.inputs, r.lhs <= (1.0 + 1e-3) * r.rhs_core, fmt17(r.ratio));
            }
    } else if (t.inequality == "paley") {
        const auto psi = named_psi(t.psi);
        for (std::size_t k = 0; k < fs.size(); ++k)
            for (double p : t.p_list) {
                auto r = paley_report(ctx, fs[k], psi, p);
                r.inputs = t.inputs[k] + " " + r.inputs;
                reports.push_back(to_json(r));
                out.check("paley envelope " + r.inputs, r.ratio <= 10.0, fmt17(r.ratio));
                if (p == 2.0) out.check("paley p=2 ratio " + r.inputs, std::abs(r.ratio - 1.0) <= 1e-3, fmt17(r.ratio));
            }
    } else if (t.inequality == "hyp") {
        const auto psi = named_psi(t.psi);
        for (std::size_t k = 0; k < fs.size(); ++k)
            for (double p : t.p_list) {
                const double pp = conjugate_exponent(p);
                const auto pal = paley_report(ctx, fs[k], psi, p);
                const auto hy = hy_report(ctx, fs[k], p);
                const auto lo = hyp_report(ctx, fs[k], psi, p, p);
                const auto hi = hyp_report(ctx, fs[k], psi, p, pp);
                for (const auto* r : {&lo, &hi}) {
                    auto j = to_json(*r);
                    j["inputs"] = t.inputs[k] + " " + r->inputs;
                    reports.push_back(j);
                }
                for (double b : t.b_list) {
                    if (!(b >= p && b <= pp)) continue;
                    auto j = to_json(hyp_report(ctx, fs[k], psi, p, b));
                    j["inputs"] = t.inputs[k] + " " + j["inputs"].get<std::string>();
                    reports.push_back(j);
                }
                const std::string tag = t.inputs[k] + " p=" + fmt17(p);
                const double d1 = std::abs(lo.lhs - pal.lhs) + std::abs(lo.rhs_core - pal.rhs_core);
                const double d2 = std::abs(hi.lhs - hy.lhs) + std::abs(hi.rhs_core - hy.rhs_core);
                out.check("hyp b=p matches paley " + tag, d1 <= 1e-10 * std::max(pal.lhs, pal.rhs_core), fmt17(d1));
                out.check("hyp b=p' matches hausdorff-young " + tag, d2 <= 1e-10 * std::max(hy.lhs, hy.rhs_core),
                          fmt17(d2));
            }
    } else if (t.inequality == "hormander") {
        if (t.p_list.size() != t.q_list.size()) throw ConfigError("verify: p_list and q_list differ in length");
        const auto probes = probe_family(ctx, cfg.seed);
        std::vector<Probe> dil;
        for (const auto& pr : probes)
            if (is_dilation(pr)) dil.push_back(pr);
        out.results["probes"] = probes.size();
        out.check("probe family has at least 32 members", probes.size() >= 32, std::to_string(probes.size()));
        for (const auto& name : t.symbols) {
            const auto h = named_symbol(name, m.model());
            for (std::size_t k = 0; k < t.p_list.size(); ++k) {
                const double p = t.p_list[k], q = t.q_list[k];
                if (!(q >= 2.0)) throw ConfigError("verify: q_list entries must be >= 2");
                const double bound = hormander_bound(h, ctx.density(), *ctx.spectral(), p, q);
                const auto est = empirical_opnorm(ctx, h, p, q, probes, m.threads());
                const auto d = empirical_opnorm(ctx, h, p, q, dil, m.threads());
                InequalityReport r = make_report("hormander", est.value, bound,
                                                 name + " p=" + fmt17(p) + " q=" + fmt17(q));
                auto j = to_json(r);
                j["argmax_probe"] = est.argmax;
                j["dilation_only"] = d.value;
                reports.push_back(j);
                out.check("multiplier envelope " + r.inputs, est.value <= 10.0 * bound, fmt17(r.ratio));
                if (name.rfind("bessel", 0) == 0 || name.rfind("rational", 0) == 0)
                    out.check("dilations reach 0.1 bound " + r.inputs, d.value >= 0.1 * bound,
                              fmt17(d.value / bound));
            }
        }
    } else {
        throw ConfigError("verify: inequality must be one of paley, hyp, hy, hormander");
    }
    out.results["reports"] = std::move(reports);
    return out;
}

inline TaskOutput task_multiplier(const ExperimentConfig& cfg, Machinery& m) {
    TaskOutput out;
    const auto& ctx = m.ctx();
    const auto f = input_signal(ctx, cfg.task.input);
    const auto h = named_symbol(cfg.task.symbol, m.model());
    const auto Tf = apply_multiplier(ctx, h, f);
    CsvTable csv({"x", "f", "Tf"});
    bool finite = true;
    for (std::size_t i = 0; i < f.size(); ++i) {
        csv.row({fmt17(f.nodes()[i]), fmt17(f.values[i]), fmt17(Tf.values[i])});
        finite = finite && std::isfinite(Tf.values[i]);
    }
    out.results["norm_f_2"] = lp_norm(f, 2.0);
    out.results["norm_Tf_2"] = lp_norm(Tf, 2.0);
    collect_warnings(out.results, Tf.warnings);
    out.check("output finite", finite);
    out.tables.emplace_back("", std::move(csv));
    return out;
}

inline TaskOutput task_heat_decay(const ExperimentConfig& cfg, Machinery& m) {
    const auto& t = cfg.task;
    if (!(t.t_min > 0.0 && t.t_max > t.t_min && t.t_count >= 2))
        throw ConfigError("heat-decay: need 0 < t_min < t_max and t_count >= 2");
    TaskOutput out;
    const auto ts = geomspace(t.t_min, t.t_max, t.t_count);
    const auto curve = heat_opnorm_curve(m.ctx(), t.p, t.q, ts, cfg.seed, m.threads());
    CsvTable csv({"t", "empirical", "bound", "branch", "closed_form_sup"});
    std::vector<double> lt, le, lb;
    bool monotone = true, envelope = true;
    for (std::size_t i = 0; i < curve.size(); ++i) {
        const auto& c = curve[i];
        csv.row({fmt17(c.t), fmt17(c.empirical), fmt17(c.bound), c.branch, fmt17(c.closed_form_sup)});
        if (i > 0 && c.bound > curve[i - 1].bound) monotone = false;
        if (!(c.empirical <= 10.0 * c.bound)) envelope = false;
        if (c.branch != "small" && c.branch != "large") out.results["gap_times"].push_back(c.t);
        lt.push_back(std::log(c.t));
        le.push_back(std::log(c.empirical));
        lb.push_back(std::log(c.closed_form_sup));
    }
    const double e = 1.0 / t.p - 1.0 / t.q;
    out.results["branch_small_t_slope"] = -2.0 * (m.model().alpha() + 1.0) * e;
    out.results["closed_form_slope"] = fit_line(lt, lb).slope;
    out.results["empirical_slope"] = fit_line(lt, le).slope;
    out.check("bound monotone decreasing in t", monotone);
    out.check("empirical <= 10 bound", envelope);
    out.tables.emplace_back("", std::move(csv));
    return out;
}

inline TaskOutput task_embed(const ExperimentConfig& cfg, Machinery& m) {
    const auto& t = cfg.task;
    TaskOutput out;
    const auto v = sobolev_check(t.b, m.model(), t.p, t.q);
    out.results["b"] = t.b;
    out.results["threshold"] = v.threshold;
    out.results["verdict"] = v.verdict;
    out.results["margin"] = v.margin;
    out.results["growth"] = v.growth;
    out.results["reason"] = v.reason;
    if (std::abs(v.margin) > 1e-2 && !(t.p == 2.0 && t.q == 2.0))
        out.check("verdict agrees with threshold", v.verdict == (v.margin > 0.0));
    return out;
}

inline nlohmann::ordered_json run_json(const PicardRun& r) {
    nlohmann::ordered_json j;
    j["T_star"] = r.T_star;
    j["T"] = r.times.back();
    j["steps"] = r.times.size() - 1;
    j["iterations"] = r.iterations;
    j["residuals"] = r.residuals;
    j["converged"] = r.converged;
    j["contraction"] = r.contraction;
    j["set_radius"] = r.set_radius;
    std::vector<int> trace;
    for (bool b : r.in_set) trace.push_back(b ? 1 : 0);
    j["in_set"] = trace;
    std::vector<double> norms;
    for (const auto& s : r.u) norms.push_back(lp_norm(s, 2.0));
    j["l2_norms"] = norms;
    j["beyond_T_star"] = r.beyond_T_star;
    j["notes"] = r.notes;
    return j;
}

inline CsvTable snapshots(const PicardRun& r) {
    CsvTable csv({"t", "x", "u"});
    for (std::size_t m = 0; m < r.u.size(); ++m)
        for (std::size_t i = 0; i < r.u[m].size(); ++i)
            csv.row({fmt17(r.times[m]), fmt17(r.u[m].nodes()[i]), fmt17(r.u[m].values[i])});
    return csv;
}

inline PicardOptions picard_options(const TaskConfig& t) {
    if (t.steps == 0 || t.max_iters <= 0 || !(t.tol > 0.0)) throw ConfigError("solve: need steps, max_iters, tol > 0");
    PicardOptions o;
    o.steps = t.steps;
    o.tol = t.tol;
    o.max_iters = t.max_iters;
    return o;
}

inline TaskOutput task_solve_heat(const ExperimentConfig& cfg, Machinery& m) {
    const auto& t = cfg.task;
    TaskOutput out;
    const auto& ctx = m.ctx();
    const auto u0 = scaled_signal(ctx, t.u0, t.u0_norm);
    const auto B = named_symbol(t.symbol, m.model());
    const double n0 = lp_norm(u0, 2.0);
    const double T = t.T > 0.0 ? t.T : 0.5 * heat_t_star(n0, t.c, t.power);
    if (!std::isfinite(T)) throw ConfigError("solve-heat: zero data needs an explicit T");
    const auto run = solve_heat(ctx, B, t.power, u0, T, t.c, picard_options(t));
    out.results = run_json(run);
    if (n0 > 0.0) out.results["T_star_unit_power"] = heat_t_star_unit_power(n0, t.c, t.power);
    out.check("converged", run.converged, std::to_string(run.iterations) + " iterations");
    if (!run.beyond_T_star) out.check("stays in S_c", run.all_in_set());
    out.tables.emplace_back("_snapshots", snapshots(run));
    return out;
}

inline TaskOutput task_solve_wave(const ExperimentConfig& cfg, Machinery& m) {
    const auto& t = cfg.task;
    TaskOutput out;
    const auto& ctx = m.ctx();
    const auto u0 = scaled_signal(ctx, t.u0, t.u0_norm);
    const auto u1 = scaled_signal(ctx, t.u1, t.u1_norm);
    const auto B = named_symbol(t.symbol, m.model());
    const auto b = named_coefficient(t.coeff);
    if (!(t.T_max > 0.0)) throw ConfigError("solve-wave: need T_max > 0");
    const auto o = picard_options(t);
    const double bn = b_l2(b, t.T_max, o.steps);
    double T = t.T;
    if (!(T > 0.0)) {
        const double ts = bn > 0.0 ? wave_t_star(lp_norm(u0, 2.0), lp_norm(u1, 2.0), bn, t.c, t.power) : INFINITY;
        T = 0.5 * std::min(ts, t.T_max);
    }
    const auto run = solve_wave(ctx, B, t.power, b, u0, u1, T, t.c, o, t.T_max);
    out.results = run_json(run);
    out.results["b_l2"] = bn;
    out.check("converged", run.converged, std::to_string(run.iterations) + " iterations");
    if (!run.beyond_T_star) out.check("stays in Q_c", run.all_in_set());
    if (t.gamma > 0.0) {
        const auto rep = wave_global_check(ctx, t.gamma, named_coefficient(t.global_coeff), u0, B, t.power, t.T_list,
                                           t.c, o);
        auto& g = out.results["global"];
        g["gamma"] = rep.gamma;
        g["gamma0"] = rep.gamma0;
        g["hypothesis_ok"] = rep.hypothesis_ok;
        g["halvings"] = rep.halvings;
        g["pass"] = rep.pass;
        g["diagnostic"] = rep.diagnostic;
        for (const auto& e : rep.entries)
            g["entries"].push_back({{"T", e.T}, {"sup_norm_sq", e.sup_norm_sq}, {"bound", e.bound}, {"pass", e.pass}});
        if (!rep.hypothesis_ok) throw HypothesisError("solve-wave global check: " + rep.diagnostic);
        out.check("global bound after smallness scan", rep.pass, std::to_string(rep.halvings) + " halvings");
    }
    out.tables.emplace_back("_snapshots", snapshots(run));
    return out;
}

inline void write_file(const std::filesystem::path& p, const std::string& s) {
    std::ofstream f(p, std::ios::binary);
    if (!f) throw std::runtime_error("cannot write " + p.string());
    f << s;
}

} // namespace detail

struct RunResult {
    int exit_code = kOk;
    std::vector<std::string> files;
    std::string error;
};

/// Runs the configured task and writes <out>/<task>.json (and .csv tables).
inline RunResult run(const ExperimentConfig& cfg, const RunOptions& opts = {}, std::ostream* log = nullptr) {
    RunResult res;
    auto fail = [&](int code, const std::string& what) {
        res.exit_code = code;
        res.error = what;
        if (log) *log << "error: " << what << "\n";
        return res;
    };
    try {
        task_keys(cfg.task.name);
        detail::Machinery m(cfg, std::max(1u, opts.threads));
        TaskOutput out;
        const auto& n = cfg.task.name;
        if (n == "phi") out = detail::task_phi(cfg, m);
        else if (n == "density") out = detail::task_density(cfg, m);
        else if (n == "transform") out = detail::task_transform(cfg, m);
        else if (n == "verify") out = detail::task_verify(cfg, m);
        else if (n == "multiplier") out = detail::task_multiplier(cfg, m);
        else if (n == "heat-decay") out = detail::task_heat_decay(cfg, m);
        else if (n == "embed") out = detail::task_embed(cfg, m);
        else if (n == "solve-heat") out = detail::task_solve_heat(cfg, m);
        else out = detail::task_solve_wave(cfg, m);

        const std::filesystem::path dir = opts.out_dir.empty() ? cfg.out_dir : opts.out_dir;
        std::filesystem::create_directories(dir);
        nlohmann::ordered_json report;
        report["task"] = n;
        report["config_digest"] = config_digest(cfg);
        report["results"] = out.results;
        auto& asr = report["assertions"] = nlohmann::ordered_json::array();
        bool all = true;
        for (const auto& a : out.assertions) {
            asr.push_back(nlohmann::ordered_json{{"name", a.name}, {"pass", a.pass}, {"detail", a.detail}});
            all = all && a.pass;
            if (log && !a.pass) *log << "assertion failed: " << a.name << " (" << a.detail << ")\n";
        }
        report["config"] = serialize_config(cfg, false);
        const auto json_path = dir / (n + ".json");
        detail::write_file(json_path, report.dump(2) + "\n");
        res.files.push_back(json_path.string());
        for (const auto& [suffix, table] : out.tables) {
            const auto p = dir / (n + suffix + ".csv");
            detail::write_file(p, table.str());
            res.files.push_back(p.string());
        }
        res.exit_code = all ? kOk : kAssertionFailed;
        return res;
    } catch (const ConfigError& e) {
        return fail(kConfigError, e.what());
    } catch (const HypothesisError& e) {
        return fail(kHypothesisViolation, e.what());
    } catch (const NumericalError& e) {
        return fail(kNumericalFailure, e.what());
    } catch (const std::invalid_argument& e) {
        return fail(kConfigError, e.what());
    } catch (const std::exception& e) {
        return fail(kNumericalFailure, e.what());
    }
}

} // namespace cth
