#include <unistd.h>

#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <gtest/gtest.h>

#include "cth/experiment.hpp"

using namespace cth;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name) {
    const auto p = fs::temp_directory_path() / ("cth_test_" + name + "_" + std::to_string(::getpid()));
    fs::remove_all(p);
    return p;
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

std::string config_error(const std::string& text) {
    try {
        parse_config(text);
    } catch (const ConfigError& e) {
        return e.what();
    }
    return "";
}

} // namespace

TEST(Config, DefaultsAndRoundTrip) {
    const auto d = parse_config("");
    EXPECT_EQ(d.model.family, "bessel-kingman");
    EXPECT_EQ(d.task.name, "verify");
    EXPECT_EQ(d.seed, 42u);

    const std::string text = R"(model:
  family: jacobi
  alpha: 1.5
  beta: 0.5
grid:
  x_max: 16
task:
  name: heat-decay
  p: 1.5
  q: 3
  t_count: 5
seed: 7
output:
  dir: somewhere
)";
    const auto cfg = parse_config(text);
    EXPECT_EQ(cfg.model.family, "jacobi");
    EXPECT_EQ(cfg.grid.x_max, 16.0);
    EXPECT_EQ(cfg.task.t_count, 5u);
    EXPECT_EQ(cfg.out_dir, "somewhere");
    const auto again = parse_config(serialize_config(cfg));
    EXPECT_EQ(again, cfg);
    EXPECT_EQ(serialize_config(again), serialize_config(cfg));

    for (const auto& name : task_names()) {
        ExperimentConfig c;
        c.task.name = name;
        c.task.p = 1.0 / 3.0 + 1.0;
        EXPECT_EQ(parse_config(serialize_config(c)).task, c.task) << name;
    }
}

TEST(Config, CustomModelRoundTrip) {
    const auto cfg = parse_config(R"(model:
  family: custom
  weight: sinh-cosh
  alpha: 0.5
  beta: 0.5
  rho: 2
  a: 0.5
  K: 1
)");
    EXPECT_EQ(cfg.model.weight, "sinh-cosh");
    EXPECT_EQ(parse_config(serialize_config(cfg)), cfg);
    // custom-only keys are refused for the built-in families
    EXPECT_NE(config_error("model:\n  family: jacobi\n  rho: 2\n"), "");
}

TEST(Config, ErrorsCarryLineAndColumn) {
    EXPECT_NE(config_error("task:\n  name: verify\n  bogus: 1\n").find("config:3:"), std::string::npos);
    EXPECT_NE(config_error("model:\n  alpha: [1, 2\n").find("config:"), std::string::npos);
    EXPECT_NE(config_error("colour: red\n").find("colour"), std::string::npos);
    EXPECT_NE(config_error("task:\n  name: nope\n").find("config:2:"), std::string::npos);
    EXPECT_NE(config_error("model:\n  alpha: half\n").find("alpha"), std::string::npos);
    EXPECT_NE(config_error("model:\n  family: euclid\n"), "");
    // keys of another task are not accepted
    EXPECT_NE(config_error("task:\n  name: embed\n  t_min: 0.1\n").find("t_min"), std::string::npos);
}

TEST(Config, DigestTracksSemanticFields) {
    ExperimentConfig a;
    const auto base = config_digest(a);
    EXPECT_EQ(base.size(), 16u);
    auto b = a;
    b.out_dir = "elsewhere";
    EXPECT_EQ(config_digest(b), base);
    b = a;
    b.seed = 43;
    EXPECT_NE(config_digest(b), base);
    b = a;
    b.model.alpha = 0.5000000001;
    EXPECT_NE(config_digest(b), base);
    b = a;
    b.task.inequality = "paley";
    EXPECT_NE(config_digest(b), base);
    b = a;
    b.grid.nodes = 20;
    EXPECT_NE(config_digest(b), base);
    // fields of a task that is not selected play no part
    b = a;
    b.task.t_min = 0.5;
    EXPECT_EQ(config_digest(b), base);
}

TEST(Run, ExitCodes) {
    const auto dir = scratch("exit");
    ExperimentConfig cfg;
    cfg.task.name = "embed";
    EXPECT_EQ(run(cfg, {dir.string()}).exit_code, kOk);

    cfg.model.alpha = -2.0;
    EXPECT_EQ(run(cfg, {dir.string()}).exit_code, kHypothesisViolation);

    cfg = ExperimentConfig{};
    cfg.task.name = "heat-decay";
    cfg.task.t_min = 0.5;
    cfg.task.t_max = 0.1;
    EXPECT_EQ(run(cfg, {dir.string()}).exit_code, kConfigError);

    cfg = ExperimentConfig{};
    cfg.task.name = "solve-heat";
    cfg.task.u0_norm = 50.0;
    cfg.task.T = 10.0;
    cfg.task.max_iters = 3;
    EXPECT_EQ(run(cfg, {dir.string()}).exit_code, kNumericalFailure);
    fs::remove_all(dir);
}

TEST(Run, ReportShape) {
    const auto dir = scratch("shape");
    ExperimentConfig cfg;
    cfg.task.name = "embed";
    const auto r = run(cfg, {dir.string()});
    ASSERT_EQ(r.exit_code, kOk);
    const auto j = nlohmann::json::parse(slurp(dir / "embed.json"));
    for (const char* k : {"task", "config_digest", "results", "assertions", "config"}) EXPECT_TRUE(j.contains(k)) << k;
    EXPECT_EQ(j["config_digest"], config_digest(cfg));
    EXPECT_EQ(parse_config(j["config"].get<std::string>()).task, cfg.task);
    EXPECT_DOUBLE_EQ(j["results"]["threshold"].get<double>(), 0.75);
    EXPECT_TRUE(j["results"]["verdict"].get<bool>());
    fs::remove_all(dir);
}

TEST(Run, HeatDecayCsv) {
    const auto dir = scratch("heat");
    ExperimentConfig cfg;
    cfg.task.name = "heat-decay";
    cfg.task.t_count = 5;
    ASSERT_EQ(run(cfg, {dir.string()}).exit_code, kOk);
    std::istringstream csv(slurp(dir / "heat-decay.csv"));
    std::string line;
    std::getline(csv, line);
    EXPECT_EQ(line, "t,empirical,bound,branch,closed_form_sup");
    double prev = INFINITY;
    int rows = 0;
    while (std::getline(csv, line)) {
        std::vector<std::string> cells;
        std::stringstream ls(line);
        for (std::string c; std::getline(ls, c, ',');) cells.push_back(c);
        ASSERT_EQ(cells.size(), 5u);
        const double bound = std::stod(cells[2]);
        EXPECT_LT(bound, prev);
        prev = bound;
        ++rows;
    }
    EXPECT_EQ(rows, 5);
    fs::remove_all(dir);
}

TEST(Run, CsvInputSignal) {
    const auto dir = scratch("csvin");
    fs::create_directories(dir);
    {
        std::ofstream f(dir / "in.csv");
        f << "x,f\n";
        for (int i = 0; i <= 800; ++i) {
            const double x = 0.01 * i;
            f << x << "," << std::exp(-x * x) << "\n";
        }
    }
    ExperimentConfig cfg;
    cfg.task.name = "multiplier";
    cfg.task.input = "csv:" + (dir / "in.csv").string();
    EXPECT_EQ(run(cfg, {dir.string()}).exit_code, kOk);
    EXPECT_TRUE(fs::exists(dir / "multiplier.csv"));

    {
        std::ofstream f(dir / "bad.csv");
        f << "x,f\n0,1\n0.5,zz\n";
    }
    cfg.task.input = "csv:" + (dir / "bad.csv").string();
    EXPECT_EQ(run(cfg, {dir.string()}).exit_code, kConfigError);
    cfg.task.input = "csv:" + (dir / "missing.csv").string();
    EXPECT_EQ(run(cfg, {dir.string()}).exit_code, kConfigError);
    fs::remove_all(dir);
}

TEST(Run, ByteIdenticalAcrossThreads) {
    ExperimentConfig cfg;
    cfg.task.name = "heat-decay";
    cfg.task.t_count = 4;
    std::vector<std::string> json, csv;
    for (unsigned threads : {1u, 8u, 1u}) {
        const auto dir = scratch("det" + std::to_string(json.size()));
        RunOptions o;
        o.out_dir = dir.string();
        o.threads = threads;
        ASSERT_EQ(run(cfg, o).exit_code, kOk);
        json.push_back(slurp(dir / "heat-decay.json"));
        csv.push_back(slurp(dir / "heat-decay.csv"));
        fs::remove_all(dir);
    }
    EXPECT_EQ(json[0], json[1]);
    EXPECT_EQ(json[0], json[2]);
    EXPECT_EQ(csv[0], csv[1]);
    EXPECT_EQ(csv[0], csv[2]);
}
