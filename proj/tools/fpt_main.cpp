#include <cstdint>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "fpt/report.hpp"

namespace {

struct CliOverrides {
    std::string config_path;
    std::optional<std::uint64_t> seed;
    std::optional<std::size_t> n_max;
    std::optional<std::string> out_dir;
    std::optional<int> threads;
};

void add_common_flags(CLI::App* cmd, CliOverrides& o) {
    cmd->add_option("--config", o.config_path, "JSON experiment config")
        ->required()
        ->check(CLI::ExistingFile);
    cmd->add_option("--seed", o.seed, "Override the MC seed");
    cmd->add_option("--n-max", o.n_max, "Override the horizon");
    cmd->add_option("--out", o.out_dir, "Override the output directory");
    cmd->add_option("--threads", o.threads, "Override the thread count (0 = all cores)");
}

int run(const CliOverrides& o, fpt::Engine engine) {
    nlohmann::json j;
    {
        std::ifstream in(o.config_path);
        if (!in) {
            std::cerr << "config error: cannot open " << o.config_path << "\n";
            return 2;
        }
        try {
            in >> j;
        } catch (const nlohmann::json::exception& e) {
            std::cerr << "config error: " << e.what() << "\n";
            return 2;
        }
    }
    try {
        fpt::ExperimentConfig cfg = fpt::ExperimentConfig::from_json(j);
        cfg.engine = engine;
        if (o.seed) cfg.mc.seed = *o.seed;
        if (o.n_max) cfg.n_max = *o.n_max;
        if (o.out_dir) cfg.out_dir = *o.out_dir;
        if (o.threads) cfg.mc.threads = *o.threads;
        return fpt::run_experiment(cfg, std::cout);
    } catch (const fpt::ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"First-passage times of random walks over moving boundaries"};
    app.require_subcommand(1);

    CliOverrides o;
    fpt::Engine engine = fpt::Engine::exact;

    CLI::App* exact = app.add_subcommand("exact", "Exact lattice DP survival/overshoot report");
    CLI::App* mc = app.add_subcommand("mc", "Monte Carlo survival/overshoot report");
    CLI::App* diagnose = app.add_subcommand("diagnose", "Series and Lindeberg condition checks");
    CLI::App* report = app.add_subcommand("report", "Exact + MC report with diagnostics");
    for (CLI::App* cmd : {exact, mc, diagnose, report}) add_common_flags(cmd, o);

    exact->callback([&] { engine = fpt::Engine::exact; });
    mc->callback([&] { engine = fpt::Engine::mc; });
    diagnose->callback([&] { engine = fpt::Engine::none; });
    report->callback([&] { engine = fpt::Engine::both; });

    CLI11_PARSE(app, argc, argv);
    return run(o, engine);
}
