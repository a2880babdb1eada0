// balmet - balanced-metric and heat-flow experiments on split bundles over P^1
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "balmet/errors.hpp"
#include "balmet/experiment.hpp"

namespace {

struct GlobalArgs {
    std::string config_path;
    std::string out_dir;
    int threads = 0;
    std::int64_t seed = -1;
};

balmet::ExperimentConfig load_config(const GlobalArgs& g) {
    balmet::ExperimentConfig cfg = balmet::parse_experiment_config(g.config_path);
    if (!g.out_dir.empty()) cfg.out_dir = g.out_dir;
    if (g.threads > 0) cfg.threads = g.threads;
    if (g.seed >= 0) {
        cfg.seed = static_cast<std::uint64_t>(g.seed);
        cfg.initial.seed = static_cast<std::uint64_t>(g.seed);
    }
    return cfg;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"balanced metrics, balancing flows, and Donaldson-type heat flows "
                 "on split bundles over the Riemann sphere"};
    app.require_subcommand(1);

    GlobalArgs g;
    app.add_option("--config", g.config_path, "experiment config (JSON)")->required();
    app.add_option("--out", g.out_dir, "output directory (overrides config)");
    app.add_option("--threads", g.threads, "worker threads for k-sweeps");
    app.add_option("--seed", g.seed, "seed override for seeded initial metrics");

    auto* balance = app.add_subcommand("balance", "run the balancing flow to convergence");
    auto* heatflow = app.add_subcommand("heatflow", "run the heat-flow PDE solver");
    auto* bflow = app.add_subcommand("bflow", "balancing-flow k-sweep against the closed form");
    auto* iterate = app.add_subcommand("iterate", "Phi_k iteration k-sweep");
    auto* ctyz = app.add_subcommand("ctyz", "density-expansion remainder k-sweep");
    auto* qk = app.add_subcommand("qk", "Q_k smoothing-rate k-sweep");
    auto* tangent = app.add_subcommand("tangent-gap", "flow tangent-gap k-sweep");
    auto* distance = app.add_subcommand("distance", "distance between two inner products");
    std::string path0, path1;
    distance->add_option("first", path0, "first inner-product file")->required();
    distance->add_option("second", path1, "second inner-product file")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : balmet::kExitUsage;
    }

    try {
        const balmet::ExperimentConfig cfg = load_config(g);
        if (balance->parsed()) return balmet::cmd_balance(cfg, std::cout);
        if (heatflow->parsed()) return balmet::cmd_heatflow(cfg, std::cout);
        if (bflow->parsed()) return balmet::cmd_bflow(cfg, std::cout);
        if (iterate->parsed()) return balmet::cmd_iterate(cfg, std::cout);
        if (ctyz->parsed()) return balmet::cmd_ctyz(cfg, std::cout);
        if (qk->parsed()) return balmet::cmd_qk(cfg, std::cout);
        if (tangent->parsed()) return balmet::cmd_tangent_gap(cfg, std::cout);
        if (distance->parsed()) return balmet::cmd_distance(cfg, path0, path1, std::cout);
        std::cerr << "no subcommand\n";
        return balmet::kExitUsage;
    } catch (const balmet::ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return balmet::kExitUsage;
    } catch (const std::exception& e) {
        std::cerr << "numerical error: " << e.what() << "\n";
        return balmet::kExitNumerical;
    }
}
