// experiment.hpp - experiment configuration and the CLI command bodies
#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "balmet/flows.hpp"
#include "balmet/model.hpp"

namespace balmet {

// sysexits-style contract shared by every command.
inline constexpr int kExitOk = 0;
inline constexpr int kExitNoConvergence = 2;
inline constexpr int kExitUsage = 64;
inline constexpr int kExitNumerical = 70;

enum class InitialKind { kFs, kFsPerturbed, kFile };

struct InitialSpec {
    InitialKind kind = InitialKind::kFs;
    std::uint64_t seed = 0;
    double amplitude = 0.0;
    std::string path;
};

struct ExperimentConfig {
    ModelConfig model;
    InitialSpec initial;
    FlowConfig flow;
    std::vector<int> k_sweep;
    double t_sample = 0.5;
    std::uint64_t seed = 0;
    std::string out_dir = "out";
    int threads = 1;
};

// Parses the JSON config file; throws ConfigError with a line/column
// diagnostic on malformed input.
ExperimentConfig parse_experiment_config(const std::string& path);
ExperimentConfig parse_experiment_json(const std::string& text);

MetricField initial_metric(const Model& model, const InitialSpec& spec);

// Model for one sweep member: same angular resolution, radial resolution
// raised to keep the quadrature exact at that k.
Model sweep_model(const ExperimentConfig& cfg, int k);

// Commands (one per CLI subcommand).  Each writes its outputs under
// cfg.out_dir and returns an exit status.
int cmd_balance(const ExperimentConfig& cfg, std::ostream& log);
int cmd_heatflow(const ExperimentConfig& cfg, std::ostream& log);
int cmd_bflow(const ExperimentConfig& cfg, std::ostream& log);        // thm1 harness
int cmd_iterate(const ExperimentConfig& cfg, std::ostream& log);      // thm2 harness
int cmd_ctyz(const ExperimentConfig& cfg, std::ostream& log);
int cmd_qk(const ExperimentConfig& cfg, std::ostream& log);
int cmd_tangent_gap(const ExperimentConfig& cfg, std::ostream& log);
int cmd_distance(const ExperimentConfig& cfg, const std::string& path0,
                 const std::string& path1, std::ostream& log);

// Shared sweep harness results, serialized to summary.json.
struct SweepResult {
    std::vector<int> ks;
    std::vector<double> errors;
    double slope = 0.0;
    double threshold = 0.0;
    bool pass = false;
};

// Runs fn(k) over the sweep on `threads` workers; results keep sweep order.
std::vector<double> run_sweep(const std::vector<int>& ks, int threads,
                              const std::function<double(int)>& fn);

}  // namespace balmet
