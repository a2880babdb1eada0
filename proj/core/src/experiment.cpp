#include "balmet/experiment.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <functional>
#include <ostream>
#include <sstream>
#include <thread>

#include <json.hpp>

#include "balmet/curvature.hpp"
#include "balmet/errors.hpp"
#include "balmet/io.hpp"
#include "balmet/perturb.hpp"
#include "balmet/slope.hpp"

namespace balmet {

namespace {

using nlohmann::json;

Integrator parse_integrator(const std::string& s) {
    if (s == "euler") return Integrator::kEuler;
    if (s == "exp-euler") return Integrator::kExpEuler;
    if (s == "rk4") return Integrator::kRk4;
    throw ConfigError("unknown integrator: " + s);
}

HeatFlowMode parse_mode(const std::string& s) {
    if (s == "modified") return HeatFlowMode::kModified;
    if (s == "donaldson") return HeatFlowMode::kDonaldson;
    throw ConfigError("unknown heat flow mode: " + s);
}

VolumeMode parse_volume(const std::string& s) {
    if (s == "standard") return VolumeMode::kStandard;
    if (s == "omega_prime") return VolumeMode::kOmegaPrime;
    throw ConfigError("unknown volume mode: " + s);
}

void ensure_out_dir(const ExperimentConfig& cfg) {
    std::filesystem::create_directories(cfg.out_dir);
}

std::string out_path(const ExperimentConfig& cfg, const std::string& name) {
    return (std::filesystem::path(cfg.out_dir) / name).string();
}

void write_config_echo(const ExperimentConfig& cfg, const json& extra) {
    json j;
    j["model"]["degrees"] = cfg.model.degrees;
    j["model"]["k"] = cfg.model.k;
    j["grid"]["n_theta"] = cfg.model.n_theta;
    j["grid"]["n_phi"] = cfg.model.n_phi;
    j["t_sample"] = cfg.t_sample;
    j["seed"] = cfg.seed;
    j["k_sweep"] = cfg.k_sweep;
    j["threads"] = cfg.threads;
    for (auto it = extra.begin(); it != extra.end(); ++it) j[it.key()] = it.value();
    write_text_file(out_path(cfg, "config.json"), j.dump(2) + "\n");
}

void write_summary(const ExperimentConfig& cfg, const std::string& name,
                   const SweepResult& r, const json& extra = json::object()) {
    json j;
    j["harness"] = name;
    j["k"] = r.ks;
    j["error"] = r.errors;
    j["slope"] = r.slope;
    j["threshold"] = r.threshold;
    j["pass"] = r.pass;
    for (auto it = extra.begin(); it != extra.end(); ++it) j[it.key()] = it.value();
    write_text_file(out_path(cfg, "summary.json"), j.dump(2) + "\n");
}

SweepResult finish_sweep(const std::vector<int>& ks, std::vector<double> errors,
                         double threshold) {
    SweepResult r;
    r.ks = ks;
    r.errors = std::move(errors);
    std::vector<double> kd(ks.begin(), ks.end());
    r.slope = fit_loglog(kd, r.errors).slope;
    r.threshold = threshold;
    r.pass = r.slope <= threshold;
    return r;
}

// h^{-1} phi for two metrics as an endomorphism field.
EndoField relative_endo(const MetricField& h, const MetricField& g) {
    EndoField e;
    e.rank = h.rank;
    e.values.resize(h.values.size());
    for (int p = 0; p < h.size(); ++p) e.at(p) = h.at(p).llt().solve(g.at(p));
    return e;
}

}  // namespace

ExperimentConfig parse_experiment_json(const std::string& text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::parse_error& e) {
        throw ConfigError(std::string("config parse error: ") + e.what());
    }
    ExperimentConfig cfg;
    try {
        if (!j.contains("model")) throw ConfigError("config: missing \"model\"");
        cfg.model.degrees = j["model"].at("degrees").get<std::vector<int>>();
        cfg.model.k = j["model"].value("k", 0);
        if (j.contains("grid")) {
            cfg.model.n_theta = j["grid"].value("n_theta", 64);
            cfg.model.n_phi = j["grid"].value("n_phi", 64);
        }
        if (j.contains("initial")) {
            const auto& i = j["initial"];
            const std::string kind = i.value("type", "fs");
            if (kind == "fs") {
                cfg.initial.kind = InitialKind::kFs;
            } else if (kind == "fs_perturbed") {
                cfg.initial.kind = InitialKind::kFsPerturbed;
                cfg.initial.seed = i.value("seed", 0);
                cfg.initial.amplitude = i.value("amplitude", 0.2);
            } else if (kind == "file") {
                cfg.initial.kind = InitialKind::kFile;
                cfg.initial.path = i.at("path").get<std::string>();
            } else {
                throw ConfigError("config: unknown initial type " + kind);
            }
            if (cfg.initial.amplitude < 0.0 || cfg.initial.amplitude > 0.5)
                throw ConfigError("config: amplitude must be in [0, 0.5]");
        }
        if (j.contains("flow")) {
            const auto& f = j["flow"];
            cfg.flow.dt = f.value("dt", 0.0);
            cfg.flow.t_max = f.value("t_max", 1.0);
            cfg.flow.integrator = parse_integrator(f.value("integrator", "exp-euler"));
            cfg.flow.volume_mode = parse_volume(f.value("volume_mode", "standard"));
            cfg.flow.normalization = f.value("normalization", double(kDimension + 1));
            cfg.flow.mode = parse_mode(f.value("mode", "modified"));
            cfg.flow.filter_lmax = f.value("filter_lmax", 12);
            cfg.flow.sample_dt = f.value("sample_dt", 0.05);
            cfg.flow.mu0_stop = f.value("mu0_stop", 1e-10);
        }
        if (j.contains("k_sweep")) cfg.k_sweep = j["k_sweep"].get<std::vector<int>>();
        cfg.t_sample = j.value("t_sample", 0.5);
        cfg.seed = j.value("seed", 0);
        if (j.contains("output")) cfg.out_dir = j["output"].value("dir", "out");
        cfg.threads = j.value("threads", 1);
    } catch (const json::exception& e) {
        throw ConfigError(std::string("config: ") + e.what());
    }
    return cfg;
}

ExperimentConfig parse_experiment_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file: " + path);
    std::stringstream buf;
    buf << in.rdbuf();
    return parse_experiment_json(buf.str());
}

MetricField initial_metric(const Model& model, const InitialSpec& spec) {
    switch (spec.kind) {
        case InitialKind::kFs:
            return fs_metric(model);
        case InitialKind::kFsPerturbed:
            return seeded_metric(model, spec.seed, spec.amplitude);
        case InitialKind::kFile: {
            MetricField h;
            h.rank = model.rank();
            h.values = read_field_csv(spec.path, model.rank());
            validate_metric(h, model.basis);
            return h;
        }
    }
    throw ConfigError("initial_metric: bad kind");
}

Model sweep_model(const ExperimentConfig& cfg, int k) {
    ModelConfig mc = cfg.model;
    mc.k = k;
    int max_a = 0;
    for (int a : mc.degrees) max_a = std::max(max_a, a);
    mc.n_phi = std::max(cfg.model.n_phi, max_a + k + 2);
    return make_model(mc);
}

std::vector<double> run_sweep(const std::vector<int>& ks, int threads,
                              const std::function<double(int)>& fn) {
    std::vector<double> out(ks.size(), 0.0);
    if (threads <= 1 || ks.size() <= 1) {
        for (std::size_t i = 0; i < ks.size(); ++i) out[i] = fn(ks[i]);
        return out;
    }
    std::atomic<std::size_t> next{0};
    std::vector<std::thread> pool;
    const int n = std::min<int>(threads, static_cast<int>(ks.size()));
    std::vector<std::exception_ptr> errors(static_cast<std::size_t>(n));
    for (int t = 0; t < n; ++t) {
        pool.emplace_back([&, t]() {
            try {
                for (std::size_t i = next.fetch_add(1); i < ks.size(); i = next.fetch_add(1))
                    out[i] = fn(ks[i]);
            } catch (...) {
                errors[static_cast<std::size_t>(t)] = std::current_exception();
            }
        });
    }
    for (auto& th : pool) th.join();
    for (auto& e : errors)
        if (e) std::rethrow_exception(e);
    return out;
}

int cmd_balance(const ExperimentConfig& cfg, std::ostream& log) {
    ensure_out_dir(cfg);
    const Model model = make_model(cfg.model);
    const MetricField h0 = initial_metric(model, cfg.initial);
    const HermitianInner start = hilb(model, h0);

    const BalancingRun run = run_balancing_flow(model, start, cfg.flow);
    write_flow_trace_csv(out_path(cfg, "trace.csv"), run.trace);
    write_inner(out_path(cfg, "final_inner.bin"), run.final_h, cfg.model.degrees, cfg.model.k);
    write_config_echo(cfg, {{"command", "balance"}});

    if (run.trace.aborted) {
        log << "balance: aborted: " << run.trace.abort_reason << "\n";
        return kExitNumerical;
    }
    const double final_mu0 =
        run.trace.samples.empty() ? 0.0 : run.trace.samples.back().mu0_norm;
    log << "balance: t=" << format_double(run.trace.final_time)
        << " mu0=" << format_double(final_mu0)
        << (run.trace.converged ? " converged" : " stopped") << "\n";
    return run.trace.converged ? kExitOk : kExitNoConvergence;
}

int cmd_heatflow(const ExperimentConfig& cfg, std::ostream& log) {
    ensure_out_dir(cfg);
    const Model model = make_model(cfg.model);
    const MetricField h0 = initial_metric(model, cfg.initial);

    const HeatRun run = run_heat_flow(model, h0, cfg.flow);
    write_flow_trace_csv(out_path(cfg, "trace.csv"), run.trace);
    write_field_csv(out_path(cfg, "final_metric.csv"), run.final_h.values);
    write_config_echo(cfg, {{"command", "heatflow"}});

    if (run.trace.aborted) {
        log << "heatflow: aborted: " << run.trace.abort_reason << "\n";
        return kExitNumerical;
    }
    const auto& last = run.trace.samples.back();
    log << "heatflow: t=" << format_double(run.trace.final_time)
        << " lam=[" << format_double(last.lam_min) << ", " << format_double(last.lam_max)
        << "]\n";
    return kExitOk;
}

int cmd_bflow(const ExperimentConfig& cfg, std::ostream& log) {
    ensure_out_dir(cfg);
    if (cfg.k_sweep.size() < 3)
        throw ConfigError("bflow: k_sweep needs at least 3 values to fit a slope");

    std::vector<double> c1_errs(cfg.k_sweep.size(), 0.0);
    std::vector<double> errs = run_sweep(
        cfg.k_sweep, cfg.threads, [&](int k) -> double {
            const Model model = sweep_model(cfg, k);
            const MetricField h0 = initial_metric(model, cfg.initial);
            const auto reference = closed_form_split_flow(model);

            FlowConfig fc = cfg.flow;
            fc.integrator = Integrator::kRk4;
            fc.sample_dt = 1e9;  // endpoints only
            fc.mu0_stop = 0.0;
            const double delta = 0.02;

            fc.t_max = cfg.t_sample - delta;
            BalancingRun r1 = run_balancing_flow(model, hilb(model, h0), fc);
            if (r1.trace.aborted) throw CflViolationError(r1.trace.abort_reason);
            fc.t_max = delta;
            BalancingRun r2 = run_balancing_flow(model, r1.final_h, fc);
            if (r2.trace.aborted) throw CflViolationError(r2.trace.abort_reason);
            BalancingRun r3 = run_balancing_flow(model, r2.final_h, fc);
            if (r3.trace.aborted) throw CflViolationError(r3.trace.abort_reason);

            const MetricField h_minus = fs(model, r1.final_h);
            const MetricField h_mid = fs(model, r2.final_h);
            const MetricField h_plus = fs(model, r3.final_h);

            // C1-in-t proxy: h^{-1} (h(t+d)-h(t-d))/(2d) vs -A1tilde.
            EndoField dh;
            dh.rank = model.rank();
            dh.values.resize(h_mid.values.size());
            for (int p = 0; p < h_mid.size(); ++p)
                dh.at(p) = h_mid.at(p).llt().solve(
                    (h_plus.at(p) - h_minus.at(p)) / (2.0 * delta));
            const EndoField a1t = a1_reduced(model, h_mid);
            for (int p = 0; p < dh.size(); ++p) dh.at(p) += a1t.at(p);
            const std::size_t idx = static_cast<std::size_t>(
                std::find(cfg.k_sweep.begin(), cfg.k_sweep.end(), k) - cfg.k_sweep.begin());
            c1_errs[idx] = endo_sup_norm(dh, h_mid, model.basis);

            return metric_sup_distance(h_mid, reference(cfg.t_sample), model.basis);
        });

    SweepResult r = finish_sweep(cfg.k_sweep, errs, -0.8);
    bool c1_decreasing = true;
    for (std::size_t i = 1; i < c1_errs.size(); ++i)
        if (c1_errs[i] > c1_errs[i - 1]) c1_decreasing = false;
    r.pass = r.pass && c1_decreasing;
    write_summary(cfg, "thm1", r, {{"c1_proxy_error", c1_errs},
                                   {"c1_decreasing", c1_decreasing}});
    write_config_echo(cfg, {{"command", "bflow"}});
    log << "bflow: slope=" << format_double(r.slope) << (r.pass ? " pass" : " fail") << "\n";
    return r.pass ? kExitOk : kExitNoConvergence;
}

int cmd_iterate(const ExperimentConfig& cfg, std::ostream& log) {
    ensure_out_dir(cfg);
    if (cfg.k_sweep.size() < 3)
        throw ConfigError("iterate: k_sweep needs at least 3 values to fit a slope");

    std::vector<double> errs = run_sweep(cfg.k_sweep, cfg.threads, [&](int k) -> double {
        const Model model = sweep_model(cfg, k);
        const MetricField h0 = initial_metric(model, cfg.initial);
        const auto reference = closed_form_split_flow(model);
        const int m = static_cast<int>(std::floor(cfg.t_sample * k));
        const MetricField hm = phi_iterate(model, h0, m);
        return metric_sup_distance(hm, reference(static_cast<double>(m) / k), model.basis);
    });

    const SweepResult r = finish_sweep(cfg.k_sweep, errs, -0.8);
    write_summary(cfg, "thm2", r);
    write_config_echo(cfg, {{"command", "iterate"}});
    log << "iterate: slope=" << format_double(r.slope) << (r.pass ? " pass" : " fail")
        << "\n";
    return r.pass ? kExitOk : kExitNoConvergence;
}

int cmd_ctyz(const ExperimentConfig& cfg, std::ostream& log) {
    ensure_out_dir(cfg);
    if (cfg.k_sweep.size() < 3)
        throw ConfigError("ctyz: k_sweep needs at least 3 values to fit a slope");

    std::vector<double> errs = run_sweep(cfg.k_sweep, cfg.threads, [&](int k) -> double {
        const Model model = sweep_model(cfg, k);
        const MetricField h = initial_metric(model, cfg.initial);
        const MetricField ph = phi_map(model, h);
        const EndoField a1t = a1_reduced(model, h);
        EndoField rem = relative_endo(h, ph);
        const Mat id = Mat::Identity(model.rank(), model.rank());
        for (int p = 0; p < rem.size(); ++p)
            rem.at(p) = rem.at(p) - id + a1t.at(p) / static_cast<double>(k);
        return endo_sup_norm(rem, h, model.basis);
    });

    const SweepResult r = finish_sweep(cfg.k_sweep, errs, -1.8);
    write_summary(cfg, "ctyz", r);
    write_config_echo(cfg, {{"command", "ctyz"}});
    log << "ctyz: slope=" << format_double(r.slope) << (r.pass ? " pass" : " fail") << "\n";
    return r.pass ? kExitOk : kExitNoConvergence;
}

int cmd_qk(const ExperimentConfig& cfg, std::ostream& log) {
    ensure_out_dir(cfg);
    if (cfg.k_sweep.size() < 3)
        throw ConfigError("qk: k_sweep needs at least 3 values to fit a slope");

    // Spot value on the line-bundle model: Q_k(Id) = (k/(k+1)) Id.
    double spot_err = 0.0;
    {
        ExperimentConfig line = cfg;
        line.model.degrees = {0};
        const Model model = sweep_model(line, cfg.k_sweep.front());
        const MetricField h = fs_metric(model);
        const EndoField id = constant_endo(Mat::Identity(1, 1), model.grid.size());
        const EndoField q = q_apply(model, id, h);
        const double expected =
            static_cast<double>(model.cfg.k) / (model.cfg.k + 1.0);
        for (int p = 0; p < q.size(); ++p)
            spot_err = std::max(spot_err, std::abs(q.at(p)(0, 0).real() - expected) +
                                              std::abs(q.at(p)(0, 0).imag()));
    }

    std::vector<double> errs = run_sweep(cfg.k_sweep, cfg.threads, [&](int k) -> double {
        const Model model = sweep_model(cfg, k);
        const MetricField h = initial_metric(model, cfg.initial);
        const EndoField f = seeded_endo(model, cfg.seed + 17, 0.5, h);
        EndoField qf = q_apply(model, f, h);
        for (int p = 0; p < qf.size(); ++p) qf.at(p) -= f.at(p);
        return endo_sup_norm(qf, h, model.basis);
    });

    SweepResult r = finish_sweep(cfg.k_sweep, errs, -0.9);
    r.pass = r.pass && spot_err <= 1e-10;
    write_summary(cfg, "qk", r, {{"spot_error", spot_err}});
    write_config_echo(cfg, {{"command", "qk"}});
    log << "qk: slope=" << format_double(r.slope)
        << " spot=" << format_double(spot_err) << (r.pass ? " pass" : " fail") << "\n";
    return r.pass ? kExitOk : kExitNoConvergence;
}

int cmd_tangent_gap(const ExperimentConfig& cfg, std::ostream& log) {
    ensure_out_dir(cfg);
    if (cfg.k_sweep.size() < 3)
        throw ConfigError("tangent-gap: k_sweep needs at least 3 values to fit a slope");

    std::vector<double> errs = run_sweep(cfg.k_sweep, cfg.threads, [&](int k) -> double {
        const Model model = sweep_model(cfg, k);
        const MetricField h = initial_metric(model, cfg.initial);
        return tangent_gap(model, h);
    });

    const SweepResult r = finish_sweep(cfg.k_sweep, errs, -1.8);
    write_summary(cfg, "tangent_gap", r);
    write_config_echo(cfg, {{"command", "tangent-gap"}});
    log << "tangent-gap: slope=" << format_double(r.slope) << (r.pass ? " pass" : " fail")
        << "\n";
    return r.pass ? kExitOk : kExitNoConvergence;
}

int cmd_distance(const ExperimentConfig& cfg, const std::string& path0,
                 const std::string& path1, std::ostream& log) {
    const HermitianInner h0 = read_inner(path0);
    const HermitianInner h1 = read_inner(path1);
    const double d = bergman_distance(h0, h1, cfg.model.k);
    log << format_double(d) << "\n";
    return kExitOk;
}

}  // namespace balmet
