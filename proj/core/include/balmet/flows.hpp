// flows.hpp - balancing flow, Donaldson-type heat flows, Phi_k iteration
#pragma once

#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "balmet/bergman.hpp"
#include "balmet/curvature.hpp"
#include "balmet/harmonics.hpp"
#include "balmet/model.hpp"

namespace balmet {

enum class Integrator { kEuler, kExpEuler, kRk4 };
enum class VolumeMode { kStandard, kOmegaPrime };
enum class HeatFlowMode { kModified, kDonaldson };

struct FlowConfig {
    double dt = 0.0;       // <= 0 selects the measured stability bound
    double t_max = 1.0;
    Integrator integrator = Integrator::kExpEuler;
    VolumeMode volume_mode = VolumeMode::kStandard;
    double normalization = kDimension + 1;  // k-power in the balancing velocity
    HeatFlowMode mode = HeatFlowMode::kModified;
    int filter_lmax = 12;   // band limit of heat-flow velocities (stability)
    double sample_dt = 0.05;
    double mu0_stop = 1e-10;
    bool bergman_diagnostics = true;  // mu0/d_k columns for PDE flows
};

struct FlowSample {
    double t = 0.0;
    double mu0_norm = 0.0;
    double dk_ref = 0.0;
    double sup_err = 0.0;
    double lam_min = 0.0;
    double lam_max = 0.0;
    double cond_max = 0.0;
    double mu0_trace = 0.0;   // re-checked against 0 at write time
    bool has_moment = false;
};

struct FlowTrace {
    std::vector<FlowSample> samples;
    bool converged = false;
    bool aborted = false;
    std::string abort_reason;
    double final_time = 0.0;
};

// Reference trajectory for convergence comparisons (closed form where
// available).
using ReferenceTrajectory = std::function<MetricField(double)>;

// Exact solution of the modified flow from the split FS start:
// h(t) = diag(e^{-(a_i - mu) t} h_{FS, a_i}); the Donaldson-mode flow agrees
// on these models.
ReferenceTrajectory closed_form_split_flow(const Model& model);

// One step of dH/dt = -k^normalization mu0bar(H).  exp-euler updates by
// congruence with the matrix exponential (positivity exact); plain euler
// carries a step-size guard and throws StepRejectedError on positivity loss.
HermitianInner balancing_step(const Model& model, const HermitianInner& h,
                              const FlowConfig& cfg);

// Finite-difference estimate of the balancing velocity's linearization norm
// at H; the stable step is ~1/lambda.
double balancing_stiffness(const Model& model, const HermitianInner& h,
                           const FlowConfig& cfg);

// One RK4 method-of-lines step of h^{-1} dh/dt = -A1tilde(h) (modified) or
// -((i/2pi) Lambda F - mu(E)) (donaldson), multiplicative in the metric.
// Velocities are band-limited to filter->lmax() when a filter is given.
MetricField heat_flow_step(const Model& model, const MetricField& h, double dt,
                           HeatFlowMode mode, const HarmonicBasis* filter = nullptr);

// m-fold composition of phi_map.
MetricField phi_iterate(const Model& model, const MetricField& h0, int m);

// k^{-n} tr((U_k - V_k)^2) for U_k = hilb_tangent(h, -A1tilde) and
// V_k = -k^{n+1} mu0bar(hilb(h)), both in the hilb(h)-orthonormal frame.
double tangent_gap(const Model& model, const MetricField& h);

// Mean-zero solution of Delta_omega theta = -(1/2)(S(omega) - mean S); zero
// on these constant-curvature models.
std::vector<double> conformal_theta(const QuadratureGrid& grid);

// Grid with weights rescaled by the volume form
// Omega' = omega (1 + (rho_k - h^0(L^k))/(V k^n)); equals omega on FS models.
QuadratureGrid omega_prime_weights(const QuadratureGrid& grid, int k);

// Integrates the balancing flow, recording diagnostics at the sample times;
// stops early at mu0_stop.  Aborts (with partial trace) on positivity loss.
struct BalancingRun {
    FlowTrace trace;
    HermitianInner final_h;
};
BalancingRun run_balancing_flow(const Model& model, const HermitianInner& h0,
                                const FlowConfig& cfg,
                                const ReferenceTrajectory* reference = nullptr);

struct HeatRun {
    FlowTrace trace;
    MetricField final_h;
};
HeatRun run_heat_flow(const Model& model, const MetricField& h0, const FlowConfig& cfg,
                      const ReferenceTrajectory* reference = nullptr);

}  // namespace balmet
