// bergman.hpp - Hilb_k / FS_k, Bergman density, Q_k, moment map, d_k
#pragma once

#include <optional>

#include "balmet/fields.hpp"
#include "balmet/model.hpp"

namespace balmet {

// Hermitian positive-definite inner product on H^0(X, E(k)), expressed in the
// canonical monomial basis of the SectionBasis.
struct HermitianInner {
    Mat matrix;

    int dim() const { return static_cast<int>(matrix.rows()); }
};

// Coefficients (columns) of an H-orthonormal basis in the monomial basis,
// produced by the diagonally preconditioned Cholesky factorization of H.
// Every N x N tangent-type object is stored together with the frame that
// defines its basis.
struct OrthoFrame {
    Mat coeffs;
};

// mu-bar (or mu-bar_0) evaluated at an inner product, expressed in the
// H-orthonormal basis recorded in `frame`.
struct MomentValue {
    Mat matrix;
    OrthoFrame frame;
};

void validate_inner(const HermitianInner& h);

// H-orthonormalization via scaled Cholesky; throws RankDeficiencyError if H
// is not positive definite.
OrthoFrame ortho_frame(const SectionBasis& basis, const HermitianInner& h);

// <s,t>_H = (N_k/rV) int <s,t>_{h (x) sigma^k} omega, in the monomial basis.
HermitianInner hilb(const Model& model, const MetricField& h);

// The unique metric with sum s_i (x) s_i^* = Id for an H-orthonormal basis.
MetricField fs(const Model& model, const HermitianInner& h);

// Phi_k = FS_k . Hilb_k.
MetricField phi_map(const Model& model, const MetricField& h);

// Bergman density B_k(h) = (N_k/rV) (sum_i s_i (x) s_i^{*_{h sigma^k}}),
// h-self-adjoint and positive; constant N_k on split FS metrics.
EndoField bergman_density(const Model& model, const MetricField& h);

// Bergman function of (L^k, sigma^k) with the un-normalized (sigma, omega)
// L^2 inner product; log_weight optionally multiplies the sigma^k fiber
// metric by exp(log_weight) pointwise (a conformal change of sigma).
std::vector<double> rho_line(int k, const QuadratureGrid& grid,
                             const std::vector<double>* log_weight = nullptr);

// Integrated moment map mu-bar(H) (trace = rV) and its trace-free part.
MomentValue moment_bar(const Model& model, const HermitianInner& h,
                       const std::vector<double>* weight_override = nullptr);
MomentValue moment_bar_zero(const Model& model, const HermitianInner& h,
                            const std::vector<double>* weight_override = nullptr);

// Q_k(phi)(y) = k^n sum_{ij} (int <s_i, phi s_j>) s_j (x) s_i^* (y).
EndoField q_apply(const Model& model, const EndoField& phi, const MetricField& h);

// delta H in the hilb(h)-orthonormal frame for a metric velocity phi_dot:
// (delta H)_{ij} = -(N_k/rV) int <s_i, phi_dot s_j>.
MomentValue hilb_tangent(const Model& model, const MetricField& h, const EndoField& phi_dot);

// Geodesic distance sqrt(k^{-n} sum_i log^2 lambda_i(H0^{-1} H1)) on the
// Bergman space.  `scale` optionally preconditions the eigenproblem (use the
// basis monomial_scale for large k).
double bergman_distance(const HermitianInner& h0, const HermitianInner& h1, int k,
                        const RVec* scale = nullptr);

}  // namespace balmet
