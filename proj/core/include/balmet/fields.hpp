// fields.hpp - pointwise metric and endomorphism fields on the grid
#pragma once

#include <vector>

#include "balmet/basis.hpp"
#include "balmet/grid.hpp"
#include "balmet/types.hpp"

namespace balmet {

// Hermitian positive-definite r x r matrix per grid point: the metric
// h (x) sigma^k on E(k) in the trivialization, so the intrinsic pairing of
// trivialization vectors a, b at p is b^* G(p) a.
struct MetricField {
    std::vector<Mat> values;
    int rank = 0;

    int size() const { return static_cast<int>(values.size()); }
    const Mat& at(int p) const { return values[static_cast<std::size_t>(p)]; }
    Mat& at(int p) { return values[static_cast<std::size_t>(p)]; }
};

// r x r matrix per grid point; hermitian_flag records self-adjointness with
// respect to an accompanying metric (G phi Hermitian pointwise).
struct EndoField {
    std::vector<Mat> values;
    int rank = 0;
    bool hermitian_flag = false;

    int size() const { return static_cast<int>(values.size()); }
    const Mat& at(int p) const { return values[static_cast<std::size_t>(p)]; }
    Mat& at(int p) { return values[static_cast<std::size_t>(p)]; }
};

// Condition-number guard: metrics worse than this are rejected, not repaired.
inline constexpr double kMetricConditionLimit = 1e12;

// Throws PositivityLossError / ShapeMismatchError on violation.
void validate_metric(const MetricField& h, const SectionBasis& basis);

// Reference split FS metric on E(k): G_ref(p) = diag((1+|z_p|^2)^{-(a_i+k)}).
MetricField reference_metric(const SectionBasis& basis);

// Normalized-frame views: M = W^{-1/2} G W^{-1/2} with W = sigma_k_weight.
// These are exact diagonal rescalings; the normalized entries stay O(1) for
// metrics comparable to the reference.
MetricField to_normalized(const MetricField& g, const SectionBasis& basis);
MetricField from_normalized(const MetricField& m, const SectionBasis& basis);
EndoField endo_to_normalized(const EndoField& phi, const SectionBasis& basis);
EndoField endo_from_normalized(const EndoField& psi, const SectionBasis& basis);

// Constant-coefficient fields.
MetricField constant_metric(const Mat& g, int npts);
EndoField constant_endo(const Mat& phi, int npts);

// Metric scaled pointwise: (c * h).
MetricField scale_metric(const MetricField& h, double c);

// sup_p of the operator norm of phi(p) with respect to h(p).
double endo_sup_norm(const EndoField& phi, const MetricField& h, const SectionBasis& basis);

// c - 1 for the smallest c >= 1 with h0 <= c h1 and h1 <= c h0 pointwise
// (the order-interval distance).
double metric_sup_distance(const MetricField& h0, const MetricField& h1,
                           const SectionBasis& basis);

// Pointwise h-self-adjoint part (phi + h^{-1} phi^* h)/2.
EndoField self_adjoint_part(const EndoField& phi, const MetricField& h);

// Largest deviation ||G phi - (G phi)^*|| relative to ||G phi||, over points.
double self_adjointness_defect(const EndoField& phi, const MetricField& h);

// Extreme eigenvalues over all points of an endomorphism self-adjoint w.r.t. h.
struct EigenRange {
    double min = 0.0;
    double max = 0.0;
};
EigenRange endo_eigen_range(const EndoField& phi, const MetricField& h,
                            const SectionBasis& basis);

// Max pointwise condition number of the metric (in the normalized frame).
double metric_max_condition(const MetricField& h, const SectionBasis& basis);

// int tr(phi) omega.
double integral_trace(const EndoField& phi, const QuadratureGrid& grid);

}  // namespace balmet
