#include "balmet/fields.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "balmet/errors.hpp"

namespace balmet {

namespace {

RVec inv_sqrt_weight(const RVec& w) {
    return w.array().sqrt().inverse().matrix();
}

}  // namespace

MetricField reference_metric(const SectionBasis& basis) {
    MetricField g;
    g.rank = basis.rank();
    g.values.resize(basis.sigma_k_weight.size());
    for (std::size_t p = 0; p < g.values.size(); ++p)
        g.values[p] = basis.sigma_k_weight[p].cast<cxd>().asDiagonal();
    return g;
}

MetricField to_normalized(const MetricField& g, const SectionBasis& basis) {
    MetricField m;
    m.rank = g.rank;
    m.values.resize(g.values.size());
    for (std::size_t p = 0; p < g.values.size(); ++p) {
        const RVec s = inv_sqrt_weight(basis.sigma_k_weight[p]);
        m.values[p] = s.cast<cxd>().asDiagonal() * g.values[p] * s.cast<cxd>().asDiagonal();
    }
    return m;
}

MetricField from_normalized(const MetricField& m, const SectionBasis& basis) {
    MetricField g;
    g.rank = m.rank;
    g.values.resize(m.values.size());
    for (std::size_t p = 0; p < m.values.size(); ++p) {
        const RVec s = basis.sigma_k_weight[p].array().sqrt().matrix();
        g.values[p] = s.cast<cxd>().asDiagonal() * m.values[p] * s.cast<cxd>().asDiagonal();
    }
    return g;
}

EndoField endo_to_normalized(const EndoField& phi, const SectionBasis& basis) {
    // psi = W^{1/2} phi W^{-1/2}: similarity, eigenvalues preserved.
    EndoField psi;
    psi.rank = phi.rank;
    psi.hermitian_flag = phi.hermitian_flag;
    psi.values.resize(phi.values.size());
    for (std::size_t p = 0; p < phi.values.size(); ++p) {
        const RVec s = basis.sigma_k_weight[p].array().sqrt().matrix();
        const RVec si = inv_sqrt_weight(basis.sigma_k_weight[p]);
        psi.values[p] = s.cast<cxd>().asDiagonal() * phi.values[p] * si.cast<cxd>().asDiagonal();
    }
    return psi;
}

EndoField endo_from_normalized(const EndoField& psi, const SectionBasis& basis) {
    EndoField phi;
    phi.rank = psi.rank;
    phi.hermitian_flag = psi.hermitian_flag;
    phi.values.resize(psi.values.size());
    for (std::size_t p = 0; p < psi.values.size(); ++p) {
        const RVec s = basis.sigma_k_weight[p].array().sqrt().matrix();
        const RVec si = inv_sqrt_weight(basis.sigma_k_weight[p]);
        phi.values[p] = si.cast<cxd>().asDiagonal() * psi.values[p] * s.cast<cxd>().asDiagonal();
    }
    return phi;
}

MetricField constant_metric(const Mat& g, int npts) {
    MetricField f;
    f.rank = static_cast<int>(g.rows());
    f.values.assign(static_cast<std::size_t>(npts), g);
    return f;
}

EndoField constant_endo(const Mat& phi, int npts) {
    EndoField f;
    f.rank = static_cast<int>(phi.rows());
    f.values.assign(static_cast<std::size_t>(npts), phi);
    return f;
}

MetricField scale_metric(const MetricField& h, double c) {
    MetricField out = h;
    for (auto& v : out.values) v *= c;
    return out;
}

void validate_metric(const MetricField& h, const SectionBasis& basis) {
    if (h.size() != static_cast<int>(basis.eval.size()))
        throw ShapeMismatchError("validate_metric: field size does not match grid");
    if (h.rank != basis.rank())
        throw ShapeMismatchError("validate_metric: rank mismatch");
    const MetricField m = to_normalized(h, basis);
    for (int p = 0; p < m.size(); ++p) {
        const Mat& g = m.at(p);
        if (!g.allFinite())
            throw PositivityLossError("validate_metric: non-finite entries at point " +
                                      std::to_string(p));
        const double scale = g.norm();
        if ((g - g.adjoint()).norm() > 1e-12 * scale)
            throw PositivityLossError("validate_metric: not Hermitian at point " +
                                      std::to_string(p));
        Eigen::SelfAdjointEigenSolver<Mat> es(g, Eigen::EigenvaluesOnly);
        const double lmin = es.eigenvalues().minCoeff();
        const double lmax = es.eigenvalues().maxCoeff();
        if (lmin <= 0.0)
            throw PositivityLossError("validate_metric: not positive definite at point " +
                                      std::to_string(p));
        if (lmax / lmin > kMetricConditionLimit)
            throw PositivityLossError("validate_metric: condition number " +
                                      std::to_string(lmax / lmin) + " exceeds guard");
    }
}

double endo_sup_norm(const EndoField& phi, const MetricField& h, const SectionBasis& basis) {
    if (phi.size() != h.size() || phi.rank != h.rank)
        throw ShapeMismatchError("endo_sup_norm: shape mismatch");
    const MetricField m = to_normalized(h, basis);
    const EndoField psi = endo_to_normalized(phi, basis);
    double sup = 0.0;
    for (int p = 0; p < m.size(); ++p) {
        // ||phi||_G = ||L^* psi L^{-*}||_2 for M = L L^*.
        Eigen::LLT<Mat> llt(m.at(p));
        if (llt.info() != Eigen::Success)
            throw PositivityLossError("endo_sup_norm: metric not PD at point " +
                                      std::to_string(p));
        const Mat l = llt.matrixL();
        const Mat a = l.adjoint() * psi.at(p);
        const Mat b = l.triangularView<Eigen::Lower>().solve(a.adjoint()).adjoint();
        sup = std::max(sup, b.operatorNorm());
    }
    return sup;
}

double metric_sup_distance(const MetricField& h0, const MetricField& h1,
                           const SectionBasis& basis) {
    if (h0.size() != h1.size() || h0.rank != h1.rank)
        throw ShapeMismatchError("metric_sup_distance: shape mismatch");
    const MetricField m0 = to_normalized(h0, basis);
    const MetricField m1 = to_normalized(h1, basis);
    double c = 1.0;
    for (int p = 0; p < m0.size(); ++p) {
        // Generalized eigenvalues of (M0, M1) bound both order constants.
        Eigen::LLT<Mat> llt(m1.at(p));
        if (llt.info() != Eigen::Success)
            throw PositivityLossError("metric_sup_distance: metric not PD at point " +
                                      std::to_string(p));
        const Mat l = llt.matrixL();
        const Mat w = l.triangularView<Eigen::Lower>().solve(m0.at(p));
        const Mat w2 = l.triangularView<Eigen::Lower>().solve(w.adjoint()).adjoint();
        Eigen::SelfAdjointEigenSolver<Mat> es(hermitize(w2), Eigen::EigenvaluesOnly);
        const double lmin = es.eigenvalues().minCoeff();
        const double lmax = es.eigenvalues().maxCoeff();
        if (lmin <= 0.0)
            throw PositivityLossError("metric_sup_distance: metric not PD at point " +
                                      std::to_string(p));
        c = std::max(c, lmax);
        c = std::max(c, 1.0 / lmin);
    }
    return c - 1.0;
}

EndoField self_adjoint_part(const EndoField& phi, const MetricField& h) {
    EndoField out;
    out.rank = phi.rank;
    out.hermitian_flag = true;
    out.values.resize(phi.values.size());
    for (int p = 0; p < phi.size(); ++p) {
        const Mat& g = h.at(p);
        const Mat adj = g.llt().solve(phi.at(p).adjoint() * g);
        out.at(p) = 0.5 * (phi.at(p) + adj);
    }
    return out;
}

double self_adjointness_defect(const EndoField& phi, const MetricField& h) {
    double worst = 0.0;
    for (int p = 0; p < phi.size(); ++p) {
        const Mat gp = h.at(p) * phi.at(p);
        const double scale = std::max(1e-300, gp.norm());
        worst = std::max(worst, (gp - gp.adjoint()).norm() / scale);
    }
    return worst;
}

EigenRange endo_eigen_range(const EndoField& phi, const MetricField& h,
                            const SectionBasis& basis) {
    const MetricField m = to_normalized(h, basis);
    const EndoField psi = endo_to_normalized(phi, basis);
    EigenRange r;
    bool first = true;
    for (int p = 0; p < m.size(); ++p) {
        // Eigenvalues of an h-self-adjoint endo are those of L^* psi L^{-*}.
        Eigen::LLT<Mat> llt(m.at(p));
        const Mat l = llt.matrixL();
        const Mat a = l.adjoint() * psi.at(p);
        const Mat b = l.triangularView<Eigen::Lower>().solve(a.adjoint()).adjoint();
        Eigen::SelfAdjointEigenSolver<Mat> es(hermitize(b), Eigen::EigenvaluesOnly);
        const double lmin = es.eigenvalues().minCoeff();
        const double lmax = es.eigenvalues().maxCoeff();
        if (first) {
            r.min = lmin;
            r.max = lmax;
            first = false;
        } else {
            r.min = std::min(r.min, lmin);
            r.max = std::max(r.max, lmax);
        }
    }
    return r;
}

double metric_max_condition(const MetricField& h, const SectionBasis& basis) {
    const MetricField m = to_normalized(h, basis);
    double worst = 1.0;
    for (int p = 0; p < m.size(); ++p) {
        Eigen::SelfAdjointEigenSolver<Mat> es(m.at(p), Eigen::EigenvaluesOnly);
        const double lmin = es.eigenvalues().minCoeff();
        const double lmax = es.eigenvalues().maxCoeff();
        if (lmin <= 0.0) return std::numeric_limits<double>::infinity();
        worst = std::max(worst, lmax / lmin);
    }
    return worst;
}

double integral_trace(const EndoField& phi, const QuadratureGrid& grid) {
    double s = 0.0;
    for (int p = 0; p < phi.size(); ++p)
        s += grid.weights[static_cast<std::size_t>(p)] * phi.at(p).trace().real();
    return s;
}

}  // namespace balmet
