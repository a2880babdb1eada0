#include "balmet/bergman.hpp"

#include <cmath>
#include <string>

#include "balmet/errors.hpp"

namespace balmet {

namespace {

// T(p) = normalized_eval(p) * frame, stacked (P*r) x N.
Mat stacked_ortho_sections(const SectionBasis& basis, const OrthoFrame& frame) {
    Mat t;
    t.noalias() = basis.stacked * frame.coeffs;
    return t;
}

double pow_kn(const Model& model) {
    return std::pow(static_cast<double>(model.cfg.k), kDimension);
}

}  // namespace

void validate_inner(const HermitianInner& h) {
    const double scale = h.matrix.norm();
    if ((h.matrix - h.matrix.adjoint()).norm() > 1e-12 * scale)
        throw RankDeficiencyError("HermitianInner: matrix is not Hermitian");
}

OrthoFrame ortho_frame(const SectionBasis& basis, const HermitianInner& h) {
    validate_inner(h);
    const RVec& d = basis.monomial_scale;
    const Mat scaled = d.cast<cxd>().asDiagonal() * h.matrix * d.cast<cxd>().asDiagonal();
    Eigen::LLT<Mat> llt(hermitize(scaled));
    if (llt.info() != Eigen::Success)
        throw RankDeficiencyError("ortho_frame: inner product is not positive definite");
    // coeffs = D L^{-*}: columns are monomial coefficients of the
    // H-orthonormal basis.
    const Mat u = llt.matrixU();
    Mat inv = Mat::Identity(h.dim(), h.dim());
    u.triangularView<Eigen::Upper>().solveInPlace(inv);
    OrthoFrame f;
    f.coeffs.noalias() = d.cast<cxd>().asDiagonal() * inv;
    return f;
}

HermitianInner hilb(const Model& model, const MetricField& h) {
    validate_metric(h, model.basis);
    const auto& basis = model.basis;
    const int npts = model.grid.size();
    const int r = model.rank();
    const int n = model.section_count();
    const MetricField m = to_normalized(h, basis);

    // Stack sqrt(w_p) L_p^* S_n(p) and take one Gram product.
    Mat a(static_cast<Eigen::Index>(npts) * r, n);
    for (int p = 0; p < npts; ++p) {
        Eigen::LLT<Mat> llt(m.at(p));
        if (llt.info() != Eigen::Success)
            throw PositivityLossError("hilb: metric not PD at point " + std::to_string(p));
        const Mat l = llt.matrixL();
        const double sw = std::sqrt(model.grid.weights[static_cast<std::size_t>(p)]);
        a.middleRows(static_cast<Eigen::Index>(p) * r, r).noalias() =
            sw * (l.adjoint() * basis.normalized_eval[static_cast<std::size_t>(p)]);
    }
    HermitianInner out;
    out.matrix.noalias() = model.nk_over_rv() * (a.adjoint() * a);
    out.matrix = hermitize(out.matrix);
    ortho_frame(basis, out);  // positivity check; throws RankDeficiencyError
    return out;
}

MetricField fs(const Model& model, const HermitianInner& h) {
    const OrthoFrame frame = ortho_frame(model.basis, h);
    const Mat t = stacked_ortho_sections(model.basis, frame);
    const int npts = model.grid.size();
    const int r = model.rank();

    MetricField m_out;
    m_out.rank = r;
    m_out.values.resize(static_cast<std::size_t>(npts));
    for (int p = 0; p < npts; ++p) {
        const Mat tp = t.middleRows(static_cast<Eigen::Index>(p) * r, r);
        Mat w = tp * tp.adjoint();
        Eigen::LLT<Mat> llt(hermitize(w));
        if (llt.info() != Eigen::Success)
            throw BasePointFailureError(
                "fs: sections fail to generate the fibre at point " + std::to_string(p));
        m_out.at(p) = llt.solve(Mat::Identity(r, r));
        m_out.at(p) = hermitize(m_out.at(p));
    }
    return from_normalized(m_out, model.basis);
}

MetricField phi_map(const Model& model, const MetricField& h) {
    return fs(model, hilb(model, h));
}

EndoField bergman_density(const Model& model, const MetricField& h) {
    const HermitianInner hk = hilb(model, h);
    const OrthoFrame frame = ortho_frame(model.basis, hk);
    const Mat t = stacked_ortho_sections(model.basis, frame);
    const MetricField m = to_normalized(h, model.basis);
    const int npts = model.grid.size();
    const int r = model.rank();

    EndoField out;
    out.rank = r;
    out.hermitian_flag = true;
    out.values.resize(static_cast<std::size_t>(npts));
    for (int p = 0; p < npts; ++p) {
        const Mat tp = t.middleRows(static_cast<Eigen::Index>(p) * r, r);
        out.at(p) = model.nk_over_rv() * (tp * tp.adjoint()) * m.at(p);
    }
    return endo_from_normalized(out, model.basis);
}

std::vector<double> rho_line(int k, const QuadratureGrid& grid,
                             const std::vector<double>* log_weight) {
    if (k < 0) throw ConfigError("rho_line: k must be >= 0");
    const int npts = grid.size();
    const int n = k + 1;
    if (log_weight && static_cast<int>(log_weight->size()) != npts)
        throw ShapeMismatchError("rho_line: log_weight size mismatch");

    // Normalized monomial values sqrt(w_sigma) z^j, w_sigma = e^phi (1-u)^k.
    Mat ev(npts, n);
    for (int p = 0; p < npts; ++p) {
        const cxd z = grid.points[static_cast<std::size_t>(p)];
        const double omu = 1.0 - grid.u[static_cast<std::size_t>(grid.radial_index(p))];
        double wsig = std::pow(omu, k);
        if (log_weight) wsig *= std::exp((*log_weight)[static_cast<std::size_t>(p)]);
        const double sw = std::sqrt(wsig);
        cxd zj = 1.0;
        for (int j = 0; j < n; ++j) {
            ev(p, j) = sw * zj;
            zj *= z;
        }
    }

    // Un-normalized L^2 Gram (no N_k/rV factor), preconditioned Cholesky.
    Mat gram(n, n);
    gram.setZero();
    for (int p = 0; p < npts; ++p)
        gram.noalias() += grid.weights[static_cast<std::size_t>(p)] *
                          (ev.row(p).adjoint() * ev.row(p));
    RVec d(n);
    for (int j = 0; j < n; ++j) d(j) = 1.0 / std::sqrt(fs_monomial_integral(j, k));
    const Mat scaled = d.cast<cxd>().asDiagonal() * hermitize(gram) * d.cast<cxd>().asDiagonal();
    Eigen::LLT<Mat> llt(hermitize(scaled));
    if (llt.info() != Eigen::Success)
        throw RankDeficiencyError("rho_line: Gram matrix not positive definite");
    const Mat lu = llt.matrixU();
    Mat inv = Mat::Identity(n, n);
    lu.triangularView<Eigen::Upper>().solveInPlace(inv);
    const Mat coeffs = d.cast<cxd>().asDiagonal() * inv;

    const Mat t = ev * coeffs;
    std::vector<double> rho(static_cast<std::size_t>(npts));
    for (int p = 0; p < npts; ++p) rho[static_cast<std::size_t>(p)] = t.row(p).squaredNorm();
    return rho;
}

MomentValue moment_bar(const Model& model, const HermitianInner& h,
                       const std::vector<double>* weight_override) {
    const OrthoFrame frame = ortho_frame(model.basis, h);
    const Mat t = stacked_ortho_sections(model.basis, frame);
    const int npts = model.grid.size();
    const int r = model.rank();
    const std::vector<double>& w = weight_override ? *weight_override : model.grid.weights;
    if (static_cast<int>(w.size()) != npts)
        throw ShapeMismatchError("moment_bar: weight vector size mismatch");

    // mu-bar = sum_p w_p T_p^* (T_p T_p^*)^{-1} T_p, assembled as one Gram.
    Mat a(static_cast<Eigen::Index>(npts) * r, model.section_count());
    for (int p = 0; p < npts; ++p) {
        const Mat tp = t.middleRows(static_cast<Eigen::Index>(p) * r, r);
        Eigen::LLT<Mat> llt(hermitize(Mat(tp * tp.adjoint())));
        if (llt.info() != Eigen::Success)
            throw BasePointFailureError("moment_bar: degenerate fibre Gram at point " +
                                        std::to_string(p));
        const Mat l = llt.matrixL();
        a.middleRows(static_cast<Eigen::Index>(p) * r, r).noalias() =
            std::sqrt(w[static_cast<std::size_t>(p)]) *
            l.triangularView<Eigen::Lower>().solve(tp);
    }
    MomentValue mv;
    mv.matrix.noalias() = a.adjoint() * a;
    mv.matrix = hermitize(mv.matrix);
    mv.frame = frame;
    return mv;
}

MomentValue moment_bar_zero(const Model& model, const HermitianInner& h,
                            const std::vector<double>* weight_override) {
    MomentValue mv = moment_bar(model, h, weight_override);
    const double shift = (model.rank() * kVolume) / model.section_count();
    mv.matrix -= shift * Mat::Identity(mv.matrix.rows(), mv.matrix.cols());
    return mv;
}

EndoField q_apply(const Model& model, const EndoField& phi, const MetricField& h) {
    if (phi.size() != model.grid.size() || phi.rank != model.rank())
        throw ShapeMismatchError("q_apply: shape mismatch");
    const HermitianInner hk = hilb(model, h);
    const OrthoFrame frame = ortho_frame(model.basis, hk);
    const Mat t = stacked_ortho_sections(model.basis, frame);
    const MetricField m = to_normalized(h, model.basis);
    const EndoField psi = endo_to_normalized(phi, model.basis);
    const int npts = model.grid.size();
    const int r = model.rank();
    const int n = model.section_count();

    // W = sum_p w_p T_p^* M_p psi_p T_p  (N x N).
    Mat lhs(static_cast<Eigen::Index>(npts) * r, n);
    for (int p = 0; p < npts; ++p) {
        const Mat tp = t.middleRows(static_cast<Eigen::Index>(p) * r, r);
        lhs.middleRows(static_cast<Eigen::Index>(p) * r, r).noalias() =
            model.grid.weights[static_cast<std::size_t>(p)] *
            (m.at(p) * psi.at(p) * tp);
    }
    Mat w;
    w.noalias() = t.adjoint() * lhs;

    const double kn = pow_kn(model);
    EndoField out;
    out.rank = r;
    out.hermitian_flag = phi.hermitian_flag;
    out.values.resize(static_cast<std::size_t>(npts));
    for (int p = 0; p < npts; ++p) {
        const Mat tp = t.middleRows(static_cast<Eigen::Index>(p) * r, r);
        out.at(p) = kn * (tp * w * tp.adjoint()) * m.at(p);
    }
    return endo_from_normalized(out, model.basis);
}

MomentValue hilb_tangent(const Model& model, const MetricField& h, const EndoField& phi_dot) {
    if (phi_dot.size() != model.grid.size() || phi_dot.rank != model.rank())
        throw ShapeMismatchError("hilb_tangent: shape mismatch");
    const HermitianInner hk = hilb(model, h);
    const OrthoFrame frame = ortho_frame(model.basis, hk);
    const Mat t = stacked_ortho_sections(model.basis, frame);
    const MetricField m = to_normalized(h, model.basis);
    const EndoField psi = endo_to_normalized(phi_dot, model.basis);
    const int npts = model.grid.size();
    const int r = model.rank();
    const int n = model.section_count();

    Mat lhs(static_cast<Eigen::Index>(npts) * r, n);
    for (int p = 0; p < npts; ++p) {
        const Mat tp = t.middleRows(static_cast<Eigen::Index>(p) * r, r);
        lhs.middleRows(static_cast<Eigen::Index>(p) * r, r).noalias() =
            model.grid.weights[static_cast<std::size_t>(p)] *
            (m.at(p) * psi.at(p) * tp);
    }
    MomentValue mv;
    mv.matrix.noalias() = -model.nk_over_rv() * (t.adjoint() * lhs);
    mv.matrix = hermitize(mv.matrix);
    mv.frame = frame;
    return mv;
}

double bergman_distance(const HermitianInner& h0, const HermitianInner& h1, int k,
                        const RVec* scale) {
    if (h0.dim() != h1.dim())
        throw ShapeMismatchError("bergman_distance: dimension mismatch");
    Mat a = h0.matrix;
    Mat b = h1.matrix;
    if (scale) {
        a = scale->cast<cxd>().asDiagonal() * a * scale->cast<cxd>().asDiagonal();
        b = scale->cast<cxd>().asDiagonal() * b * scale->cast<cxd>().asDiagonal();
    }
    Eigen::LLT<Mat> llt(hermitize(a));
    if (llt.info() != Eigen::Success)
        throw RankDeficiencyError("bergman_distance: H0 not positive definite");
    const Mat l = llt.matrixL();
    const Mat w = l.triangularView<Eigen::Lower>().solve(b);
    const Mat white = l.triangularView<Eigen::Lower>().solve(w.adjoint()).adjoint();
    Eigen::SelfAdjointEigenSolver<Mat> es(hermitize(white), Eigen::EigenvaluesOnly);
    if (es.eigenvalues().minCoeff() <= 0.0)
        throw RankDeficiencyError("bergman_distance: H1 not positive definite");
    const double kn = std::pow(static_cast<double>(k), kDimension);
    return std::sqrt(es.eigenvalues().array().log().square().sum() / kn);
}

}  // namespace balmet
