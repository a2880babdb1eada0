#include "balmet/curvature.hpp"

#include <cmath>
#include <string>

#include "balmet/errors.hpp"

namespace balmet {

namespace {

// Diagonal of R^{-1} d_z R at p: entries -(m_i/2) zbar (1-u), for the
// reference weight R = diag((1+|z|^2)^{-m_i/2}).
Vec log_weight_dz(const Model& model, int p) {
    const auto& g = model.grid;
    const cxd z = g.points[static_cast<std::size_t>(p)];
    const double omu = 1.0 - g.u[static_cast<std::size_t>(g.radial_index(p))];
    Vec lam(model.rank());
    for (int i = 0; i < model.rank(); ++i) {
        const int m = model.cfg.degrees[static_cast<std::size_t>(i)] + model.cfg.k;
        lam(i) = -0.5 * m * std::conj(z) * omu;
    }
    return lam;
}

}  // namespace

EndoField lambda_curvature(const Model& model, const MetricField& h) {
    validate_metric(h, model.basis);
    const auto& grid = model.grid;
    const int npts = grid.size();
    const int r = model.rank();

    // Work on the normalized metric M = R^{-1} G R^{-1}; all reference-weight
    // derivatives are analytic, only M is differenced on the grid.
    const MetricField mfield = to_normalized(h, model.basis);
    const auto dzm = model.ops->d_z(mfield.values);
    const auto dzbm = model.ops->d_zbar(mfield.values);
    const auto dzzm = model.ops->d_zbar_dz(mfield.values);

    EndoField out;
    out.rank = r;
    out.hermitian_flag = true;
    out.values.resize(static_cast<std::size_t>(npts));

    for (int p = 0; p < npts; ++p) {
        const double gdens = grid.omega_density(p);
        const Mat& m = mfield.at(p);
        Eigen::LLT<Mat> llt(m);
        if (llt.info() != Eigen::Success)
            throw PositivityLossError("lambda_curvature: metric not PD at point " +
                                      std::to_string(p));
        const Vec lam = log_weight_dz(model, p);
        const Vec lam_bar = lam.conjugate();
        // d_zbar of the diagonal log-weight derivative: -(m_i/2) g.
        Vec dzbar_lam(r);
        for (int i = 0; i < r; ++i) {
            const int mi = model.cfg.degrees[static_cast<std::size_t>(i)] + model.cfg.k;
            dzbar_lam(i) = -0.5 * mi * gdens;
        }

        const Mat minv_dzm = llt.solve(dzm[static_cast<std::size_t>(p)]);
        const Mat minv_dzbm = llt.solve(dzbm[static_cast<std::size_t>(p)]);
        const Mat minv_lam_m = llt.solve(lam.asDiagonal() * m);

        Mat b = Mat::Zero(r, r);
        // d_zbar(Lambda) + M^{-1} d_zbar(Lambda) M
        b += Mat(dzbar_lam.asDiagonal());
        b += llt.solve(dzbar_lam.asDiagonal() * m);
        // d_zbar(M^{-1} Lambda M) cross terms
        b += llt.solve(lam.asDiagonal() * dzbm[static_cast<std::size_t>(p)]);
        b -= minv_dzbm * minv_lam_m;
        // d_zbar(M^{-1} d_z M)
        b += llt.solve(dzzm[static_cast<std::size_t>(p)]);
        b -= minv_dzbm * minv_dzm;
        // commutator with the conjugate log-weight derivative
        const Mat c = minv_lam_m + minv_dzm;
        b += c * lam_bar.asDiagonal() - lam_bar.asDiagonal() * c;

        Mat u = (-1.0 / gdens) * b;
        if (!u.allFinite())
            throw NonFiniteDerivativeError("lambda_curvature: stencil produced NaN/Inf at point " +
                                           std::to_string(p));
        // h-self-adjoint part in the normalized frame.
        out.at(p) = 0.5 * (u + llt.solve(u.adjoint() * m));
    }

    // Conjugate back to the trivialization frame.
    return endo_from_normalized(out, model.basis);
}

EndoField lambda_curvature_untwisted(const Model& model, const MetricField& h) {
    EndoField f = lambda_curvature(model, h);
    const Mat shift = static_cast<double>(model.cfg.k) * Mat::Identity(f.rank, f.rank);
    for (auto& v : f.values) v -= shift;
    return f;
}

EndoField a1_endomorphism(const Model& model, const MetricField& h) {
    EndoField f = lambda_curvature_untwisted(model, h);
    const Mat shift = 0.5 * scalar_curvature_constant() * Mat::Identity(f.rank, f.rank);
    for (auto& v : f.values) v += shift;
    return f;
}

EndoField a1_reduced(const Model& model, const MetricField& h) {
    EndoField f = a1_endomorphism(model, h);
    const double mean = integral_trace(f, model.grid) / (model.rank() * kVolume);
    const Mat shift = mean * Mat::Identity(f.rank, f.rank);
    for (auto& v : f.values) v -= shift;
    return f;
}

}  // namespace balmet
