#include "balmet/diffops.hpp"

#include <algorithm>
#include <cmath>

#include "balmet/errors.hpp"

namespace balmet {

std::vector<std::vector<double>> fornberg_weights(double xi, const std::vector<double>& x,
                                                  int max_order) {
    const int n = static_cast<int>(x.size());
    std::vector<std::vector<double>> w(static_cast<std::size_t>(max_order + 1),
                                       std::vector<double>(static_cast<std::size_t>(n), 0.0));
    double c1 = 1.0;
    double c4 = x[0] - xi;
    w[0][0] = 1.0;
    for (int i = 1; i < n; ++i) {
        const int mn = std::min(i, max_order);
        double c2 = 1.0;
        const double c5 = c4;
        c4 = x[static_cast<std::size_t>(i)] - xi;
        for (int j = 0; j < i; ++j) {
            const double c3 = x[static_cast<std::size_t>(i)] - x[static_cast<std::size_t>(j)];
            c2 *= c3;
            if (j == i - 1) {
                for (int m = mn; m >= 1; --m)
                    w[static_cast<std::size_t>(m)][static_cast<std::size_t>(i)] =
                        c1 * (m * w[static_cast<std::size_t>(m - 1)][static_cast<std::size_t>(i - 1)] -
                              c5 * w[static_cast<std::size_t>(m)][static_cast<std::size_t>(i - 1)]) /
                        c2;
                w[0][static_cast<std::size_t>(i)] = -c1 * c5 * w[0][static_cast<std::size_t>(i - 1)] / c2;
            }
            for (int m = mn; m >= 1; --m)
                w[static_cast<std::size_t>(m)][static_cast<std::size_t>(j)] =
                    (c4 * w[static_cast<std::size_t>(m)][static_cast<std::size_t>(j)] -
                     m * w[static_cast<std::size_t>(m - 1)][static_cast<std::size_t>(j)]) /
                    c3;
            w[0][static_cast<std::size_t>(j)] = c4 * w[0][static_cast<std::size_t>(j)] / c3;
        }
        c1 = c2;
    }
    return w;
}

DiffOps::DiffOps(const QuadratureGrid& grid, int radial_stencil)
    : grid_(&grid), width_(radial_stencil) {
    const int nt = grid.n_theta;
    if (nt % 2 != 0) throw ConfigError("DiffOps: n_theta must be even");
    width_ = std::min(width_, grid.n_radial);

    // Standard trigonometric differentiation matrices on an even uniform grid.
    dtheta1_ = RMat::Zero(nt, nt);
    dtheta2_ = RMat::Zero(nt, nt);
    const double h = 2.0 * kPi / nt;
    for (int j = 0; j < nt; ++j) {
        for (int l = 0; l < nt; ++l) {
            if (j == l) {
                dtheta2_(j, l) = -(nt * nt + 2.0) / 12.0;
            } else {
                const int d = j - l;
                const double sgn = (d % 2 == 0) ? 1.0 : -1.0;
                const double half = 0.5 * h * d;
                dtheta1_(j, l) = 0.5 * sgn / std::tan(half);
                const double s = std::sin(half);
                dtheta2_(j, l) = -sgn * 0.5 / (s * s);
            }
        }
    }

    // Sliding radial stencils on the Gauss-Legendre nodes.
    const int nr = grid.n_radial;
    stencil_start_.resize(static_cast<std::size_t>(nr));
    w1_.resize(static_cast<std::size_t>(nr));
    w2_.resize(static_cast<std::size_t>(nr));
    for (int j = 0; j < nr; ++j) {
        int s = std::clamp(j - width_ / 2, 0, nr - width_);
        stencil_start_[static_cast<std::size_t>(j)] = s;
        std::vector<double> nodes(grid.u.begin() + s, grid.u.begin() + s + width_);
        auto w = fornberg_weights(grid.u[static_cast<std::size_t>(j)], nodes, 2);
        w1_[static_cast<std::size_t>(j)] = w[1];
        w2_[static_cast<std::size_t>(j)] = w[2];
    }
}

std::vector<Mat> DiffOps::d_theta(const std::vector<Mat>& x) const {
    const auto& g = *grid_;
    std::vector<Mat> out(x.size());
    for (int j = 0; j < g.n_radial; ++j) {
        for (int i = 0; i < g.n_theta; ++i) {
            Mat acc = Mat::Zero(x[0].rows(), x[0].cols());
            for (int l = 0; l < g.n_theta; ++l) {
                const double c = dtheta1_(i, l);
                if (c != 0.0) acc += c * x[static_cast<std::size_t>(g.index(j, l))];
            }
            out[static_cast<std::size_t>(g.index(j, i))] = std::move(acc);
        }
    }
    return out;
}

std::vector<Mat> DiffOps::d_theta2(const std::vector<Mat>& x) const {
    const auto& g = *grid_;
    std::vector<Mat> out(x.size());
    for (int j = 0; j < g.n_radial; ++j) {
        for (int i = 0; i < g.n_theta; ++i) {
            Mat acc = Mat::Zero(x[0].rows(), x[0].cols());
            for (int l = 0; l < g.n_theta; ++l)
                acc += dtheta2_(i, l) * x[static_cast<std::size_t>(g.index(j, l))];
            out[static_cast<std::size_t>(g.index(j, i))] = std::move(acc);
        }
    }
    return out;
}

std::vector<Mat> DiffOps::d_u(const std::vector<Mat>& x) const {
    const auto& g = *grid_;
    std::vector<Mat> out(x.size());
    for (int j = 0; j < g.n_radial; ++j) {
        const int s = stencil_start_[static_cast<std::size_t>(j)];
        const auto& w = w1_[static_cast<std::size_t>(j)];
        for (int i = 0; i < g.n_theta; ++i) {
            Mat acc = Mat::Zero(x[0].rows(), x[0].cols());
            for (int t = 0; t < width_; ++t)
                acc += w[static_cast<std::size_t>(t)] *
                       x[static_cast<std::size_t>(g.index(s + t, i))];
            out[static_cast<std::size_t>(g.index(j, i))] = std::move(acc);
        }
    }
    return out;
}

std::vector<Mat> DiffOps::d_u2(const std::vector<Mat>& x) const {
    const auto& g = *grid_;
    std::vector<Mat> out(x.size());
    for (int j = 0; j < g.n_radial; ++j) {
        const int s = stencil_start_[static_cast<std::size_t>(j)];
        const auto& w = w2_[static_cast<std::size_t>(j)];
        for (int i = 0; i < g.n_theta; ++i) {
            Mat acc = Mat::Zero(x[0].rows(), x[0].cols());
            for (int t = 0; t < width_; ++t)
                acc += w[static_cast<std::size_t>(t)] *
                       x[static_cast<std::size_t>(g.index(s + t, i))];
            out[static_cast<std::size_t>(g.index(j, i))] = std::move(acc);
        }
    }
    return out;
}

std::vector<Mat> DiffOps::d_z(const std::vector<Mat>& x) const {
    const auto& g = *grid_;
    const auto du = d_u(x);
    const auto dth = d_theta(x);
    std::vector<Mat> out(x.size());
    for (int p = 0; p < g.size(); ++p) {
        const int j = g.radial_index(p);
        const double u = g.u[static_cast<std::size_t>(j)];
        const double rho = std::sqrt(u / (1.0 - u));
        const double du_drho = 2.0 * rho * (1.0 - u) * (1.0 - u);
        const double th = g.theta[static_cast<std::size_t>(g.angle_index(p))];
        const cxd phase = std::polar(0.5, -th);
        out[static_cast<std::size_t>(p)] =
            phase * (du_drho * du[static_cast<std::size_t>(p)] -
                     (cxd(0.0, 1.0) / rho) * dth[static_cast<std::size_t>(p)]);
    }
    return out;
}

std::vector<Mat> DiffOps::d_zbar(const std::vector<Mat>& x) const {
    const auto& g = *grid_;
    const auto du = d_u(x);
    const auto dth = d_theta(x);
    std::vector<Mat> out(x.size());
    for (int p = 0; p < g.size(); ++p) {
        const int j = g.radial_index(p);
        const double u = g.u[static_cast<std::size_t>(j)];
        const double rho = std::sqrt(u / (1.0 - u));
        const double du_drho = 2.0 * rho * (1.0 - u) * (1.0 - u);
        const double th = g.theta[static_cast<std::size_t>(g.angle_index(p))];
        const cxd phase = std::polar(0.5, th);
        out[static_cast<std::size_t>(p)] =
            phase * (du_drho * du[static_cast<std::size_t>(p)] +
                     (cxd(0.0, 1.0) / rho) * dth[static_cast<std::size_t>(p)]);
    }
    return out;
}

std::vector<Mat> DiffOps::d_zbar_dz(const std::vector<Mat>& x) const {
    // d_zbar d_z = (1/4)(d_rho^2 + rho^{-1} d_rho + rho^{-2} d_theta^2), with
    // d_rho^2 = (du/drho)^2 d_u^2 + (d2u/drho2) d_u.
    const auto& g = *grid_;
    const auto du = d_u(x);
    const auto du2 = d_u2(x);
    const auto dth2 = d_theta2(x);
    std::vector<Mat> out(x.size());
    for (int p = 0; p < g.size(); ++p) {
        const int j = g.radial_index(p);
        const double u = g.u[static_cast<std::size_t>(j)];
        const double omu = 1.0 - u;
        const double rho2 = u / omu;
        const double rho = std::sqrt(rho2);
        const double du_drho = 2.0 * rho * omu * omu;
        const double d2u_drho2 = 2.0 * (1.0 - 4.0 * u) * omu * omu;
        out[static_cast<std::size_t>(p)] =
            0.25 * ((du_drho * du_drho) * du2[static_cast<std::size_t>(p)] +
                    (d2u_drho2 + du_drho / rho) * du[static_cast<std::size_t>(p)] +
                    (1.0 / rho2) * dth2[static_cast<std::size_t>(p)]);
    }
    return out;
}

}  // namespace balmet
