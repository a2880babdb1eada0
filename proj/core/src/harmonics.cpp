#include "balmet/harmonics.hpp"

#include <cmath>
#include <string>

#include "balmet/errors.hpp"

namespace balmet {

namespace {

// Associated Legendre P_l^m(v) for m >= 0, standard recurrences.
double assoc_legendre(int l, int m, double v) {
    double pmm = 1.0;
    if (m > 0) {
        const double somx2 = std::sqrt((1.0 - v) * (1.0 + v));
        double fact = 1.0;
        for (int i = 1; i <= m; ++i) {
            pmm *= -fact * somx2;
            fact += 2.0;
        }
    }
    if (l == m) return pmm;
    double pmmp1 = v * (2.0 * m + 1.0) * pmm;
    if (l == m + 1) return pmmp1;
    double pll = 0.0;
    for (int ll = m + 2; ll <= l; ++ll) {
        pll = (v * (2.0 * ll - 1.0) * pmmp1 - (ll + m - 1.0) * pmm) / (ll - m);
        pmm = pmmp1;
        pmmp1 = pll;
    }
    return pll;
}

// sqrt((2l+1) (l-m)!/(l+m)!) so that the mean of |Y|^2 over the sphere is 1.
double norm_factor(int l, int m) {
    double f = 2.0 * l + 1.0;
    for (int i = l - m + 1; i <= l + m; ++i) f /= i;
    return std::sqrt(f);
}

}  // namespace

HarmonicBasis::HarmonicBasis(const QuadratureGrid& grid, int lmax)
    : grid_(&grid), lmax_(lmax) {
    if (lmax < 0) throw ConfigError("HarmonicBasis: lmax must be >= 0");
    for (int l = 0; l <= lmax; ++l)
        for (int m = -l; m <= l; ++m) lm_.emplace_back(l, m);

    const int npts = grid.size();
    values_.resize(npts, count());
    for (int idx = 0; idx < count(); ++idx) {
        const auto [l, m] = lm_[static_cast<std::size_t>(idx)];
        const int am = std::abs(m);
        const double nf = norm_factor(l, am);
        for (int p = 0; p < npts; ++p) {
            const double v = 1.0 - 2.0 * grid.u[static_cast<std::size_t>(grid.radial_index(p))];
            const double th = grid.theta[static_cast<std::size_t>(grid.angle_index(p))];
            const double plm = assoc_legendre(l, am, v);
            cxd y = nf * plm * std::polar(1.0, am * th);
            if (m < 0) y = std::conj(y) * ((am % 2 == 0) ? 1.0 : -1.0);
            values_(p, idx) = y;
        }
    }
    weighted_adjoint_.resize(count(), npts);
    for (int p = 0; p < npts; ++p)
        weighted_adjoint_.col(p) =
            grid.weights[static_cast<std::size_t>(p)] * values_.row(p).adjoint();
}

Vec HarmonicBasis::project(const Vec& f) const {
    return weighted_adjoint_ * f;
}

Vec HarmonicBasis::reconstruct(const Vec& coeffs) const {
    return values_ * coeffs;
}

std::vector<Mat> HarmonicBasis::filter(const std::vector<Mat>& field) const {
    const int npts = grid_->size();
    if (static_cast<int>(field.size()) != npts)
        throw ShapeMismatchError("HarmonicBasis::filter: field size mismatch");
    const int r = static_cast<int>(field[0].rows());
    const int r2 = r * static_cast<int>(field[0].cols());
    Mat flat(npts, r2);
    for (int p = 0; p < npts; ++p)
        flat.row(p) = Eigen::Map<const Vec>(field[static_cast<std::size_t>(p)].data(), r2);
    Mat coeffs;
    coeffs.noalias() = weighted_adjoint_ * flat;
    Mat smooth;
    smooth.noalias() = values_ * coeffs;
    std::vector<Mat> out(static_cast<std::size_t>(npts));
    for (int p = 0; p < npts; ++p) {
        const Vec row = smooth.row(p);
        out[static_cast<std::size_t>(p)] =
            Eigen::Map<const Mat>(row.data(), field[0].rows(), field[0].cols());
    }
    return out;
}

Vec laplace_beltrami(const DiffOps& ops, const Vec& f) {
    const auto& g = ops.grid();
    std::vector<Mat> field(static_cast<std::size_t>(g.size()));
    for (int p = 0; p < g.size(); ++p) {
        field[static_cast<std::size_t>(p)] = Mat::Constant(1, 1, f(p));
    }
    const auto mixed = ops.d_zbar_dz(field);
    Vec out(g.size());
    for (int p = 0; p < g.size(); ++p)
        out(p) = 4.0 * kPi / g.omega_density(p) * mixed[static_cast<std::size_t>(p)](0, 0);
    return out;
}

std::vector<double> poisson_solve(const HarmonicBasis& basis, const std::vector<double>& rhs,
                                  double tol) {
    const auto& grid = basis.grid();
    if (static_cast<int>(rhs.size()) != grid.size())
        throw ShapeMismatchError("poisson_solve: rhs size mismatch");
    Vec f(grid.size());
    for (int p = 0; p < grid.size(); ++p) f(p) = rhs[static_cast<std::size_t>(p)];

    Vec coeffs = basis.project(f);
    // Drop the constant mode (solution defined modulo constants; rhs must be
    // mean-zero for solvability).
    double scale = 0.0;
    for (int p = 0; p < grid.size(); ++p) scale = std::max(scale, std::abs(f(p)));
    const double mean = std::abs(coeffs(0));
    if (mean > tol * std::max(1.0, scale))
        throw SolverNonConvergenceError("poisson_solve: right-hand side has nonzero mean " +
                                        std::to_string(mean));
    // Truncation check: the projected rhs must reproduce the input.
    Vec resid = basis.reconstruct(coeffs) - f;
    double sup = 0.0;
    for (int p = 0; p < grid.size(); ++p) sup = std::max(sup, std::abs(resid(p)));
    if (sup > tol * std::max(1.0, scale))
        throw SolverNonConvergenceError(
            "poisson_solve: harmonic truncation residual " + std::to_string(sup) +
            " exceeds tolerance (raise lmax or smooth the rhs)");

    coeffs(0) = 0.0;
    for (int idx = 1; idx < basis.count(); ++idx) {
        const int l = basis.lm(idx).first;
        coeffs(idx) /= basis.eigenvalue(l);
    }
    const Vec theta = basis.reconstruct(coeffs);
    std::vector<double> out(static_cast<std::size_t>(grid.size()));
    for (int p = 0; p < grid.size(); ++p) out[static_cast<std::size_t>(p)] = theta(p).real();
    return out;
}

}  // namespace balmet
