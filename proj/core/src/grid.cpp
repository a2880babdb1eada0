#include "balmet/grid.hpp"

#include <cmath>
#include <string>

#include "balmet/errors.hpp"

namespace balmet {

double fs_monomial_integral(int j, int m) {
    // j!(m-j)!/(m+1)! evaluated multiplicatively.
    double v = 1.0 / (m + 1.0);
    for (int i = 1; i <= j; ++i) v *= static_cast<double>(i) / (m + 1 - i);
    return v;
}

double integrate(const QuadratureGrid& grid, const std::vector<double>& f) {
    double s = 0.0;
    for (std::size_t p = 0; p < grid.weights.size(); ++p) s += grid.weights[p] * f[p];
    return s;
}

QuadratureGrid build_grid(int n_theta, int n_phi) {
    if (n_theta < 8 || n_phi < 8)
        throw ConfigError("build_grid: n_theta and n_phi must both be >= 8");

    QuadratureGrid g;
    g.n_theta = n_theta;
    g.n_radial = n_phi;
    gauss_legendre_01(n_phi, g.u, g.ur_weight);

    // Half-step angle offset keeps stencils off the axis symmetry lines.
    g.theta.resize(static_cast<std::size_t>(n_theta));
    for (int i = 0; i < n_theta; ++i)
        g.theta[static_cast<std::size_t>(i)] = 2.0 * kPi * (i + 0.5) / n_theta;

    g.points.resize(static_cast<std::size_t>(g.size()));
    g.weights.resize(static_cast<std::size_t>(g.size()));
    for (int j = 0; j < n_phi; ++j) {
        const double uj = g.u[static_cast<std::size_t>(j)];
        const double rho = std::sqrt(uj / (1.0 - uj));
        const double wj = g.ur_weight[static_cast<std::size_t>(j)] / n_theta;
        for (int i = 0; i < n_theta; ++i) {
            const std::size_t p = static_cast<std::size_t>(g.index(j, i));
            const double th = g.theta[static_cast<std::size_t>(i)];
            g.points[p] = cxd(rho * std::cos(th), rho * std::sin(th));
            g.weights[p] = wj;
        }
    }

    // In u the integrand u^j (1-u)^{m-j} is a degree-m polynomial, so n_phi
    // Gauss-Legendre nodes are exact through m = 2*n_phi - 1.
    g.max_exact_degree = 2 * n_phi - 1;

    // Exactness self-test at the declared bound.
    const int m = g.max_exact_degree;
    for (int j : {0, m / 2, m}) {
        double s = 0.0;
        for (int jr = 0; jr < n_phi; ++jr) {
            const double uj = g.u[static_cast<std::size_t>(jr)];
            s += g.ur_weight[static_cast<std::size_t>(jr)] *
                 std::pow(uj, j) * std::pow(1.0 - uj, m - j);
        }
        const double exact = fs_monomial_integral(j, m);
        if (std::abs(s - exact) > 1e-10 * std::abs(exact))
            throw ResolutionTooLowError(
                "build_grid: quadrature self-test failed at degree " + std::to_string(m) +
                ", j=" + std::to_string(j));
    }
    return g;
}

}  // namespace balmet
