// grid.hpp - quadrature grid on the Riemann sphere, Fubini-Study volume form
#pragma once

#include <vector>

#include "balmet/types.hpp"

namespace balmet {

// Gauss-Legendre nodes and weights on [0,1]; weights sum to 1.
void gauss_legendre_01(int n, std::vector<double>& nodes, std::vector<double>& weights);

// Structured point set on P^1 in the affine chart z, with volume weights for
// the unit-volume Fubini-Study form omega = (i/2pi) ddbar log(1+|z|^2).
//
// Layout is angle-major: point p = j * n_theta + i has radial index j and
// angle index i.  Radial nodes are Gauss-Legendre in the compactified
// variable u = |z|^2/(1+|z|^2); angles are uniform with a half-step offset.
struct QuadratureGrid {
    int n_theta = 0;
    int n_radial = 0;
    std::vector<double> u;          // radial nodes, size n_radial, in (0,1)
    std::vector<double> ur_weight;  // radial GL weights, sum = 1
    std::vector<double> theta;      // angle nodes, size n_theta
    std::vector<cxd> points;        // z_p, size n_radial * n_theta
    std::vector<double> weights;    // w_p, sum = V = 1
    int max_exact_degree = 0;       // largest m with fs-weighted monomials exact

    int size() const { return n_theta * n_radial; }
    int radial_index(int p) const { return p / n_theta; }
    int angle_index(int p) const { return p % n_theta; }
    int index(int j_radial, int i_theta) const { return j_radial * n_theta + i_theta; }

    // omega density g(z) = (1+|z|^2)^{-2} = (1-u)^2 in the chart.
    double omega_density(int p) const {
        const double s = 1.0 - u[static_cast<std::size_t>(radial_index(p))];
        return s * s;
    }
};

// Builds the grid and runs the exactness self-test against the closed-form
// Beta values; throws ResolutionTooLowError if the declared bound fails.
// The grid is exact (to ~1e-12 relative) for integrands |z|^{2j}/(1+|z|^2)^m
// with 0 <= j <= m <= 2*n_phi - 1.
QuadratureGrid build_grid(int n_theta, int n_phi);

// Closed form of the fs-weighted monomial integral:
//   int |z|^{2j} (1+|z|^2)^{-m} omega = j! (m-j)! / (m+1)!
double fs_monomial_integral(int j, int m);

// Integrates a scalar grid function against omega.
double integrate(const QuadratureGrid& grid, const std::vector<double>& f);

}  // namespace balmet
