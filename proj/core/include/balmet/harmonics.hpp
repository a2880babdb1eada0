// harmonics.hpp - spherical-harmonic projection, Poisson solve, mode filter
#pragma once

#include <utility>
#include <vector>

#include "balmet/diffops.hpp"
#include "balmet/fields.hpp"
#include "balmet/grid.hpp"
#include "balmet/types.hpp"

namespace balmet {

// Spherical harmonics evaluated on the grid, orthonormal for the unit-volume
// measure: int Y_{lm} conj(Y_{l'm'}) omega = delta.  The Laplace-Beltrami
// operator of omega has Delta Y_l = -4 pi l(l+1) Y_l.
class HarmonicBasis {
  public:
    HarmonicBasis(const QuadratureGrid& grid, int lmax);

    int lmax() const { return lmax_; }
    int count() const { return static_cast<int>(lm_.size()); }
    std::pair<int, int> lm(int idx) const { return lm_[static_cast<std::size_t>(idx)]; }

    // c_{lm} = int f conj(Y_{lm}) omega for a complex scalar grid function.
    Vec project(const Vec& f) const;
    Vec reconstruct(const Vec& coeffs) const;

    // Entrywise band-limit of an r x r matrix field (l <= lmax modes kept).
    std::vector<Mat> filter(const std::vector<Mat>& field) const;

    const QuadratureGrid& grid() const { return *grid_; }
    double eigenvalue(int l) const { return -4.0 * kPi * l * (l + 1.0); }

  private:
    const QuadratureGrid* grid_;
    int lmax_;
    std::vector<std::pair<int, int>> lm_;
    Mat values_;            // P x count
    Mat weighted_adjoint_;  // count x P, rows conj(Y) * w
};

// Laplace-Beltrami of omega on scalar fields: (4 pi / g) d_zbar d_z f.
Vec laplace_beltrami(const DiffOps& ops, const Vec& f);

// Mean-zero solution of Delta_omega theta = rhs via harmonic projection.
// Throws SolverNonConvergenceError when the truncated expansion cannot
// represent the right-hand side to `tol` in sup norm.
std::vector<double> poisson_solve(const HarmonicBasis& basis, const std::vector<double>& rhs,
                                  double tol = 1e-8);

}  // namespace balmet
