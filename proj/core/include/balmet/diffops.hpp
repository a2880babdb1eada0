// diffops.hpp - structured-grid derivatives in the (u, theta) chart
#pragma once

#include <vector>

#include "balmet/fields.hpp"
#include "balmet/grid.hpp"
#include "balmet/types.hpp"

namespace balmet {

// Derivative operators for matrix fields sampled on a QuadratureGrid:
// spectral differentiation in the periodic angle, Fornberg finite-difference
// stencils in the compactified radial variable u (4th order on the
// non-uniform Gauss-Legendre nodes).
//
// d_z and d_zbar return the dz / dzbar coefficient fields; d_zbar_dz applies
// the mixed second derivative directly (one quarter of the flat Laplacian),
// which avoids re-differencing first-derivative fields whose radial profiles
// are not smooth in u at the poles.
class DiffOps {
  public:
    explicit DiffOps(const QuadratureGrid& grid, int radial_stencil = 7);

    std::vector<Mat> d_theta(const std::vector<Mat>& x) const;
    std::vector<Mat> d_theta2(const std::vector<Mat>& x) const;
    std::vector<Mat> d_u(const std::vector<Mat>& x) const;
    std::vector<Mat> d_u2(const std::vector<Mat>& x) const;

    std::vector<Mat> d_z(const std::vector<Mat>& x) const;
    std::vector<Mat> d_zbar(const std::vector<Mat>& x) const;
    std::vector<Mat> d_zbar_dz(const std::vector<Mat>& x) const;

    const QuadratureGrid& grid() const { return *grid_; }

  private:
    const QuadratureGrid* grid_;
    int width_;
    RMat dtheta1_;                          // n_theta x n_theta
    RMat dtheta2_;
    std::vector<int> stencil_start_;        // per radial node
    std::vector<std::vector<double>> w1_;   // first-derivative weights in u
    std::vector<std::vector<double>> w2_;   // second-derivative weights in u
};

// Fornberg weights for derivatives 0..max_order at point xi from nodes x.
// weights[m][i] multiplies f(x[i]) in the m-th derivative.
std::vector<std::vector<double>> fornberg_weights(double xi, const std::vector<double>& x,
                                                  int max_order);

}  // namespace balmet
