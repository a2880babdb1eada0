// basis.hpp - split-bundle model configuration and evaluated section bases
#pragma once

#include <vector>

#include "balmet/grid.hpp"
#include "balmet/types.hpp"

namespace balmet {

// Splitting type of E = O(a_1) + ... + O(a_r) and the twist level k.
struct ModelConfig {
    std::vector<int> degrees;
    int k = 0;
    int n_theta = 64;
    int n_phi = 64;

    int rank() const { return static_cast<int>(degrees.size()); }
    int degree_sum() const {
        int d = 0;
        for (int a : degrees) d += a;
        return d;
    }
    // dim H^0(X, E(k)) = sum_i (a_i + k + 1)
    int section_count() const {
        int n = 0;
        for (int a : degrees) n += a + k + 1;
        return n;
    }
    // slope deg(E)/(r V) with V = 1
    double slope() const { return static_cast<double>(degree_sum()) / rank(); }
    void validate() const;
};

// Monomial basis of H^0(X, E(k)) evaluated on the grid.  Column alpha of
// eval[p] is section s_alpha at z_p in the trivialization; the basis is
// blockwise: summand i carries monomials 1, z, ..., z^{a_i + k}.
//
// sigma_k_weight[p] holds, per summand, the fiber weight
// (1+|z_p|^2)^{-(a_i+k)} of the reference split metric on E(k); it converts
// trivialization vectors to intrinsic norms.  normalized_eval pre-multiplies
// eval by the square root of that weight, which keeps every entry in [0,1]
// and is what the numerical kernels consume.
struct SectionBasis {
    ModelConfig cfg;
    std::vector<Mat> eval;             // per point, r x N
    std::vector<Mat> normalized_eval;  // per point, r x N, rows scaled by sqrt weight
    Mat stacked;                       // (P*r) x N, normalized_eval stacked by point
    std::vector<RVec> sigma_k_weight;  // per point, r entries
    std::vector<int> block_index;      // alpha -> summand i
    std::vector<int> block_degree;     // alpha -> monomial degree j
    RVec monomial_scale;               // diagonal rescaling used for conditioning

    int rank() const { return cfg.rank(); }
    int section_count() const { return static_cast<int>(block_index.size()); }
};

// Evaluates the monomial basis on the grid.  Requires the grid to be exact
// for degree 2 * max_i(a_i + k).
SectionBasis build_section_basis(const ModelConfig& cfg, const QuadratureGrid& grid);

// S(omega) for the unit-volume Fubini-Study form, pinned operationally by the
// Bergman density of O(k): B_k = k + d + 1 = k (1 + (d + S/2)/k) forces S = 2.
double scalar_curvature_constant();

}  // namespace balmet
