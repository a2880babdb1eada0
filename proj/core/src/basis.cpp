#include "balmet/basis.hpp"

#include <cmath>
#include <string>

#include "balmet/errors.hpp"

namespace balmet {

void ModelConfig::validate() const {
    if (degrees.empty()) throw ConfigError("ModelConfig: degrees must be non-empty");
    if (k < 0) throw ConfigError("ModelConfig: k must be >= 0");
    for (int a : degrees)
        if (a + k < 0)
            throw ConfigError("ModelConfig: a_i + k must be >= 0 for every summand");
    if (section_count() <= 0) throw ConfigError("ModelConfig: N_k must be positive");
    if (n_theta < 8 || n_phi < 8) throw ConfigError("ModelConfig: grid resolution too low");
}

double scalar_curvature_constant() { return 2.0; }

SectionBasis build_section_basis(const ModelConfig& cfg, const QuadratureGrid& grid) {
    cfg.validate();
    int max_m = 0;
    for (int a : cfg.degrees) max_m = std::max(max_m, a + cfg.k);
    if (grid.max_exact_degree < 2 * max_m)
        throw ConfigError("build_section_basis: grid exact degree " +
                          std::to_string(grid.max_exact_degree) + " < required " +
                          std::to_string(2 * max_m));

    SectionBasis b;
    b.cfg = cfg;
    const int r = cfg.rank();
    const int n = cfg.section_count();

    b.block_index.reserve(static_cast<std::size_t>(n));
    b.block_degree.reserve(static_cast<std::size_t>(n));
    for (int i = 0; i < r; ++i) {
        const int m = cfg.degrees[static_cast<std::size_t>(i)] + cfg.k;
        for (int j = 0; j <= m; ++j) {
            b.block_index.push_back(i);
            b.block_degree.push_back(j);
        }
    }

    const int npts = grid.size();
    b.eval.resize(static_cast<std::size_t>(npts));
    b.normalized_eval.resize(static_cast<std::size_t>(npts));
    b.sigma_k_weight.resize(static_cast<std::size_t>(npts));
    for (int p = 0; p < npts; ++p) {
        const cxd z = grid.points[static_cast<std::size_t>(p)];
        const double one_minus_u = 1.0 - grid.u[static_cast<std::size_t>(grid.radial_index(p))];
        Mat s = Mat::Zero(r, n);
        Mat sn = Mat::Zero(r, n);
        RVec w(r);
        for (int i = 0; i < r; ++i) {
            const int m = cfg.degrees[static_cast<std::size_t>(i)] + cfg.k;
            w(i) = std::pow(one_minus_u, m);
        }
        int col = 0;
        for (int i = 0; i < r; ++i) {
            const int m = cfg.degrees[static_cast<std::size_t>(i)] + cfg.k;
            const double sw = std::sqrt(w(i));
            cxd zj = 1.0;
            for (int j = 0; j <= m; ++j, ++col) {
                s(i, col) = zj;
                sn(i, col) = sw * zj;
                zj *= z;
            }
        }
        b.eval[static_cast<std::size_t>(p)] = std::move(s);
        b.normalized_eval[static_cast<std::size_t>(p)] = std::move(sn);
        b.sigma_k_weight[static_cast<std::size_t>(p)] = std::move(w);
    }

    b.stacked.resize(static_cast<Eigen::Index>(npts) * r, n);
    for (int p = 0; p < npts; ++p)
        b.stacked.middleRows(static_cast<Eigen::Index>(p) * r, r) =
            b.normalized_eval[static_cast<std::size_t>(p)];

    // Diagonal preconditioner: scale each monomial so the reference split FS
    // Gram becomes the identity.  Keeps Cholesky factors well conditioned at
    // large k, where the raw monomial Gram has entries ~ 1/C(m, m/2).
    b.monomial_scale.resize(n);
    const double nk_over_rv = static_cast<double>(n) / (r * kVolume);
    for (int a = 0; a < n; ++a) {
        const int i = b.block_index[static_cast<std::size_t>(a)];
        const int m = cfg.degrees[static_cast<std::size_t>(i)] + cfg.k;
        const int j = b.block_degree[static_cast<std::size_t>(a)];
        b.monomial_scale(a) = 1.0 / std::sqrt(nk_over_rv * fs_monomial_integral(j, m));
    }
    return b;
}

}  // namespace balmet
