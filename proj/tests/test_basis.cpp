#include <doctest.h>

#include <cmath>

#include "balmet/errors.hpp"
#include "balmet/model.hpp"

using namespace balmet;

TEST_CASE("line bundle O(2): three monomial columns") {
    ModelConfig cfg;
    cfg.degrees = {0};
    cfg.k = 2;
    cfg.n_theta = 16;
    cfg.n_phi = 16;
    const Model m = make_model(cfg);
    CHECK(m.section_count() == 3);
    const cxd z = m.grid.points[5];
    const Mat& s = m.basis.eval[5];
    CHECK(s.rows() == 1);
    CHECK(s.cols() == 3);
    CHECK(std::abs(s(0, 0) - cxd(1.0, 0.0)) < 1e-15);
    CHECK(std::abs(s(0, 1) - z) < 1e-15);
    CHECK(std::abs(s(0, 2) - z * z) < 1e-14);
}

TEST_CASE("split bundle block sizes: degrees=[1,-1], k=4") {
    ModelConfig cfg;
    cfg.degrees = {1, -1};
    cfg.k = 4;
    cfg.n_theta = 16;
    cfg.n_phi = 16;
    const Model m = make_model(cfg);
    CHECK(m.section_count() == 10);  // 6 + 4
    int block0 = 0, block1 = 0;
    for (int a = 0; a < m.section_count(); ++a) {
        if (m.basis.block_index[static_cast<std::size_t>(a)] == 0) ++block0;
        else ++block1;
    }
    CHECK(block0 == 6);
    CHECK(block1 == 4);
    // Blockwise zero pattern.
    for (int p = 0; p < m.grid.size(); p += 37) {
        const Mat& s = m.basis.eval[static_cast<std::size_t>(p)];
        for (int a = 0; a < m.section_count(); ++a)
            for (int i = 0; i < 2; ++i)
                if (i != m.basis.block_index[static_cast<std::size_t>(a)])
                    CHECK(std::abs(s(i, a)) == 0.0);
    }
}

TEST_CASE("k=0 trivial bundle keeps the constant section") {
    ModelConfig cfg;
    cfg.degrees = {0};
    cfg.k = 0;
    cfg.n_theta = 16;
    cfg.n_phi = 16;
    const Model m = make_model(cfg);
    CHECK(m.section_count() == 1);
}

TEST_CASE("section count matches Riemann-Roch for assorted models") {
    for (const auto& degrees : {std::vector<int>{0}, {3}, {1, -1}, {2, 2}, {1, 0, -1}}) {
        for (int k : {2, 5, 8}) {
            ModelConfig cfg;
            cfg.degrees = degrees;
            cfg.k = k;
            cfg.n_theta = 16;
            cfg.n_phi = 32;
            const Model m = make_model(cfg);
            int expected = 0;
            for (int a : degrees) expected += a + k + 1;
            CHECK(m.section_count() == expected);
            CHECK(static_cast<int>(m.basis.block_index.size()) == expected);
        }
    }
}

TEST_CASE("intrinsic Gram of monomials is the diagonal Beta matrix") {
    ModelConfig cfg;
    cfg.degrees = {1, -1};
    cfg.k = 4;
    cfg.n_theta = 24;
    cfg.n_phi = 24;
    const Model m = make_model(cfg);
    const int n = m.section_count();
    Mat gram = Mat::Zero(n, n);
    for (int p = 0; p < m.grid.size(); ++p)
        gram += m.grid.weights[static_cast<std::size_t>(p)] *
                m.basis.normalized_eval[static_cast<std::size_t>(p)].adjoint() *
                m.basis.normalized_eval[static_cast<std::size_t>(p)];
    for (int a = 0; a < n; ++a) {
        for (int b = 0; b < n; ++b) {
            if (a == b) {
                const int i = m.basis.block_index[static_cast<std::size_t>(a)];
                const int mm = m.cfg.degrees[static_cast<std::size_t>(i)] + m.cfg.k;
                const int j = m.basis.block_degree[static_cast<std::size_t>(a)];
                // 1/((m+1) C(m,j))
                double binom = 1.0;
                for (int t = 1; t <= j; ++t) binom *= static_cast<double>(mm - j + t) / t;
                const double expected = 1.0 / ((mm + 1) * binom);
                CHECK(std::abs(gram(a, a).real() - expected) < 1e-10 * expected);
            } else {
                CHECK(std::abs(gram(a, b)) < 1e-12);
            }
        }
    }
}

TEST_CASE("stacked rank equals N_k (columns span)") {
    ModelConfig cfg;
    cfg.degrees = {1, -1};
    cfg.k = 3;
    cfg.n_theta = 16;
    cfg.n_phi = 16;
    const Model m = make_model(cfg);
    Eigen::ColPivHouseholderQR<Mat> qr(m.basis.stacked);
    CHECK(qr.rank() == m.section_count());
}

TEST_CASE("config invariants are validated") {
    ModelConfig cfg;
    cfg.degrees = {};
    CHECK_THROWS_AS(cfg.validate(), ConfigError);
    cfg.degrees = {-3};
    cfg.k = 1;
    CHECK_THROWS_AS(cfg.validate(), ConfigError);
    cfg.degrees = {0};
    cfg.k = 40;
    cfg.n_phi = 16;  // too coarse for degree 80 products
    CHECK_THROWS_AS(make_model(cfg), ConfigError);
}

TEST_CASE("scalar curvature constant") {
    CHECK(scalar_curvature_constant() == 2.0);
}
