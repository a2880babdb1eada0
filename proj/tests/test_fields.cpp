#include <doctest.h>

#include <cmath>
#include <random>

#include "balmet/errors.hpp"
#include "balmet/fields.hpp"
#include "balmet/model.hpp"

using namespace balmet;

namespace {

Model small_model() {
    ModelConfig cfg;
    cfg.degrees = {1, -1};
    cfg.k = 4;
    cfg.n_theta = 16;
    cfg.n_phi = 16;
    return make_model(cfg);
}

}  // namespace

TEST_CASE("zero endomorphism has zero sup norm") {
    const Model m = small_model();
    const MetricField h = fs_metric(m);
    const EndoField zero = constant_endo(Mat::Zero(2, 2), m.grid.size());
    CHECK(endo_sup_norm(zero, h, m.basis) == 0.0);
}

TEST_CASE("conformal scaling: distance(h, e h) = e - 1") {
    const Model m = small_model();
    const MetricField h0 = fs_metric(m);
    const MetricField h1 = scale_metric(h0, std::exp(1.0));
    CHECK(std::abs(metric_sup_distance(h0, h1, m.basis) - (std::exp(1.0) - 1.0)) < 1e-12);
    CHECK(std::abs(metric_sup_distance(h1, h0, m.basis) - (std::exp(1.0) - 1.0)) < 1e-12);
}

TEST_CASE("order-interval distance for diagonal ratio {2, 1/3} is 2") {
    const Model m = small_model();
    MetricField h0 = fs_metric(m);
    MetricField h1 = h0;
    for (int p = 0; p < h0.size(); ++p) {
        h0.at(p)(0, 0) *= 2.0;        // ratio h0/h1 = 2 in the first eigendirection
        h0.at(p)(1, 1) *= 1.0 / 3.0;  // ratio 1/3 in the second
    }
    // Brute-force oracle over the eigenvalue ratios: c = max(2, 3) = 3.
    double c = 1.0;
    for (double ratio : {2.0, 1.0 / 3.0}) {
        c = std::max(c, ratio);
        c = std::max(c, 1.0 / ratio);
    }
    CHECK(std::abs(metric_sup_distance(h0, h1, m.basis) - (c - 1.0)) < 1e-12);
    CHECK(c - 1.0 == 2.0);
}

TEST_CASE("order-interval distance against a random brute-force oracle") {
    const Model m = small_model();
    std::mt19937_64 rng(99);
    auto u = [&]() { return 2.0 * (static_cast<double>(rng() >> 11) * 0x1.0p-53) - 1.0; };
    // Constant Hermitian perturbations in the normalized frame.
    Mat a(2, 2), b(2, 2);
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j) {
            a(i, j) = cxd(u(), u());
            b(i, j) = cxd(u(), u());
        }
    a = 0.3 * hermitize(a);
    b = 0.3 * hermitize(b);
    MetricField m0 = to_normalized(fs_metric(m), m.basis);
    MetricField m1 = m0;
    for (int p = 0; p < m0.size(); ++p) {
        m0.at(p) = herm_exp(a);
        m1.at(p) = herm_exp(b);
    }
    const MetricField h0 = from_normalized(m0, m.basis);
    const MetricField h1 = from_normalized(m1, m.basis);

    // Oracle: smallest c with h0 <= c h1 and h1 <= c h0 via bisection on the
    // pointwise PSD test.
    auto psd_leq = [&](const Mat& x, const Mat& y, double c) {
        return herm_min_eigenvalue(hermitize(c * y - x)) >= -1e-14;
    };
    double lo = 1.0, hi = 64.0;
    for (int it = 0; it < 60; ++it) {
        const double mid = 0.5 * (lo + hi);
        if (psd_leq(herm_exp(a), herm_exp(b), mid) && psd_leq(herm_exp(b), herm_exp(a), mid))
            hi = mid;
        else
            lo = mid;
    }
    CHECK(std::abs(metric_sup_distance(h0, h1, m.basis) - (hi - 1.0)) < 1e-8);
}

TEST_CASE("self-adjoint part is idempotent and metric-compatible") {
    const Model m = small_model();
    const MetricField h = fs_metric(m);
    std::mt19937_64 rng(7);
    auto u = [&]() { return 2.0 * (static_cast<double>(rng() >> 11) * 0x1.0p-53) - 1.0; };
    EndoField phi = constant_endo(Mat::Zero(2, 2), m.grid.size());
    for (int p = 0; p < phi.size(); ++p)
        for (int i = 0; i < 2; ++i)
            for (int j = 0; j < 2; ++j) phi.at(p)(i, j) = cxd(u(), u());
    const EndoField sym = self_adjoint_part(phi, h);
    CHECK(self_adjointness_defect(sym, h) < 1e-11);
    const EndoField sym2 = self_adjoint_part(sym, h);
    double diff = 0.0;
    for (int p = 0; p < sym.size(); ++p) diff = std::max(diff, (sym.at(p) - sym2.at(p)).norm());
    CHECK(diff < 1e-11);
}

TEST_CASE("metrics beyond the condition guard are rejected") {
    const Model m = small_model();
    MetricField n = to_normalized(fs_metric(m), m.basis);
    for (int p = 0; p < n.size(); ++p) n.at(p)(1, 1) = 1e-13;
    const MetricField h = from_normalized(n, m.basis);
    CHECK_THROWS_AS(validate_metric(h, m.basis), PositivityLossError);
}

TEST_CASE("shape mismatches are rejected") {
    const Model m = small_model();
    const MetricField h = fs_metric(m);
    EndoField phi = constant_endo(Mat::Zero(2, 2), m.grid.size() - 1);
    CHECK_THROWS_AS(endo_sup_norm(phi, h, m.basis), ShapeMismatchError);
}
