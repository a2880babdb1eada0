#include <doctest.h>

#include <cmath>
#include <random>

#include "balmet/errors.hpp"
#include "balmet/grid.hpp"

using namespace balmet;

namespace {

// Independent Beta-integral oracle:
//   int_0^inf r^{2j} (1+r^2)^{-m-2} 2r dr = j!(m-j)!/(m+1)!
double beta_oracle(int j, int m) {
    double num = 1.0, den = 1.0;
    for (int i = 2; i <= j; ++i) num *= i;
    for (int i = 2; i <= m - j; ++i) num *= i;
    for (int i = 2; i <= m + 1; ++i) den *= i;
    return num / den;
}

double quad_monomial(const QuadratureGrid& g, int j, int m) {
    double s = 0.0;
    for (int p = 0; p < g.size(); ++p) {
        const double r2 = std::norm(g.points[static_cast<std::size_t>(p)]);
        s += g.weights[static_cast<std::size_t>(p)] * std::pow(r2, j) /
             std::pow(1.0 + r2, m);
    }
    return s;
}

}  // namespace

TEST_CASE("grid weights sum to the volume") {
    const QuadratureGrid g = build_grid(64, 64);
    double s = 0.0;
    for (double w : g.weights) s += w;
    CHECK(std::abs(s - 1.0) < 1e-12);
}

TEST_CASE("constant integrand integrates to 1") {
    const QuadratureGrid g = build_grid(16, 16);
    CHECK(quad_monomial(g, 0, 0) == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("fs-weighted monomial matches the Beta value") {
    const QuadratureGrid g = build_grid(32, 32);
    // j=1, m=2: 1! 1! / 3! = 1/6
    CHECK(std::abs(quad_monomial(g, 1, 2) - 1.0 / 6.0) < 1e-10);
    CHECK(std::abs(beta_oracle(1, 2) - 1.0 / 6.0) < 1e-16);
}

TEST_CASE("quadrature exactness across random monomials up to the bound") {
    const QuadratureGrid g = build_grid(24, 24);
    std::mt19937 rng(42);
    for (int trial = 0; trial < 50; ++trial) {
        const int m = static_cast<int>(rng() % static_cast<unsigned>(g.max_exact_degree + 1));
        const int j = m == 0 ? 0 : static_cast<int>(rng() % static_cast<unsigned>(m + 1));
        const double exact = beta_oracle(j, m);
        CHECK(std::abs(quad_monomial(g, j, m) - exact) < 1e-10 * std::abs(exact));
    }
}

TEST_CASE("closed-form helper agrees with the factorial oracle") {
    for (int m = 0; m <= 12; ++m)
        for (int j = 0; j <= m; ++j)
            CHECK(fs_monomial_integral(j, m) == doctest::Approx(beta_oracle(j, m)).epsilon(1e-13));
}

TEST_CASE("resolution preconditions are enforced") {
    CHECK_THROWS_AS(build_grid(4, 64), ConfigError);
    CHECK_THROWS_AS(build_grid(64, 4), ConfigError);
}

TEST_CASE("grid layout is angle-major with half-step offset") {
    const QuadratureGrid g = build_grid(8, 8);
    CHECK(g.index(0, 3) == 3);
    CHECK(g.index(1, 0) == 8);
    CHECK(g.theta[0] == doctest::Approx(2.0 * kPi * 0.5 / 8).epsilon(1e-15));
    for (int p = 0; p < g.size(); ++p) CHECK(std::abs(g.points[static_cast<std::size_t>(p)]) > 0.0);
}
