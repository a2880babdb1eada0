#include "balmet/grid.hpp"

#include <cmath>
#include <stdexcept>

namespace balmet {

// Newton iteration on P_n with the Chebyshev-like initial guess; nodes are
// computed on [-1,1] and mapped to [0,1].
void gauss_legendre_01(int n, std::vector<double>& nodes, std::vector<double>& weights) {
    if (n < 1) throw std::invalid_argument("gauss_legendre_01: n must be positive");
    nodes.assign(static_cast<std::size_t>(n), 0.0);
    weights.assign(static_cast<std::size_t>(n), 0.0);

    const int half = (n + 1) / 2;
    for (int i = 0; i < half; ++i) {
        double x = std::cos(kPi * (i + 0.75) / (n + 0.5));
        double dp = 0.0;
        for (int it = 0; it < 100; ++it) {
            // Evaluate P_n(x) and P_n'(x) by the three-term recurrence.
            double p0 = 1.0, p1 = x;
            for (int j = 2; j <= n; ++j) {
                const double p2 = ((2.0 * j - 1.0) * x * p1 - (j - 1.0) * p0) / j;
                p0 = p1;
                p1 = p2;
            }
            dp = n * (x * p1 - p0) / (x * x - 1.0);
            const double dx = p1 / dp;
            x -= dx;
            if (std::abs(dx) < 1e-15) break;
        }
        const double w = 2.0 / ((1.0 - x * x) * dp * dp);
        // Map [-1,1] -> [0,1]; node i counts from the right end.
        nodes[static_cast<std::size_t>(n - 1 - i)] = 0.5 * (1.0 + x);
        nodes[static_cast<std::size_t>(i)] = 0.5 * (1.0 - x);
        weights[static_cast<std::size_t>(n - 1 - i)] = 0.5 * w;
        weights[static_cast<std::size_t>(i)] = 0.5 * w;
    }
}

}  // namespace balmet
