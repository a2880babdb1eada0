#include "balmet/slope.hpp"

#include <cmath>

#include "balmet/errors.hpp"

namespace balmet {

SlopeFit fit_loglog(const std::vector<double>& k, const std::vector<double>& err) {
    if (k.size() != err.size())
        throw ShapeMismatchError("fit_loglog: size mismatch");
    if (k.size() < 3)
        throw ConfigError("fit_loglog: need at least 3 points to fit a rate");
    const int n = static_cast<int>(k.size());
    double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
    for (int i = 0; i < n; ++i) {
        const double x = std::log(k[static_cast<std::size_t>(i)]);
        const double y = std::log(std::max(err[static_cast<std::size_t>(i)], 1e-300));
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
    }
    SlopeFit f;
    f.slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
    f.intercept = (sy - f.slope * sx) / n;
    return f;
}

}  // namespace balmet
