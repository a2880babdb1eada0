// slope.hpp - least-squares slope fit on log-log data
#pragma once

#include <vector>

namespace balmet {

struct SlopeFit {
    double slope = 0.0;
    double intercept = 0.0;
};

// Fits log(err) = slope * log(k) + intercept; requires >= 3 points and
// positive errors (zeros are clamped to 1e-300).
SlopeFit fit_loglog(const std::vector<double>& k, const std::vector<double>& err);

}  // namespace balmet
