#pragma once

#include <vector>

namespace interweave {

struct Estimate {
    double value = 0;
    double se = 0;
};

Estimate mean_se(const std::vector<double>& xs);

struct KSResult {
    double statistic = 0;
    double p_value = 1;
};

// Two-sample Kolmogorov-Smirnov test with the asymptotic Kolmogorov law.
KSResult ks_two_sample(std::vector<double> a, std::vector<double> b);

}  // namespace interweave
