#include "interweave/stats.hpp"

#include <algorithm>
#include <cmath>

#include "interweave/errors.hpp"

namespace interweave {

Estimate mean_se(const std::vector<double>& xs) {
    require(!xs.empty(), "mean_se: empty sample");
    double n = static_cast<double>(xs.size());
    double m = 0;
    for (double x : xs) m += x;
    m /= n;
    double ss = 0;
    for (double x : xs) ss += (x - m) * (x - m);
    double var = xs.size() > 1 ? ss / (n - 1) : 0.0;
    return {m, std::sqrt(var / n)};
}

namespace {

double kolmogorov_tail(double lambda) {
    if (lambda < 0.2) return 1.0;
    double sum = 0;
    double sign = 1;
    for (int k = 1; k <= 200; ++k) {
        double term = sign * std::exp(-2.0 * k * k * lambda * lambda);
        sum += term;
        if (std::abs(term) < 1e-16) break;
        sign = -sign;
    }
    return std::clamp(2.0 * sum, 0.0, 1.0);
}

}  // namespace

KSResult ks_two_sample(std::vector<double> a, std::vector<double> b) {
    require(!a.empty() && !b.empty(), "ks_two_sample: empty sample");
    std::sort(a.begin(), a.end());
    std::sort(b.begin(), b.end());
    const double na = static_cast<double>(a.size()), nb = static_cast<double>(b.size());
    std::size_t i = 0, j = 0;
    double d = 0;
    while (i < a.size() && j < b.size()) {
        double x = std::min(a[i], b[j]);
        while (i < a.size() && a[i] <= x) ++i;
        while (j < b.size() && b[j] <= x) ++j;
        d = std::max(d, std::abs(i / na - j / nb));
    }
    double ne = std::sqrt(na * nb / (na + nb));
    return {d, kolmogorov_tail((ne + 0.12 + 0.11 / ne) * d)};
}

}  // namespace interweave
