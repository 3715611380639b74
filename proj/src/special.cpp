#include "interweave/special.hpp"

#include <cmath>
#include <string>

#include <boost/math/special_functions/digamma.hpp>

#include "interweave/errors.hpp"

namespace interweave {

double log_gamma(double x) {
    if (!(x > 0) || !std::isfinite(x))
        throw DomainError("log_gamma: argument must be positive and finite, got " + std::to_string(x));
#if defined(__GLIBC__)
    int sign = 0;
    return ::lgamma_r(x, &sign);
#else
    return std::lgamma(x);
#endif
}

double log_rising(double a, int k) {
    require(k >= 0, "log_rising: k must be nonnegative");
    require(a > 0, "log_rising: a must be positive");
    if (k == 0) return 0.0;
    return log_gamma(a + k) - log_gamma(a);
}

double digamma(double x) {
    require(x > 0 && std::isfinite(x), "digamma: argument must be positive");
    return boost::math::digamma(x);
}

double laguerre_polynomial(int n, double beta, double x) {
    require(n >= 0, "laguerre_polynomial: n must be nonnegative");
    require(beta > -1, "laguerre_polynomial: beta must exceed -1");
    if (n == 0) return 1.0;
    double prev = 1.0;
    double cur = 1.0 + beta - x;
    for (int k = 1; k < n; ++k) {
        double next = ((2.0 * k + 1.0 + beta - x) * cur - (k + beta) * prev) / (k + 1.0);
        prev = cur;
        cur = next;
    }
    return cur;
}

void validate(const StandardLaw& l) {
    std::visit(
        [](const auto& v) {
            using T = std::decay_t<decltype(v)>;
            if constexpr (std::is_same_v<T, law::Gamma>)
                require(v.shape > 0 && v.scale > 0, "Gamma: shape and scale must be positive");
            else if constexpr (std::is_same_v<T, law::Beta>)
                require(v.a > 0 && v.b > 0, "Beta: parameters must be positive");
            else if constexpr (std::is_same_v<T, law::Poisson>)
                require(v.mean >= 0 && std::isfinite(v.mean), "Poisson: mean must be nonnegative");
            else if constexpr (std::is_same_v<T, law::NegativeBinomial>)
                require(v.beta > 0 && v.p > 0 && v.p < 1, "NegativeBinomial: need beta > 0, p in (0,1)");
            else if constexpr (std::is_same_v<T, law::Normal>)
                require(v.variance > 0 && std::isfinite(v.mean), "Normal: variance must be positive");
            else
                require(v.rate > 0, "Exponential: rate must be positive");
        },
        l);
}

double sample(const StandardLaw& l, Stream& rng) {
    validate(l);
    return std::visit(
        [&rng](const auto& v) -> double {
            using T = std::decay_t<decltype(v)>;
            if constexpr (std::is_same_v<T, law::Gamma>)
                return rng.gamma(v.shape, v.scale);
            else if constexpr (std::is_same_v<T, law::Beta>)
                return std::exp(rng.log_beta_variate(v.a, v.b));
            else if constexpr (std::is_same_v<T, law::Poisson>)
                return static_cast<double>(rng.poisson(v.mean));
            else if constexpr (std::is_same_v<T, law::NegativeBinomial>)
                return static_cast<double>(rng.poisson(rng.gamma(v.beta, v.p / (1 - v.p))));
            else if constexpr (std::is_same_v<T, law::Normal>)
                return v.mean + std::sqrt(v.variance) * rng.normal();
            else
                return rng.exponential(v.rate);
        },
        l);
}

double mean(const StandardLaw& l) {
    validate(l);
    return std::visit(
        [](const auto& v) -> double {
            using T = std::decay_t<decltype(v)>;
            if constexpr (std::is_same_v<T, law::Gamma>) return v.shape * v.scale;
            else if constexpr (std::is_same_v<T, law::Beta>) return v.a / (v.a + v.b);
            else if constexpr (std::is_same_v<T, law::Poisson>) return v.mean;
            else if constexpr (std::is_same_v<T, law::NegativeBinomial>) return v.beta * v.p / (1 - v.p);
            else if constexpr (std::is_same_v<T, law::Normal>) return v.mean;
            else return 1.0 / v.rate;
        },
        l);
}

double variance(const StandardLaw& l) {
    validate(l);
    return std::visit(
        [](const auto& v) -> double {
            using T = std::decay_t<decltype(v)>;
            if constexpr (std::is_same_v<T, law::Gamma>) return v.shape * v.scale * v.scale;
            else if constexpr (std::is_same_v<T, law::Beta>) {
                double s = v.a + v.b;
                return v.a * v.b / (s * s * (s + 1));
            } else if constexpr (std::is_same_v<T, law::Poisson>) return v.mean;
            else if constexpr (std::is_same_v<T, law::NegativeBinomial>)
                return v.beta * v.p / ((1 - v.p) * (1 - v.p));
            else if constexpr (std::is_same_v<T, law::Normal>) return v.variance;
            else return 1.0 / (v.rate * v.rate);
        },
        l);
}

}  // namespace interweave
