#include "interweave/rng.hpp"

#include "interweave/errors.hpp"

#include <algorithm>
#include <cmath>

namespace interweave {

std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9E3779B97F4A7C15ULL;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
    return x ^ (x >> 31);
}

namespace {

std::mt19937_64 seeded_engine(std::uint64_t key) {
    std::seed_seq seq{static_cast<std::uint32_t>(key), static_cast<std::uint32_t>(key >> 32),
                      static_cast<std::uint32_t>(splitmix64(key)),
                      static_cast<std::uint32_t>(splitmix64(key) >> 32)};
    return std::mt19937_64(seq);
}

}  // namespace

Stream::Stream(std::uint64_t seed) : key_(splitmix64(seed)), engine_(seeded_engine(key_)) {}

Stream Stream::split(std::uint64_t k) const {
    Stream child(0);
    child.key_ = splitmix64(key_ ^ splitmix64(k + 0x632BE59BD9B4E019ULL));
    child.engine_ = seeded_engine(child.key_);
    return child;
}

double Stream::uniform() {
    return std::uniform_real_distribution<double>(0.0, 1.0)(engine_);
}

double Stream::normal() { return normal_(engine_); }

double Stream::exponential(double rate) {
    require(rate > 0, "exponential: rate must be positive");
    return std::exponential_distribution<double>(rate)(engine_);
}

double Stream::gamma(double shape, double scale) {
    require(shape > 0 && scale > 0, "gamma: shape and scale must be positive");
    return std::gamma_distribution<double>(shape, scale)(engine_);
}

double Stream::beta(double a, double b) {
    require(a > 0 && b > 0, "beta: parameters must be positive");
    double x = gamma(a, 1.0);
    double y = gamma(b, 1.0);
    return x / (x + y);
}

double Stream::log_gamma_variate(double shape) {
    require(shape > 0, "gamma: shape must be positive");
    if (shape >= 1) return std::log(gamma(shape, 1.0));
    double u = 1.0 - uniform();
    return std::log(gamma(shape + 1.0, 1.0)) + std::log(u) / shape;
}

double Stream::log_beta_variate(double a, double b) {
    double lx = log_gamma_variate(a);
    double ly = log_gamma_variate(b);
    double hi = std::max(lx, ly);
    return lx - (hi + std::log(std::exp(lx - hi) + std::exp(ly - hi)));
}

std::int64_t Stream::poisson(double mean) {
    require(mean >= 0, "poisson: mean must be nonnegative");
    if (mean == 0) return 0;
    return std::poisson_distribution<std::int64_t>(mean)(engine_);
}

}  // namespace interweave
