#pragma once

#include <cstdint>
#include <random>

namespace interweave {

// Splittable seeded stream. Children derived with split(k) are independent
// of the parent and of each other, so parallel tasks can each own one.
class Stream {
public:
    explicit Stream(std::uint64_t seed = 0);

    Stream split(std::uint64_t k) const;
    std::uint64_t key() const { return key_; }

    std::mt19937_64& engine() { return engine_; }

    double uniform();                       // [0, 1)
    double normal();                        // N(0, 1)
    double exponential(double rate);
    double gamma(double shape, double scale);
    double beta(double a, double b);
    // Logarithms of gamma and beta variates; stay finite for tiny shapes.
    double log_gamma_variate(double shape);
    double log_beta_variate(double a, double b);
    std::int64_t poisson(double mean);

private:
    std::uint64_t key_;
    std::mt19937_64 engine_;
    std::normal_distribution<double> normal_{0.0, 1.0};
};

std::uint64_t splitmix64(std::uint64_t x);

}  // namespace interweave
