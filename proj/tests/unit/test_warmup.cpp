#include "doctest.h"
#include "oracles.hpp"

#include <cmath>
#include <memory>

#include <boost/math/quadrature/tanh_sinh.hpp>

#include "interweave/errors.hpp"
#include "interweave/stats.hpp"
#include "interweave/warmup.hpp"

using namespace interweave;

TEST_SUITE("warmup") {

TEST_CASE("Laplace transforms are probability transforms") {
    std::vector<WarmupLaw> laws = {wl::Dirac{0.7}, wl::NegLogBeta{0.3, 0.5}, wl::Jacobi{4.0, 1.5},
                                   WarmupLaw(wl::Sum{{wl::Dirac{0.2}, wl::NegLogBeta{1.0, 2.0}}})};
    for (const auto& l : laws) {
        CHECK(laplace(l, 0.0) == doctest::Approx(1.0).epsilon(1e-10));
        CHECK(laplace(l, 3.0) < 1.0);
    }
}

TEST_CASE("closed forms") {
    for (double u : {0.0, 0.5, 2.0, 7.0}) {
        CHECK(laplace(wl::NegLogBeta{0.4, 1.0}, u) == doctest::Approx(0.4 / (u + 0.4)).epsilon(1e-13));
        CHECK(laplace(wl::Dirac{1.5}, u) == doctest::Approx(std::exp(-1.5 * u)));
    }
    const double l1 = 4.0, beta = 1.5;
    for (int n = 0; n <= 6; ++n) {
        double u = n * (n - 1.0) + l1 * n;
        double expected = oracle::gamma_ratio(l1 - beta, n + l1 / 2, n + l1 - beta, l1 / 2);
        CHECK(laplace(wl::Jacobi{l1, beta}, u) == doctest::Approx(expected).epsilon(1e-12));
    }
    for (int n = 0; n <= 10; ++n)
        CHECK(laplace(wl::NegLogBeta{0.3, 0.5}, n) == doctest::Approx(oracle::beta_multiplier(0.5, 0.3, n)).epsilon(1e-12));
}

TEST_CASE("NegLogBeta density") {
    CHECK(has_density(wl::NegLogBeta{0.5, 1.0}));
    CHECK_FALSE(has_density(wl::Dirac{1.0}));
    for (double s : {0.1, 1.0, 4.0}) CHECK(density(wl::NegLogBeta{0.5, 1.0}, s) == doctest::Approx(0.5 * std::exp(-0.5 * s)));
    WarmupLaw l = wl::NegLogBeta{0.3, 0.5};
    // Substitute s = -ln y to integrate over (0, 1).
    boost::math::quadrature::tanh_sinh<double> q;
    double mass = q.integrate([&](double y) { return density(l, -std::log(y)) / y; }, 0.0, 1.0);
    CHECK(mass == doctest::Approx(1.0).epsilon(1e-8));
    double lap = q.integrate([&](double y) { return density(l, -std::log(y)); }, 0.0, 1.0);
    CHECK(lap == doctest::Approx(laplace(l, 1.0)).epsilon(1e-8));
    CHECK_THROWS_AS(density(wl::Jacobi{4.0, 1.5}, 1.0), UnsupportedError);
}

TEST_CASE("sampling matches the transform") {
    WarmupLaw l = wl::NegLogBeta{0.3, 0.5};
    Stream rng(41);
    std::vector<double> draws(1000000);
    for (auto& d : draws) d = sample(l, rng);
    for (double u : {0.5, 1.0, 2.0}) {
        std::vector<double> v(draws.size());
        for (std::size_t i = 0; i < v.size(); ++i) v[i] = std::exp(-u * draws[i]);
        Estimate e = mean_se(v);
        CHECK(std::abs(e.value - laplace(l, u)) <= 4 * e.se);
    }
    CHECK_FALSE(has_sampler(wl::Jacobi{4.0, 1.5}));
    CHECK_THROWS_AS(sample(wl::Jacobi{4.0, 1.5}, rng), UnsupportedError);
}

TEST_CASE("mean of the log-beta law for small shape") {
    const double eps = 0.01;
    auto m = mean(wl::NegLogBeta{eps, 0.5 - eps});
    REQUIRE(m.has_value());
    CHECK(*m * eps == doctest::Approx(1.0).epsilon(0.1));
    CHECK(mean(wl::NegLogBeta{0.4, 1.0}).value() == doctest::Approx(2.5));
}

TEST_CASE("convolution and shift") {
    WarmupLaw dd = convolve(wl::Dirac{0.5}, wl::Dirac{1.25});
    REQUIRE(std::holds_alternative<wl::Dirac>(dd.v));
    CHECK(std::get<wl::Dirac>(dd.v).t0 == doctest::Approx(1.75));
    WarmupLaw s = shift(wl::Dirac{0.0}, 2.0);
    REQUIRE(std::holds_alternative<wl::Dirac>(s.v));
    CHECK(std::get<wl::Dirac>(s.v).t0 == doctest::Approx(2.0));
    // Transitivity of the beta kernels: the two-step law composes multiplicatively.
    const double eps = 0.4, b1 = 0.7, b2 = 1.3;
    WarmupLaw c = convolve(wl::NegLogBeta{eps, b1}, wl::NegLogBeta{b1 + eps, b2});
    for (int n = 0; n <= 8; ++n) {
        double prod = oracle::beta_multiplier(b1, eps, n) * oracle::beta_multiplier(b2, b1 + eps, n);
        CHECK(laplace(c, n) == doctest::Approx(prod).epsilon(1e-12));
        CHECK(laplace(c, n) == doctest::Approx(oracle::beta_multiplier(b1 + b2, eps, n)).epsilon(1e-12));
    }
}

TEST_CASE("subordinated laws") {
    WarmupLaw tau = wl::NegLogBeta{1.0, 2.0};
    CHECK(is_infinitely_divisible(tau));
    CHECK_FALSE(is_infinitely_divisible(wl::Jacobi{4.0, 1.5}));
    WarmupLaw half = subordinated(tau, 0.5);
    for (double u : {0.5, 2.0, 5.0}) {
        CHECK(laplace(half, u) == doctest::Approx(std::sqrt(laplace(tau, u))).epsilon(1e-12));
        CHECK(bernstein_exponent(tau, u) == doctest::Approx(-std::log(laplace(tau, u))).epsilon(1e-12));
    }
}

TEST_CASE("complete monotonicity checks") {
    auto grid = linear_grid(0.0, 10.0, 41);
    CHECK(check_complete_monotonicity([](double x) { return std::exp(-x); }, grid, 8).pass);
    WarmupLaw j = wl::Jacobi{4.0, 1.5};
    CHECK(check_complete_monotonicity([&](double u) { return laplace(j, u); }, grid, 6).pass);
    MonotonicityReport bad = check_complete_monotonicity([](double x) { return 1 / (1 + x * x); }, grid, 6);
    CHECK_FALSE(bad.pass);
    CHECK(bad.failing_order <= 2);
}

TEST_CASE("Bernstein checks") {
    auto grid = linear_grid(0.0, 10.0, 101);
    const double beta = 1.0;
    auto phi_beta = [&](double u) {
        return -(std::lgamma(1 + beta) + std::lgamma(u + 1) - std::lgamma(u + beta + 1));
    };
    CHECK(bernstein_check(phi_beta, grid, 6).pass);
    CHECK(bernstein_check([](double u) { return u; }, grid, 6).pass);
    CHECK_FALSE(bernstein_check([](double u) { return u * u; }, grid, 6).pass);
}

TEST_CASE("law validation") {
    CHECK_THROWS_AS(validate(wl::NegLogBeta{0.0, 1.0}), DomainError);
    CHECK_THROWS_AS(validate(wl::Dirac{-1.0}), DomainError);
    CHECK_THROWS_AS(validate(wl::Jacobi{2.0, 1.5}), DomainError);
    CHECK_THROWS_AS(laplace(wl::Dirac{1.0}, -1.0), DomainError);
}

}
