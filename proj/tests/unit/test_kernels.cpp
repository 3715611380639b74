#include "doctest.h"
#include "oracles.hpp"

#include <cmath>

#include "interweave/errors.hpp"
#include "interweave/kernels.hpp"
#include "interweave/stats.hpp"

using namespace interweave;

namespace {

double sample_mean_gap(const KernelSpec& k, double x, double expected, std::size_t n, Stream& rng) {
    std::vector<double> xs(n);
    for (auto& v : xs) v = sample_kernel(k, x, rng);
    Estimate e = mean_se(xs);
    return std::abs(e.value - expected) / e.se;
}

}  // namespace

TEST_SUITE("kernels") {

TEST_CASE("kernel samplers reproduce first moments") {
    Stream rng(21);
    CHECK(sample_mean_gap(kern::Poisson{1.5}, 2.0, 3.0, 100000, rng) <= 4);
    CHECK(sample_mean_gap(kern::BetaMult{2.0, 0.5}, 1.0, 0.5 / 2.5, 100000, rng) <= 4);
    CHECK(sample_mean_gap(kern::BStar{1.3}, 0.7, 2.0, 100000, rng) <= 4);
    CHECK(sample_mean_gap(kern::GammaMix{0.8, 2.0}, 3.0, 3.8 / 2.0, 100000, rng) <= 4);
}

TEST_CASE("apply_kernel_mc") {
    Stream rng(22);
    Estimate one = apply_kernel_mc(kern::Poisson{2.0}, [](double) { return 1.0; }, 1.5, 1000, rng);
    CHECK(one.value == 1.0);
    CHECK(one.se == 0.0);
    Estimate ff = apply_kernel_mc(kern::Poisson{2.0}, [](double n) { return n * (n - 1); }, 1.5, 200000, rng);
    CHECK(std::abs(ff.value - 9.0) <= 4 * ff.se);
    const double beta = 1.5, eps = 0.7;
    Estimate sq = apply_kernel_mc(kern::BetaMult{beta, eps}, [](double y) { return y * y; }, 1.0, 200000, rng);
    CHECK(std::abs(sq.value - oracle::beta_multiplier(beta, eps, 2)) <= 4 * sq.se);
}

TEST_CASE("two-point model basics") {
    TwoPointModel m{2.0, {0.3, 0.7}};
    Eigen::Vector2d phi = m.phi();
    CHECK(m.mu.dot(phi) == doctest::Approx(0.0).epsilon(1e-12));
    CHECK(m.mu.dot(phi.cwiseProduct(phi)) == doctest::Approx(1.0).epsilon(1e-12));
    for (double t : {0.0, 0.3, 2.0})
        CHECK((m.semigroup(t) - oracle::two_point_semigroup(2.0, m.mu, t)).cwiseAbs().maxCoeff() < 1e-14);
    CHECK_THROWS_AS((TwoPointModel{1.0, {0.0, 1.0}}.validate()), DomainError);
    CHECK_THROWS_AS((TwoPointModel{-1.0, {0.5, 0.5}}.validate()), DomainError);
}

TEST_CASE("two_point_lambda") {
    Eigen::Vector2d mu(0.3, 0.7);
    TwoPointLambda same = two_point_lambda(mu, mu, 1.0);
    CHECK(same.feasible);
    CHECK((same.matrix - Eigen::Matrix2d::Identity()).cwiseAbs().maxCoeff() < 1e-14);

    Eigen::Vector2d a(0.75, 0.25), u(0.5, 0.5);
    TwoPointOptimal opt = two_point_optimal(a, u);
    TwoPointLambda edge = two_point_lambda(a, u, opt.eps0);
    CHECK(edge.feasible);
    CHECK(std::abs(edge.margin) < 1e-14);
    CHECK((edge.matrix.rowwise().sum() - Eigen::Vector2d::Ones()).cwiseAbs().maxCoeff() < 1e-14);
    CHECK_FALSE(two_point_lambda(a, u, opt.eps0 * 1.01).feasible);
    CHECK(two_point_lambda(a, u, opt.eps0 * 1.01).margin < 0);
}

TEST_CASE("two_point_optimal") {
    Eigen::Vector2d mu(0.3, 0.7);
    TwoPointOptimal same = two_point_optimal(mu, mu);
    CHECK(same.eps0 == doctest::Approx(1.0));
    CHECK(std::abs(same.t0) < 1e-15);
    CHECK(two_point_optimal({0.75, 0.25}, {0.5, 0.5}).t0 == doctest::Approx(std::log(3.0)).epsilon(1e-14));
    CHECK(two_point_optimal({0.9, 0.1}, {0.5, 0.5}).t0 == doctest::Approx(std::log(9.0)).epsilon(1e-14));
    CHECK(two_point_optimal({0.25, 0.75}, {0.5, 0.5}).eps0 == doctest::Approx(1 / std::sqrt(3.0)).epsilon(1e-14));
}

TEST_CASE("two-point interweaving on random instances") {
    Stream rng(23);
    for (int i = 0; i < 200; ++i) {
        double a = 0.01 + 0.98 * rng.uniform(), b = 0.01 + 0.98 * rng.uniform(), lambda = 0.1 + 5 * rng.uniform();
        Eigen::Vector2d mu(a, 1 - a), mt(b, 1 - b);
        TwoPointOptimal o = two_point_optimal(mu, mt);
        CHECK((o.lambda * o.lambda_tilde - oracle::two_point_semigroup(lambda, mu, o.t0 / lambda)).cwiseAbs().maxCoeff() <
              1e-12);
        CHECK((o.lambda_tilde * o.lambda - oracle::two_point_semigroup(lambda, mt, o.t0 / lambda)).cwiseAbs().maxCoeff() <
              1e-12);
        CHECK(o.lambda.minCoeff() >= -1e-15);
        CHECK(o.lambda_tilde.minCoeff() >= -1e-15);
        // Intertwining with the generators at equal rate.
        TwoPointModel L{lambda, mu}, Lt{lambda, mt};
        CHECK((L.semigroup(0.4) * o.lambda - o.lambda * Lt.semigroup(0.4)).cwiseAbs().maxCoeff() < 1e-12);
    }
}

}
