#include "doctest.h"
#include "oracles.hpp"

#include <cmath>

#include "interweave/cutoff.hpp"
#include "interweave/errors.hpp"
#include "interweave/gauss.hpp"

using namespace interweave;
using Eigen::MatrixXd;
using Eigen::VectorXd;

namespace {

OUModel random_stable_model(Stream& rng, int d) {
    MatrixXd A(d, d), R(d, d);
    for (int i = 0; i < d; ++i)
        for (int j = 0; j < d; ++j) {
            A(i, j) = rng.normal();
            R(i, j) = rng.normal();
        }
    OUModel m;
    m.B = A * A.transpose() + MatrixXd::Identity(d, d) + 0.5 * (R - R.transpose());
    m.Gamma = R * R.transpose() + 0.1 * MatrixXd::Identity(d, d);
    return m;
}

}  // namespace

TEST_SUITE("gauss") {

TEST_CASE("Lyapunov solutions") {
    OUModel k = kinetic_example();
    MatrixXd G = gamma_infinity(k.B, k.Gamma);
    CHECK((G - MatrixXd(Eigen::Vector2d(0.5, 0.25).asDiagonal())).cwiseAbs().maxCoeff() < 1e-12);
    CHECK((gamma_infinity(MatrixXd::Identity(3, 3), MatrixXd::Identity(3, 3)) - 0.5 * MatrixXd::Identity(3, 3))
              .cwiseAbs()
              .maxCoeff() < 1e-14);
    CHECK(gamma_infinity(MatrixXd::Identity(2, 2), MatrixXd::Zero(2, 2)).cwiseAbs().maxCoeff() == 0.0);
    Stream rng(31);
    for (int d : {2, 3, 5}) {
        OUModel m = random_stable_model(rng, d);
        MatrixXd X = gamma_infinity(m.B, m.Gamma);
        CHECK((X - oracle::lyapunov(m.B, m.Gamma)).cwiseAbs().maxCoeff() < 1e-10);
        CHECK((m.B * X + X * m.B.transpose() - m.Gamma).cwiseAbs().maxCoeff() < 1e-10);
        CHECK((X - X.transpose()).cwiseAbs().maxCoeff() < 1e-12);
    }
}

TEST_CASE("OU kernels") {
    OUModel s = scalar_example(0.8);
    AffineGaussianKernel k0 = ou_kernel(s, 0.0);
    CHECK(k0.M(0, 0) == 1.0);
    CHECK(k0.Sigma(0, 0) == 0.0);
    for (double t : {0.1, 1.0, 4.0}) {
        AffineGaussianKernel k = ou_kernel(s, t);
        CHECK(k.M(0, 0) == doctest::Approx(std::exp(-0.8 * t)).epsilon(1e-13));
        CHECK(k.Sigma(0, 0) == doctest::Approx(1.6 * (1 - std::exp(-1.6 * t)) / 1.6).epsilon(1e-9));
    }
    OUModel kin = kinetic_example();
    CHECK((ou_kernel(kin, 60.0).Sigma - gamma_infinity(kin.B, kin.Gamma)).cwiseAbs().maxCoeff() < 1e-9);
    for (double t : {0.2, 1.5})
        CHECK((ou_kernel(kin, t).Sigma - gamma_t_closed_form(kin, t)).cwiseAbs().maxCoeff() < 1e-9);
}

TEST_CASE("composition") {
    OUModel kin = kinetic_example();
    AffineGaussianKernel k = ou_kernel(kin, 0.7);
    CHECK(kernel_distance(compose(k, AffineGaussianKernel::identity(2)), k) == 0.0);
    CHECK(kernel_distance(compose(ou_kernel(kin, 0.3), ou_kernel(kin, 0.9)), ou_kernel(kin, 1.2)) < 1e-9);
    const double t = std::log(2.0);
    OUModel unit = scalar_example(1.0);
    AffineGaussianKernel two = compose(ou_kernel(unit, t), ou_kernel(unit, t));
    CHECK(two.M(0, 0) == doctest::Approx(0.25));
    CHECK(two.Sigma(0, 0) == doctest::Approx(1 - 1.0 / 16));
    CHECK_THROWS_AS(compose(k, AffineGaussianKernel::identity(3)), DimensionError);
}

TEST_CASE("hypoellipticity") {
    OUModel kin = kinetic_example();
    CHECK(kin.Gamma.determinant() == 0.0);
    HypoellipticityReport r = check_hypoellipticity(kin);
    CHECK(r.ok);
    CHECK(r.kalman_rank == 2);
    OUModel degenerate;
    degenerate.B = MatrixXd::Identity(2, 2);
    degenerate.Gamma = MatrixXd(Eigen::Vector2d(1.0, 0.0).asDiagonal());
    CHECK_FALSE(check_hypoellipticity(degenerate).ok);
}

TEST_CASE("diagonal transfer setup") {
    DiagonalTransfer kin = diagonal_transfer_setup(kinetic_example().B, kinetic_example().Gamma);
    CHECK(kin.b(0) == doctest::Approx(1 - 1 / std::sqrt(2.0)).epsilon(1e-12));
    CHECK(kin.b(1) == doctest::Approx(1 + 1 / std::sqrt(2.0)).epsilon(1e-12));
    CHECK(kin.warmup == doctest::Approx(std::log(kin.kappa) / kin.b(0)));

    DiagonalTransfer one = diagonal_transfer_setup(MatrixXd::Constant(1, 1, 2.0), MatrixXd::Constant(1, 1, 3.0));
    CHECK(one.kappa == doctest::Approx(1.0));
    CHECK(one.warmup == doctest::Approx(0.0));
    CHECK(std::abs(one.lambda.M(0, 0)) == doctest::Approx(1.0));

    Eigen::Vector2d b(0.5, 2.0), alpha(1.0, 3.0);
    MatrixXd B = b.asDiagonal(), G = (alpha + 2 * b).asDiagonal();
    DiagonalTransfer diag = diagonal_transfer_setup(B, G);
    Eigen::Vector2d ginf = (alpha + 2 * b).cwiseQuotient(2 * b);
    double kappa = ginf.maxCoeff() / ginf.minCoeff();
    CHECK(diag.kappa == doctest::Approx(kappa).epsilon(1e-12));
    CHECK(diag.warmup == doctest::Approx(std::log(kappa) / 0.5).epsilon(1e-12));
}

TEST_CASE("intertwining and right factor for the kinetic example") {
    OUModel kin = kinetic_example();
    DiagonalTransfer d = diagonal_transfer_setup(kin.B, kin.Gamma);
    for (double t : {0.1, 1.0, 5.0})
        CHECK(kernel_distance(compose(ou_kernel(kin, t), d.lambda), compose(d.lambda, ou_kernel(d.diagonal, t))) < 1e-8);
    RightFactor rf = solve_right_factor(ou_kernel(kin, d.warmup), d.lambda);
    CHECK(rf.min_eigenvalue >= -1e-9);
    CHECK(kernel_distance(compose(d.lambda, rf.kernel), ou_kernel(kin, d.warmup)) < 1e-8);
    for (double t : {0.3, 2.0})
        CHECK(kernel_distance(compose(ou_kernel(d.diagonal, t), rf.kernel), compose(rf.kernel, ou_kernel(kin, t))) < 1e-8);
    // Far below the warm-up the factor stops being a Markov kernel.
    CHECK_THROWS_AS(solve_right_factor(ou_kernel(kin, 1e-3), d.lambda), InfeasibleError);
    double tmin = minimal_feasible_warmup(kin, d.lambda, d.warmup);
    CHECK(tmin > 0);
    CHECK(tmin <= d.warmup + 1e-9);
}

TEST_CASE("right factor sanity") {
    OUModel s = scalar_example(1.3);
    RightFactor id = solve_right_factor(ou_kernel(s, 0.8), AffineGaussianKernel::identity(1));
    CHECK(kernel_distance(id.kernel, ou_kernel(s, 0.8)) < 1e-12);
    RightFactor f = solve_right_factor(ou_kernel(s, 1.1), ou_kernel(s, 0.4));
    CHECK(kernel_distance(f.kernel, ou_kernel(s, 0.7)) < 1e-10);
}

TEST_CASE("variance decays at twice the smallest rate up to the condition number") {
    OUModel kin = kinetic_example();
    DiagonalTransfer d = diagonal_transfer_setup(kin.B, kin.Gamma);
    Stream rng(32);
    for (int trial = 0; trial < 30; ++trial) {
        MatrixXd A(2, 2);
        VectorXd a(2);
        for (int i = 0; i < 2; ++i) {
            a(i) = rng.normal();
            for (int j = 0; j < 2; ++j) A(i, j) = rng.normal();
        }
        CHECK(variance_ratio(kin, 0.0, A, a) == doctest::Approx(1.0).epsilon(1e-12));
        for (double t : {0.5, 1.0, 3.0, 8.0}) CHECK(variance_ratio(kin, t, A, a) <= d.kappa * std::exp(-2 * d.b(0) * t) * (1 + 1e-6));
    }
}

TEST_CASE("Gaussian total variation") {
    Stream rng(33);
    Gaussian p{VectorXd::Zero(1), MatrixXd::Identity(1, 1)};
    Estimate same = tv_gaussian_mc(p, p, 20000, rng);
    CHECK(same.value <= 3 * same.se + 1e-15);
    for (double m : {0.5, 1.0, 2.0}) {
        Gaussian q{VectorXd::Constant(1, m), MatrixXd::Identity(1, 1)};
        double exact = 0.5 * oracle::integrate([&](double x) { return std::abs(oracle::normal_pdf(x, 0) - oracle::normal_pdf(x, m)); },
                                               -12, 12 + m);
        Estimate e = tv_gaussian_mc(p, q, 200000, rng);
        CHECK(std::abs(e.value - exact) <= 3 * e.se);
        CHECK(exact == doctest::Approx(std::erf(m / (2 * std::sqrt(2.0)))).epsilon(1e-8));
    }
    Gaussian q{VectorXd::Constant(1, 1.0), MatrixXd::Identity(1, 1)};
    // Product of two copies against a 2-d quadrature.
    double exact2 = 0.5 * oracle::integrate(
                              [&](double x) {
                                  return oracle::integrate(
                                      [&](double y) {
                                          return std::abs(oracle::normal_pdf(x, 0) * oracle::normal_pdf(y, 0) -
                                                          oracle::normal_pdf(x, 1) * oracle::normal_pdf(y, 1));
                                      },
                                      -10, 11, 1500);
                              },
                              -10, 11, 1500);
    Estimate e2 = tv_product_gaussian_mc(p, q, 2, 200000, rng);
    CHECK(std::abs(e2.value - exact2) <= 3 * e2.se);
}

}
