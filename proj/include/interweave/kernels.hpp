#pragma once

#include <cstddef>
#include <functional>

#include <Eigen/Dense>

#include "interweave/polyop.hpp"
#include "interweave/rng.hpp"
#include "interweave/stats.hpp"

namespace interweave {

// One draw from the kernel row at x. Lattice points are passed as doubles.
double sample_kernel(const KernelSpec& spec, double x, Stream& rng);

Estimate apply_kernel_mc(const KernelSpec& spec, const std::function<double(double)>& f, double x,
                         std::size_t nsamples, Stream& rng);

// Two-point space {0, 1} with generator lambda (mu - Id).
struct TwoPointModel {
    double lambda = 1;
    Eigen::Vector2d mu{0.5, 0.5};

    void validate() const;
    double l() const;                  // sqrt(mu(1) / mu(0))
    Eigen::Vector2d phi() const;       // (l, -1/l), centred and unit in L2(mu)
    double mu_min() const;
    Eigen::Matrix2d generator() const;
    Eigen::Matrix2d semigroup(double t) const;
};

struct TwoPointLambda {
    Eigen::Matrix2d matrix;
    bool feasible = false;
    double margin = 0;  // smallest distance of an entry to the boundary of [0, 1]; negative if infeasible
};

// Linear map fixing 1 and sending phi(mu_tilde) to eps * phi(mu).
TwoPointLambda two_point_lambda(const Eigen::Vector2d& mu, const Eigen::Vector2d& mu_tilde, double eps);

struct TwoPointOptimal {
    double eps0 = 1;
    double t0 = 0;                  // warm-up for unit rate; divide by lambda otherwise
    Eigen::Matrix2d lambda;         // sends phi(mu_tilde) to eps0 phi(mu)
    Eigen::Matrix2d lambda_tilde;   // sends phi(mu) to eps0 phi(mu_tilde)
};

// lambda * lambda_tilde = exp(t0 L) and lambda_tilde * lambda = exp(t0 L~) at unit rate.
TwoPointOptimal two_point_optimal(const Eigen::Vector2d& mu, const Eigen::Vector2d& mu_tilde);

}  // namespace interweave
