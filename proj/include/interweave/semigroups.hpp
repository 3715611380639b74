#pragma once

#include <cstdint>
#include <iosfwd>
#include <vector>

#include <Eigen/Dense>

#include "interweave/kernels.hpp"
#include "interweave/rng.hpp"
#include "interweave/warmup.hpp"

namespace interweave {

struct DiscreteMeasure {
    std::vector<double> weights;
    std::vector<long> labels;  // state labels, 0..size-1 unless set

    static DiscreteMeasure from_weights(std::vector<double> w);
    static DiscreteMeasure dirac(std::size_t size, std::size_t at);
    static DiscreteMeasure uniform(std::size_t size);

    std::size_t size() const { return weights.size(); }
    void validate() const;
};

// Generator Q with rows summing to zero and its invariant law.
struct FiniteSemigroup {
    Eigen::MatrixXd Q;
    DiscreteMeasure invariant;
    double mass_defect = 0;  // invariant mass lost to truncation

    std::size_t size() const { return static_cast<std::size_t>(Q.rows()); }
    void validate() const;
};

// Invariant law computed from the null space of Q^T.
FiniteSemigroup from_generator(const Eigen::MatrixXd& Q);

// Birth rates sigma (n + beta), death rates (sigma + 1) n on {0..N}, with the
// birth rate at N set to zero. Invariant law is the negative binomial with
// parameters beta and sigma / (1 + sigma) restricted to {0..N}.
FiniteSemigroup truncate_birth_death(double beta, double sigma, int N);

// Log of the untruncated negative binomial mass at n.
double log_negative_binomial_mass(double beta, double sigma, long n);

FiniteSemigroup two_point_semigroup(const TwoPointModel& model);

// m0 exp(t Q) by uniformization, renormalized.
DiscreteMeasure evolve(const FiniteSemigroup& sg, const DiscreteMeasure& m0, double t);

// exp(t Q) by uniformization.
Eigen::MatrixXd transition_matrix(const FiniteSemigroup& sg, double t);

// Exact draw of X_t from X_0 = x for the diffusion with generator
// scale x f'' + (scale beta - x) f': Poisson mixture of gammas.
double exact_laguerre_transition(double beta, double scale, double t, double x, Stream& rng);

// E[X_t^k | X_0 = x] for k = 0..kmax, from the Poisson-gamma representation.
std::vector<double> laguerre_transition_moments(double beta, double scale, double t, double x, int kmax);

// State at time t of the untruncated birth-death chain of truncate_birth_death,
// simulated event by event. events receives the number of jumps when non-null.
std::int64_t gillespie_birth_death(double beta, double sigma, double t, std::int64_t n0, Stream& rng,
                                   std::int64_t* events = nullptr);

// Draw of the diffusion at time ln(1 + 1/(scale sigma)) + t from x, through the
// lattice chain: Poisson(sigma x), birth-death for time t, then a gamma draw.
double intertwined_laguerre_sampler(double beta, double scale, double sigma, double t, double x, Stream& rng);

// exp(-t phi(lambda_n)) with exp(-phi) the Laplace transform of law.
std::vector<double> subordinate_multipliers(const std::vector<double>& eigenvalues, const WarmupLaw& law,
                                            double t);

// Columns: state, weight.
void write_csv(std::ostream& os, const DiscreteMeasure& m);

}  // namespace interweave
