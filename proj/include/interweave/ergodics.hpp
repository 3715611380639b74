#pragma once

#include <iosfwd>
#include <optional>
#include <vector>

#include <Eigen/Dense>

#include "interweave/rng.hpp"
#include "interweave/semigroups.hpp"

namespace interweave {

struct PhiKind {
    enum class Tag { KLDiv, PowerP, AbsDev };
    Tag tag = Tag::KLDiv;
    double p = 1;

    static PhiKind kl() { return {Tag::KLDiv, 1}; }
    static PhiKind power(double p);
    static PhiKind absdev() { return {Tag::AbsDev, 1}; }

    double operator()(double x) const;
    double slope_at_infinity() const;  // lim phi(x) / x
};

// Convexity and phi(1) = 0 checked on random secants.
bool check_phi_convexity(const PhiKind& kind, Stream& rng, int trials = 1000);

double phi_entropy(const DiscreteMeasure& m, const DiscreteMeasure& nu, const PhiKind& kind);
double tv(const DiscreteMeasure& m, const DiscreteMeasure& nu);
double separation(const DiscreteMeasure& m, const DiscreteMeasure& nu);

// Dirichlet(1, ..., 1); with zero_prob > 0 some atoms are zeroed first.
DiscreteMeasure random_measure(std::size_t size, Stream& rng, double zero_prob = 0.0);

// Log-Sobolev constant of lambda (mu - Id) on two points.
double two_point_log_sobolev(double lambda, const Eigen::Vector2d& mu);

// Time after which exp(-2 lambda (t - ln(1/mu_min - 1))_+) beats exp(-alpha t).
double two_point_bound_crossover(double lambda, const Eigen::Vector2d& mu);

struct ErgodicConstants {
    std::optional<double> alpha;
    std::optional<double> alpha_m;
    double hardy = 0;
    double lower = 0;
    double upper = 0;
    long argmin = 0;             // lattice point attaining the minimum
    double tail_increment = 0;   // relative change when the lattice is halved
};

// Upper constant in the Hardy bounds on the log-Sobolev constant.
double hardy_upper_factor();

ErgodicConstants hardy_constant(double beta, double sigma, long ncap);

struct CurvePoint {
    double t;
    double entropy;
};

std::vector<CurvePoint> decay_experiment(const FiniteSemigroup& sg, const DiscreteMeasure& m0,
                                         const std::vector<double>& t_grid);

struct BoundRow {
    double t, entropy, bound, margin;
};

struct BoundCheck {
    bool pass = true;
    double worst_margin = 0;
    double worst_t = 0;
    bool monotone = true;
    std::vector<BoundRow> rows;
};

// bound(t) = prefactor exp(-rate (t - warm_up)_+) Ent(m0 | nu), with Ent(m0 | nu)
// taken from the curve at t = 0.
BoundCheck check_transfer_bound(const std::vector<CurvePoint>& curve, double rate, double warm_up,
                                double prefactor);

void write_csv(std::ostream& os, const BoundCheck& check);

struct HyperboundResult {
    double best = 0;
    std::vector<double> per_restart;
};

// Best ||P_t f||_{L^p(nu)} found over ||f||_{L^2(nu)} = 1 by projected gradient
// ascent from the constant function and `restarts` random starts.
HyperboundResult hyperbound_norm(const FiniteSemigroup& sg, double t, double p, int restarts, Stream& rng);

struct DataProcessingReport {
    bool pass = true;
    int trials = 0;
    double worst_slack = 0;  // max of Ent(after) - Ent(before)
};

DataProcessingReport data_processing_test(int trials, Stream& rng);

}  // namespace interweave
