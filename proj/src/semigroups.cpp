#include "interweave/semigroups.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <ostream>

#include <Eigen/Sparse>

#include "interweave/errors.hpp"
#include "interweave/special.hpp"

namespace interweave {

namespace {

constexpr double kMaxStep = 30.0;

// Poisson(s) weights until the remaining mass is below 1e-15.
std::vector<double> poisson_weights(double s) {
    std::vector<double> w;
    double p = std::exp(-s);
    double cum = 0;
    for (int k = 0;; ++k) {
        if (k > 0) p *= s / k;
        w.push_back(p);
        cum += p;
        if (k > s && 1.0 - cum < 1e-15) break;
        if (k > 10000) break;
    }
    return w;
}

double uniformization_rate(const Eigen::MatrixXd& Q) {
    double a = 0;
    for (Eigen::Index i = 0; i < Q.rows(); ++i) a = std::max(a, -Q(i, i));
    return a;
}

Eigen::SparseMatrix<double> jump_matrix(const Eigen::MatrixXd& Q, double a) {
    const Eigen::Index n = Q.rows();
    std::vector<Eigen::Triplet<double>> trips;
    for (Eigen::Index i = 0; i < n; ++i)
        for (Eigen::Index j = 0; j < n; ++j) {
            double v = Q(i, j) / a + (i == j ? 1.0 : 0.0);
            if (v != 0.0) trips.emplace_back(i, j, v);
        }
    Eigen::SparseMatrix<double> P(n, n);
    P.setFromTriplets(trips.begin(), trips.end());
    return P;
}

std::vector<long> default_labels(std::size_t n) {
    std::vector<long> l(n);
    std::iota(l.begin(), l.end(), 0L);
    return l;
}

}  // namespace

DiscreteMeasure DiscreteMeasure::from_weights(std::vector<double> w) {
    DiscreteMeasure m;
    m.labels = default_labels(w.size());
    m.weights = std::move(w);
    m.validate();
    return m;
}

DiscreteMeasure DiscreteMeasure::dirac(std::size_t size, std::size_t at) {
    require(at < size, "dirac: atom outside the state space");
    std::vector<double> w(size, 0.0);
    w[at] = 1.0;
    return from_weights(std::move(w));
}

DiscreteMeasure DiscreteMeasure::uniform(std::size_t size) {
    require(size > 0, "uniform: empty state space");
    return from_weights(std::vector<double>(size, 1.0 / static_cast<double>(size)));
}

void DiscreteMeasure::validate() const {
    require(!weights.empty(), "measure: empty weights");
    require(labels.empty() || labels.size() == weights.size(), "measure: labels and weights differ in size");
    double s = 0;
    for (double w : weights) {
        require(w >= 0 && std::isfinite(w), "measure: weights must be nonnegative");
        s += w;
    }
    require(std::abs(s - 1.0) <= 1e-12 * std::max<double>(1.0, static_cast<double>(weights.size()) / 100.0),
            "measure: weights must sum to 1");
}

void FiniteSemigroup::validate() const {
    if (Q.rows() != Q.cols() || Q.rows() == 0) throw DimensionError("semigroup: generator must be square");
    if (invariant.size() != size()) throw DimensionError("semigroup: invariant law has the wrong size");
    for (Eigen::Index i = 0; i < Q.rows(); ++i) {
        double scale = std::max(1.0, std::abs(Q(i, i)));
        require(std::abs(Q.row(i).sum()) <= 1e-12 * scale, "semigroup: generator rows must sum to zero");
        for (Eigen::Index j = 0; j < Q.cols(); ++j)
            if (i != j) require(Q(i, j) >= 0, "semigroup: off-diagonal rates must be nonnegative");
    }
    invariant.validate();
}

FiniteSemigroup from_generator(const Eigen::MatrixXd& Q) {
    if (Q.rows() != Q.cols() || Q.rows() == 0) throw DimensionError("from_generator: generator must be square");
    const Eigen::Index n = Q.rows();
    Eigen::MatrixXd A = Q.transpose();
    A.row(n - 1).setOnes();
    Eigen::VectorXd rhs = Eigen::VectorXd::Zero(n);
    rhs(n - 1) = 1.0;
    Eigen::VectorXd pi = A.fullPivLu().solve(rhs);
    std::vector<double> w(static_cast<std::size_t>(n));
    double s = 0;
    for (Eigen::Index i = 0; i < n; ++i) {
        w[i] = std::max(0.0, pi(i));
        s += w[i];
    }
    for (double& x : w) x /= s;
    FiniteSemigroup sg{Q, DiscreteMeasure::from_weights(std::move(w)), 0.0};
    sg.validate();
    return sg;
}

double log_negative_binomial_mass(double beta, double sigma, long n) {
    require(beta > 0 && sigma > 0, "negative binomial: beta and sigma must be positive");
    require(n >= 0, "negative binomial: n must be nonnegative");
    double dn = static_cast<double>(n);
    return -beta * std::log1p(sigma) + dn * std::log(sigma / (sigma + 1.0)) + log_gamma(dn + beta) -
           log_gamma(beta) - log_gamma(dn + 1.0);
}

FiniteSemigroup truncate_birth_death(double beta, double sigma, int N) {
    require(beta > 0 && std::isfinite(beta), "birth-death: beta must be positive");
    require(sigma > 0 && std::isfinite(sigma), "birth-death: sigma must be positive");
    require(N >= 10, "birth-death: truncation level must be at least 10");
    const int n = N + 1;
    Eigen::MatrixXd Q = Eigen::MatrixXd::Zero(n, n);
    for (int k = 0; k <= N; ++k) {
        double birth = k < N ? sigma * (k + beta) : 0.0;
        double death = (sigma + 1.0) * k;
        if (k < N) Q(k, k + 1) = birth;
        if (k > 0) Q(k, k - 1) = death;
        Q(k, k) = -(birth + death);
    }
    std::vector<double> logv(n);
    for (int k = 0; k <= N; ++k) logv[k] = log_negative_binomial_mass(beta, sigma, k);
    double top = *std::max_element(logv.begin(), logv.end());
    std::vector<double> w(n);
    double s = 0;
    for (int k = 0; k <= N; ++k) s += (w[k] = std::exp(logv[k] - top));
    for (double& x : w) x /= s;

    // Tail mass beyond N, summed until the terms are negligible.
    double tail = 0;
    for (long k = N + 1;; ++k) {
        double term = std::exp(log_negative_binomial_mass(beta, sigma, k));
        tail += term;
        if (term <= 1e-18 * tail || term < 1e-300 || k > 100L * (N + 1000)) break;
    }
    return FiniteSemigroup{std::move(Q), DiscreteMeasure::from_weights(std::move(w)), tail};
}

FiniteSemigroup two_point_semigroup(const TwoPointModel& model) {
    model.validate();
    Eigen::MatrixXd Q = model.generator();
    return FiniteSemigroup{Q, DiscreteMeasure::from_weights({model.mu(0), model.mu(1)}), 0.0};
}

DiscreteMeasure evolve(const FiniteSemigroup& sg, const DiscreteMeasure& m0, double t) {
    require(t >= 0 && std::isfinite(t), "evolve: t must be nonnegative");
    if (m0.size() != sg.size()) throw DimensionError("evolve: measure and semigroup sizes differ");
    m0.validate();
    const double a = uniformization_rate(sg.Q);
    Eigen::VectorXd v = Eigen::Map<const Eigen::VectorXd>(m0.weights.data(), static_cast<Eigen::Index>(m0.size()));
    if (a > 0 && t > 0) {
        Eigen::SparseMatrix<double> PT = jump_matrix(sg.Q, a).transpose();
        const int steps = std::max(1, static_cast<int>(std::ceil(a * t / kMaxStep)));
        const std::vector<double> w = poisson_weights(a * t / steps);
        for (int s = 0; s < steps; ++s) {
            Eigen::VectorXd term = v;
            Eigen::VectorXd acc = w[0] * term;
            for (std::size_t k = 1; k < w.size(); ++k) {
                term = PT * term;
                acc += w[k] * term;
            }
            v = acc;
        }
    }
    std::vector<double> out(v.size());
    double total = 0;
    for (Eigen::Index i = 0; i < v.size(); ++i) total += (out[i] = std::max(0.0, v(i)));
    for (double& x : out) x /= total;
    DiscreteMeasure m = DiscreteMeasure::from_weights(std::move(out));
    if (!m0.labels.empty()) m.labels = m0.labels;
    return m;
}

Eigen::MatrixXd transition_matrix(const FiniteSemigroup& sg, double t) {
    require(t >= 0 && std::isfinite(t), "transition_matrix: t must be nonnegative");
    const Eigen::Index n = sg.Q.rows();
    Eigen::MatrixXd M = Eigen::MatrixXd::Identity(n, n);
    const double a = uniformization_rate(sg.Q);
    if (a == 0 || t == 0) return M;
    Eigen::SparseMatrix<double> P = jump_matrix(sg.Q, a);
    const int steps = std::max(1, static_cast<int>(std::ceil(a * t / kMaxStep)));
    const std::vector<double> w = poisson_weights(a * t / steps);
    Eigen::MatrixXd step = w[0] * Eigen::MatrixXd::Identity(n, n);
    Eigen::MatrixXd term = Eigen::MatrixXd::Identity(n, n);
    for (std::size_t k = 1; k < w.size(); ++k) {
        term = term * P;
        step += w[k] * term;
    }
    for (int s = 0; s < steps; ++s) M = M * step;
    return M;
}

double exact_laguerre_transition(double beta, double scale, double t, double x, Stream& rng) {
    require(beta > 0 && scale > 0 && t > 0, "laguerre transition: beta, scale and t must be positive");
    require(x >= 0 && std::isfinite(x), "laguerre transition: x must be nonnegative");
    double c = scale * -std::expm1(-t);
    double n = static_cast<double>(rng.poisson(x * std::exp(-t) / c));
    return c * rng.gamma(beta + n, 1.0);
}

std::vector<double> laguerre_transition_moments(double beta, double scale, double t, double x, int kmax) {
    require(beta > 0 && scale > 0 && t >= 0, "laguerre moments: invalid parameters");
    require(kmax >= 0, "laguerre moments: kmax must be nonnegative");
    double c = scale * -std::expm1(-t);
    double y = x * std::exp(-t);
    std::vector<double> out(kmax + 1);
    for (int n = 0; n <= kmax; ++n) {
        double s = 0, binom = 1;
        for (int j = 0; j <= n; ++j) {
            if (j > 0) binom *= static_cast<double>(n - j + 1) / j;
            double rising = 1;
            for (int i = 0; i < n - j; ++i) rising *= beta + j + i;
            s += binom * rising * std::pow(c, n - j) * std::pow(y, j);
        }
        out[n] = s;
    }
    return out;
}

std::int64_t gillespie_birth_death(double beta, double sigma, double t, std::int64_t n0, Stream& rng,
                                   std::int64_t* events) {
    require(beta > 0 && sigma > 0, "gillespie: beta and sigma must be positive");
    require(t >= 0 && n0 >= 0, "gillespie: t and n0 must be nonnegative");
    std::int64_t n = n0, count = 0;
    double now = 0;
    for (;;) {
        double birth = sigma * (static_cast<double>(n) + beta);
        double death = (sigma + 1.0) * static_cast<double>(n);
        double total = birth + death;
        now += rng.exponential(total);
        if (now > t) break;
        if (rng.uniform() * total < birth)
            ++n;
        else
            --n;
        ++count;
    }
    if (events) *events = count;
    return n;
}

double intertwined_laguerre_sampler(double beta, double scale, double sigma, double t, double x, Stream& rng) {
    require(beta > 0 && scale > 0 && sigma > 0, "intertwined sampler: beta, scale and sigma must be positive");
    require(t >= 0 && x >= 0, "intertwined sampler: t and x must be nonnegative");
    std::int64_t n0 = rng.poisson(sigma * x);
    std::int64_t nt = gillespie_birth_death(beta, sigma * scale, t, n0, rng);
    return rng.gamma(static_cast<double>(nt) + beta, 1.0 / (1.0 / scale + sigma));
}

std::vector<double> subordinate_multipliers(const std::vector<double>& eigenvalues, const WarmupLaw& law,
                                            double t) {
    require(t >= 0 && std::isfinite(t), "subordinate_multipliers: t must be nonnegative");
    for (double l : eigenvalues) require(l >= 0 && std::isfinite(l), "subordinate_multipliers: eigenvalues must be nonnegative");
    if (t != 1.0 && !is_infinitely_divisible(law))
        throw UnsupportedError("subordinate_multipliers: law is not infinitely divisible: " + describe(law));
    std::vector<double> out;
    out.reserve(eigenvalues.size());
    for (double l : eigenvalues)
        out.push_back(t == 1.0 ? laplace(law, l) : std::exp(-t * bernstein_exponent(law, l)));
    return out;
}

void write_csv(std::ostream& os, const DiscreteMeasure& m) {
    os << "state,weight\n";
    os.precision(17);
    for (std::size_t i = 0; i < m.size(); ++i)
        os << (m.labels.empty() ? static_cast<long>(i) : m.labels[i]) << ',' << m.weights[i] << '\n';
}

}  // namespace interweave
