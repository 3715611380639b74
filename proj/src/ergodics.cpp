#include "interweave/ergodics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <ostream>

#include "interweave/errors.hpp"
#include "interweave/parallel.hpp"

namespace interweave {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

void same_support(const DiscreteMeasure& m, const DiscreteMeasure& nu) {
    if (m.size() != nu.size()) throw DimensionError("measures live on state spaces of different sizes");
}

double log_add(double a, double b) {
    if (a == -kInf) return b;
    if (b == -kInf) return a;
    double hi = std::max(a, b), lo = std::min(a, b);
    return hi + std::log1p(std::exp(lo - hi));
}

// log(exp(a) - exp(b)) for a >= b
double log_sub(double a, double b) {
    if (b == -kInf) return a;
    if (b >= a) return -kInf;
    return a + std::log1p(-std::exp(b - a));
}

double norm_p(const Eigen::VectorXd& g, const Eigen::VectorXd& nu, double p) {
    double s = 0;
    for (Eigen::Index i = 0; i < g.size(); ++i) s += nu(i) * std::pow(std::abs(g(i)), p);
    return std::pow(s, 1.0 / p);
}

double norm_2(const Eigen::VectorXd& f, const Eigen::VectorXd& nu) { return std::sqrt((nu.array() * f.array().square()).sum()); }

// The C+ terms tend to (1 + sigma) ln(1 + 1/sigma) as m grows, from below, so that
// limit enters every supremum over m > n.
double hardy_on_lattice(const std::vector<double>& logv, double beta, double sigma, long N, long* argmin) {
    const double tail_limit = (1 + sigma) * std::log1p(1 / sigma);
    const long M = static_cast<long>(logv.size()) - 1;
    // logT[m] = ln v[m, M], logH[m] = ln v[0, m]
    std::vector<double> logT(M + 2, -kInf), logH(N + 1, -kInf);
    for (long m = M; m >= 0; --m) logT[m] = log_add(logT[m + 1], logv[m]);
    double run = -kInf;
    for (long m = 0; m <= N; ++m) {
        run = log_add(run, logv[m]);
        logH[m] = logT[m + 1] < std::log(0.5) ? std::log1p(-std::exp(logT[m + 1])) : run;
    }
    // logR[k] = ln sum_{l<k} 1 / (v(l) sigma (l + beta))
    std::vector<double> logR(N + 1, -kInf);
    for (long k = 1; k <= N; ++k) {
        double l = static_cast<double>(k - 1);
        logR[k] = log_add(logR[k - 1], -(logv[k - 1] + std::log(sigma * (l + beta))));
    }
    // ln of x ln(1/x) for the head and tail masses
    auto entropic = [](double lx, double lcomp) {
        // -ln x computed as -log1p(-exp(lcomp)) when x is close to 1
        double neg_log = lcomp < std::log(0.5) ? -std::log1p(-std::exp(lcomp)) : -lx;
        if (neg_log <= 0) return -kInf;
        return lx + std::log(neg_log);
    };
    std::vector<double> headTerm(N + 1), tailTerm(N + 1);
    for (long m = 0; m <= N; ++m) {
        headTerm[m] = entropic(logH[m], logT[m + 1]);
        double lcomp = m > 0 ? logH[m - 1] : -kInf;
        tailTerm[m] = entropic(logT[m], lcomp);
    }
    double best = kInf;
    for (long n = 0; n <= N; ++n) {
        double cminus = 0, cplus = tail_limit;
        for (long m = 0; m < n; ++m) {
            double lr = log_sub(logR[n], logR[m]);
            if (lr == -kInf || headTerm[m] == -kInf) continue;
            cminus = std::max(cminus, std::exp(lr + headTerm[m]));
        }
        for (long m = n + 1; m <= N; ++m) {
            double lr = log_sub(logR[m], logR[n]);
            if (lr == -kInf || tailTerm[m] == -kInf) continue;
            cplus = std::max(cplus, std::exp(lr + tailTerm[m]));
        }
        double c = std::max(cminus, cplus);
        if (c < best) {
            best = c;
            *argmin = n;
        }
    }
    return best;
}

}  // namespace

PhiKind PhiKind::power(double p) {
    require(p >= 1 && std::isfinite(p), "power phi: p must be at least 1");
    return {Tag::PowerP, p};
}

double PhiKind::operator()(double x) const {
    require(x >= 0, "phi: argument must be nonnegative");
    switch (tag) {
        case Tag::KLDiv:
            return x == 0 ? 1.0 : x * std::log(x) - x + 1.0;
        case Tag::PowerP:
            return x >= 1 ? 0.0 : std::pow(1.0 - x, p);
        case Tag::AbsDev:
            return std::abs(x - 1.0);
    }
    return 0;
}

double PhiKind::slope_at_infinity() const {
    switch (tag) {
        case Tag::KLDiv:
            return kInf;
        case Tag::PowerP:
            return 0.0;
        case Tag::AbsDev:
            return 1.0;
    }
    return 0;
}

bool check_phi_convexity(const PhiKind& kind, Stream& rng, int trials) {
    if (std::abs(kind(1.0)) > 0) return false;
    for (int i = 0; i < trials; ++i) {
        double x = 5 * rng.uniform(), y = 5 * rng.uniform(), w = rng.uniform();
        double lhs = kind(w * x + (1 - w) * y);
        double rhs = w * kind(x) + (1 - w) * kind(y);
        if (lhs > rhs + 1e-12 * std::max(1.0, std::abs(rhs))) return false;
    }
    return true;
}

double phi_entropy(const DiscreteMeasure& m, const DiscreteMeasure& nu, const PhiKind& kind) {
    same_support(m, nu);
    double s = 0, singular = 0;
    for (std::size_t i = 0; i < m.size(); ++i) {
        double a = m.weights[i], b = nu.weights[i];
        if (b == 0) {
            singular += a;
            continue;
        }
        if (kind.tag == PhiKind::Tag::KLDiv)
            s += (a > 0 ? a * std::log(a / b) : 0.0) - a + b;
        else
            s += b * kind(a / b);
    }
    if (singular > 0) {
        double slope = kind.slope_at_infinity();
        if (std::isinf(slope)) return kInf;
        s += singular * slope;
    }
    return std::max(0.0, s);
}

double tv(const DiscreteMeasure& m, const DiscreteMeasure& nu) {
    same_support(m, nu);
    double s = 0;
    for (std::size_t i = 0; i < m.size(); ++i) s += std::abs(m.weights[i] - nu.weights[i]);
    return std::min(1.0, 0.5 * s);
}

double separation(const DiscreteMeasure& m, const DiscreteMeasure& nu) {
    same_support(m, nu);
    double s = 0;
    for (std::size_t i = 0; i < m.size(); ++i)
        if (nu.weights[i] > 0) s = std::max(s, 1.0 - m.weights[i] / nu.weights[i]);
    return s;
}

DiscreteMeasure random_measure(std::size_t size, Stream& rng, double zero_prob) {
    require(size > 0, "random_measure: empty state space");
    std::vector<double> w(size);
    double s = 0;
    for (auto& x : w) {
        x = rng.uniform() < zero_prob ? 0.0 : rng.exponential(1.0);
        s += x;
    }
    if (s == 0) {
        w[static_cast<std::size_t>(rng.uniform() * static_cast<double>(size)) % size] = 1.0;
        s = 1.0;
    }
    for (auto& x : w) x /= s;
    return DiscreteMeasure::from_weights(std::move(w));
}

double two_point_log_sobolev(double lambda, const Eigen::Vector2d& mu) {
    require(lambda > 0 && std::isfinite(lambda), "two_point_log_sobolev: lambda must be positive");
    require(mu(0) > 0 && mu(1) > 0 && std::abs(mu.sum() - 1) < 1e-12, "two_point_log_sobolev: degenerate mu");
    double x = 1.0 - 2.0 * std::min(mu(0), mu(1));
    if (x < 1e-6) return 2 * lambda * (1 - x * x / 3);
    return 2 * lambda * x / std::atanh(x);
}

double two_point_bound_crossover(double lambda, const Eigen::Vector2d& mu) {
    double alpha = two_point_log_sobolev(lambda, mu);
    double mu_min = std::min(mu(0), mu(1));
    double delay = std::log(1.0 / mu_min - 1.0);
    if (delay <= 0) return 0.0;
    return 2 * lambda * delay / (2 * lambda - alpha);
}

double hardy_upper_factor() { return 8.0 / 3.0 / (1.0 - std::sqrt(5.0) / (2.0 * std::sqrt(2.0))); }

ErgodicConstants hardy_constant(double beta, double sigma, long ncap) {
    require(beta > 0 && sigma > 0, "hardy_constant: beta and sigma must be positive");
    require(ncap >= 10, "hardy_constant: Ncap must be at least 10");
    // Invariant masses far enough past Ncap that the tail sums are exact in double precision.
    std::vector<double> logv;
    double top = -kInf;
    for (long n = 0;; ++n) {
        double lv = log_negative_binomial_mass(beta, sigma, n);
        logv.push_back(lv);
        top = std::max(top, lv);
        if (n > ncap && lv < top - 80) break;
        if (n > 50 * ncap) break;
    }
    double beyond = -kInf;
    for (std::size_t n = static_cast<std::size_t>(ncap) + 1; n < logv.size(); ++n) beyond = log_add(beyond, logv[n]);

    ErgodicConstants out;
    long arg_full = 0, arg_half = 0;
    double c_full = hardy_on_lattice(logv, beta, sigma, ncap, &arg_full);
    double c_half = hardy_on_lattice(logv, beta, sigma, ncap / 2, &arg_half);
    out.hardy = c_full;
    out.argmin = arg_full;
    out.tail_increment = std::max(std::abs(c_full - c_half) / c_full, std::exp(beyond));
    if (!(out.tail_increment < 1e-12) || !std::isfinite(c_full))
        throw PrecisionError("hardy_constant: not converged at Ncap = " + std::to_string(ncap));
    out.lower = 1.0 / (10.0 * c_full);
    out.upper = hardy_upper_factor() / c_full;
    return out;
}

std::vector<CurvePoint> decay_experiment(const FiniteSemigroup& sg, const DiscreteMeasure& m0,
                                         const std::vector<double>& t_grid) {
    require(!t_grid.empty(), "decay_experiment: empty time grid");
    std::vector<CurvePoint> out;
    DiscreteMeasure m = m0;
    double prev = 0;
    for (double t : t_grid) {
        require(t >= prev, "decay_experiment: time grid must be nondecreasing and nonnegative");
        m = evolve(sg, m, t - prev);
        prev = t;
        out.push_back({t, phi_entropy(m, sg.invariant, PhiKind::kl())});
    }
    return out;
}

BoundCheck check_transfer_bound(const std::vector<CurvePoint>& curve, double rate, double warm_up,
                                double prefactor) {
    require(!curve.empty() && curve.front().t == 0, "check_transfer_bound: curve must start at t = 0");
    require(rate >= 0 && warm_up >= 0 && prefactor > 0, "check_transfer_bound: invalid bound parameters");
    BoundCheck out;
    const double ent0 = curve.front().entropy;
    const double tol = 1e-12 * std::max(1.0, ent0);
    out.worst_margin = kInf;
    for (std::size_t i = 0; i < curve.size(); ++i) {
        const auto& c = curve[i];
        double bound = prefactor * std::exp(-rate * std::max(0.0, c.t - warm_up)) * ent0;
        double margin = bound - c.entropy;
        out.rows.push_back({c.t, c.entropy, bound, margin});
        if (margin < out.worst_margin) {
            out.worst_margin = margin;
            out.worst_t = c.t;
        }
        if (margin < -tol) out.pass = false;
        if (i > 0 && c.entropy > curve[i - 1].entropy + tol) out.monotone = false;
    }
    return out;
}

void write_csv(std::ostream& os, const BoundCheck& check) {
    os << "t,entropy,bound,margin\n";
    os.precision(17);
    for (const auto& r : check.rows) os << r.t << ',' << r.entropy << ',' << r.bound << ',' << r.margin << '\n';
}

HyperboundResult hyperbound_norm(const FiniteSemigroup& sg, double t, double p, int restarts, Stream& rng) {
    require(p >= 2 && std::isfinite(p), "hyperbound_norm: p must be at least 2");
    require(t >= 0 && std::isfinite(t), "hyperbound_norm: t must be nonnegative");
    require(restarts >= 0, "hyperbound_norm: restarts must be nonnegative");
    const Eigen::MatrixXd T = transition_matrix(sg, t);
    const Eigen::Index n = T.rows();
    const Eigen::VectorXd nu = Eigen::Map<const Eigen::VectorXd>(sg.invariant.weights.data(), n);
    const Eigen::VectorXd inv_nu = nu.array().max(1e-300).inverse();
    const Eigen::MatrixXd TT = T.transpose();

    auto objective = [&](const Eigen::VectorXd& f) { return norm_p(T * f, nu, p); };
    auto ascend = [&](Eigen::VectorXd f) {
        f /= norm_2(f, nu);
        double value = objective(f);
        double step = 1.0;
        for (int iter = 0; iter < 5000 && step > 1e-14; ++iter) {
            Eigen::VectorXd g = T * f;
            Eigen::VectorXd w(n);
            for (Eigen::Index i = 0; i < n; ++i)
                w(i) = nu(i) * std::pow(std::abs(g(i)), p - 1) * (g(i) < 0 ? -1.0 : 1.0);
            Eigen::VectorXd grad = inv_nu.cwiseProduct(TT * w) * std::pow(value, 1 - p);
            grad -= (nu.array() * grad.array() * f.array()).sum() * f;
            double gnorm = norm_2(grad, nu);
            if (gnorm < 1e-15) break;
            for (;;) {
                Eigen::VectorXd trial = f + step * grad;
                trial /= norm_2(trial, nu);
                double v = objective(trial);
                if (v > value) {
                    bool tiny = v - value <= 1e-15 * value;
                    f = trial;
                    value = v;
                    step *= 2;
                    if (tiny) step = 0;
                    break;
                }
                step *= 0.5;
                if (step <= 1e-14) break;
            }
        }
        return value;
    };

    HyperboundResult out;
    out.per_restart.assign(static_cast<std::size_t>(restarts) + 1, 0.0);
    out.per_restart[0] = ascend(Eigen::VectorXd::Ones(n));
    const Stream base = rng.split(0x6879);
    parallel_for(static_cast<std::size_t>(restarts), [&](std::size_t r) {
        Stream local = base.split(r);
        Eigen::VectorXd f(n);
        for (Eigen::Index i = 0; i < n; ++i) f(i) = local.normal();
        out.per_restart[r + 1] = ascend(f);
    });
    out.best = *std::max_element(out.per_restart.begin(), out.per_restart.end());
    return out;
}

DataProcessingReport data_processing_test(int trials, Stream& rng) {
    require(trials >= 1, "data_processing_test: trials must be positive");
    DataProcessingReport out;
    out.trials = trials;
    out.worst_slack = -kInf;
    std::vector<double> slack(static_cast<std::size_t>(trials));
    const Stream base = rng.split(0x6470);
    parallel_for(static_cast<std::size_t>(trials), [&](std::size_t i) {
        Stream local = base.split(i);
        std::size_t k = 2 + static_cast<std::size_t>(local.uniform() * 5);
        std::size_t l = 2 + static_cast<std::size_t>(local.uniform() * 5);
        DiscreteMeasure mt = random_measure(k, local, 0.3);
        DiscreteMeasure m = random_measure(k, local);
        std::vector<DiscreteMeasure> rows;
        for (std::size_t r = 0; r < k; ++r) rows.push_back(random_measure(l, local, 0.3));
        auto push = [&](const DiscreteMeasure& x) {
            std::vector<double> w(l, 0.0);
            for (std::size_t r = 0; r < k; ++r)
                for (std::size_t c = 0; c < l; ++c) w[c] += x.weights[r] * rows[r].weights[c];
            double s = 0;
            for (double v : w) s += v;
            for (double& v : w) v /= s;
            return DiscreteMeasure::from_weights(std::move(w));
        };
        DiscreteMeasure a = push(mt), b = push(m);
        double worst = -kInf;
        for (const PhiKind& kind : {PhiKind::kl(), PhiKind::power(2)})
            worst = std::max(worst, phi_entropy(a, b, kind) - phi_entropy(mt, m, kind));
        slack[i] = worst;
    });
    for (double s : slack) {
        out.worst_slack = std::max(out.worst_slack, s);
        if (s > 1e-10) out.pass = false;
    }
    return out;
}

}  // namespace interweave
