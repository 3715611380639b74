// Acceptance suite: one line per criterion, exit status 1 if any fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <string>
#include <vector>

#include "oracles.hpp"

#include "interweave/cutoff.hpp"
#include "interweave/ergodics.hpp"
#include "interweave/errors.hpp"
#include "interweave/gauss.hpp"
#include "interweave/kernels.hpp"
#include "interweave/parallel.hpp"
#include "interweave/polyop.hpp"
#include "interweave/semigroups.hpp"
#include "interweave/stats.hpp"
#include "interweave/warmup.hpp"

using namespace interweave;
using Eigen::MatrixXd;
using Eigen::VectorXd;

namespace {

struct Outcome {
    bool pass = true;
    std::string detail;

    void require(bool ok, const std::string& what) {
        if (!ok) {
            pass = false;
            detail += (detail.empty() ? "" : "; ") + what;
        }
    }
};

std::string num(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.3g", v);
    return buf;
}

std::vector<double> draws(std::size_t n, std::uint64_t seed, const std::function<double(Stream&)>& fn) {
    constexpr std::size_t kChunks = 64;
    std::vector<double> out(n);
    Stream base(seed);
    parallel_for(kChunks, [&](std::size_t c) {
        Stream s = base.split(c);
        for (std::size_t k = n * c / kChunks; k < n * (c + 1) / kChunks; ++k) out[k] = fn(s);
    });
    return out;
}

double se_gap(const std::vector<double>& xs, double expected) {
    Estimate e = mean_se(xs);
    return std::abs(e.value - expected) / e.se;
}

Outcome two_point() {
    Outcome o;
    Stream rng(1);
    double worst = 0;
    for (int i = 0; i < 100; ++i) {
        double a = 0.01 + 0.98 * rng.uniform(), b = 0.01 + 0.98 * rng.uniform(), lambda = 0.1 + 4.9 * rng.uniform();
        Eigen::Vector2d mu(a, 1 - a), mt(b, 1 - b);
        TwoPointOptimal opt = two_point_optimal(mu, mt);
        double t = opt.t0 / lambda;
        worst = std::max({worst, (opt.lambda * opt.lambda_tilde - oracle::two_point_semigroup(lambda, mu, t)).cwiseAbs().maxCoeff(),
                          (opt.lambda_tilde * opt.lambda - oracle::two_point_semigroup(lambda, mt, t)).cwiseAbs().maxCoeff()});
    }
    o.require(worst < 1e-12, "factorization residual " + num(worst));
    double t0 = two_point_optimal({0.25, 0.75}, {0.5, 0.5}).t0;
    o.require(std::abs(t0 - std::log(3.0)) < 1e-14, "t0 - ln 3 = " + num(t0 - std::log(3.0)));
    o.detail = o.pass ? "max residual " + num(worst) : o.detail;
    return o;
}

Outcome bessel_laguerre() {
    Outcome o;
    const int N = 15;
    const double t = 0.8;
    double worst = 0;
    struct P {
        double beta, sigma, scale;
    };
    for (P p : {P{0.5, 1, 1}, P{1, 2, 1}, P{2, 0.5, 0.7}}) {
        PolyOp Lam = kernel_polyop(kern::Poisson{p.sigma}, N);
        PolyOp G = generator_polyop(gen::BesselDiffusion{p.beta}, N);
        PolyOp Gt = generator_polyop(gen::BesselBirthDeath{p.beta, p.sigma}, N);
        PolyOp LamB = kernel_polyop(kern::GammaMix{p.beta, p.sigma}, N);
        worst = std::max({worst, check_intertwining(semigroup_polyop(G, t), Lam, semigroup_polyop(Gt, t)).scaled,
                          check_interweaving(Lam, LamB, semigroup_polyop(G, 1 / p.sigma)).scaled,
                          check_interweaving(LamB, Lam, semigroup_polyop(Gt, 1 / p.sigma)).scaled});
        PolyOp L = generator_polyop(gen::LaguerreDiffusion{p.beta, p.scale}, N);
        PolyOp Lt = generator_polyop(gen::LaguerreBirthDeath{p.beta, p.sigma * p.scale}, N);
        PolyOp LamL = kernel_polyop(kern::GammaMix{p.beta, p.sigma + 1 / p.scale}, N);
        double t0 = std::log1p(1 / (p.scale * p.sigma));
        worst = std::max({worst, check_intertwining(semigroup_polyop(L, t), Lam, semigroup_polyop(Lt, t)).scaled,
                          check_interweaving(Lam, LamL, semigroup_polyop(L, t0)).scaled,
                          check_interweaving(LamL, Lam, semigroup_polyop(Lt, t0)).scaled});
    }
    o.require(worst < 1e-9, "residual " + num(worst));
    if (o.pass) o.detail = "max scaled residual " + num(worst);
    return o;
}

Outcome beta_kernels() {
    Outcome o;
    const int N = 20;
    double mult = 0, trans = 0;
    for (auto [beta, eps] : {std::pair{0.5, 0.3}, std::pair{1.0, 1.0}, std::pair{2.0, 0.7}}) {
        PolyOp Lam = kernel_polyop(kern::BetaMult{beta, eps}, N);
        PolyOp op = Lam * kernel_polyop(kern::BStar{beta}, N);
        auto m = eigen_multipliers(op, generator_polyop(gen::LaguerreDiffusion{beta + eps}, N));
        for (int n = 0; n <= N; ++n) mult = std::max(mult, std::abs(m[n] / oracle::beta_multiplier(beta, eps, n) - 1));
        const double beta2 = 1.4;
        trans = std::max(trans, compare(kernel_polyop(kern::BetaMult{beta2, beta + eps}, N) * Lam,
                                        kernel_polyop(kern::BetaMult{beta + beta2, eps}, N))
                                    .scaled);
    }
    o.require(mult < 1e-10, "multiplier error " + num(mult));
    o.require(trans < 1e-12, "transitivity residual " + num(trans));
    if (o.pass) o.detail = "multiplier error " + num(mult) + ", transitivity " + num(trans);
    return o;
}

Outcome generalized_laguerre() {
    Outcome o;
    const int N = 15;
    const double beta = 1;
    BernsteinSpec phi;
    phi.m = 0.2;
    phi.atoms = {{1.0, 0.5}};
    PolyOp op = kernel_polyop(kern::VBeta{phi, beta}, N) * kernel_polyop(kern::IPhi{phi}, N) *
                kernel_polyop(kern::BStar{beta}, N);
    auto m = eigen_multipliers(op, generator_polyop(gen::LaguerreDiffusion{beta + 1}, N));
    WarmupLaw tau = wl::NegLogBeta{1.0, beta};
    double formula = 0, lap = 0;
    for (int n = 0; n <= N; ++n) {
        double c = oracle::gamma_ratio(1 + beta, n + 1, n + 1 + beta, 1);
        formula = std::max(formula, std::abs(m[n] / c - 1));
        lap = std::max(lap, std::abs(laplace(tau, n) / c - 1));
    }
    o.require(formula < 1e-10, "multiplier error " + num(formula));
    o.require(lap < 1e-10, "Laplace mismatch " + num(lap));
    if (o.pass) o.detail = "multiplier error " + num(formula) + ", Laplace " + num(lap);
    return o;
}

Outcome warmup_laws() {
    Outcome o;
    WarmupLaw law = wl::NegLogBeta{0.3, 0.5};
    auto d = draws(1000000, 5, [&](Stream& s) { return sample(law, s); });
    double worst = 0;
    for (double u : {0.5, 1.0, 2.0}) {
        std::vector<double> v(d.size());
        for (std::size_t i = 0; i < d.size(); ++i) v[i] = std::exp(-u * d[i]);
        // Oracle: the Laplace transform at u is the beta multiplier at degree u.
        worst = std::max(worst, se_gap(v, oracle::gamma_ratio(0.8, u + 0.3, 0.3, u + 0.8)));
    }
    o.require(worst <= 4, "Laplace MC off by " + num(worst) + " SE");
    auto grid = linear_grid(0, 10, 101);
    for (auto [l1, b] : {std::pair{4.0, 1.5}, std::pair{6.0, 2.0}}) {
        WarmupLaw j = wl::Jacobi{l1, b};
        o.require(check_complete_monotonicity([&](double u) { return laplace(j, u); }, grid, 6).pass,
                  "Jacobi (" + num(l1) + "," + num(b) + ") not completely monotone");
    }
    const double beta = 1.0;
    auto phi = [&](double u) { return -(std::lgamma(1 + beta) + std::lgamma(u + 1) - std::lgamma(u + beta + 1)); };
    o.require(bernstein_check(phi, grid, 6).pass, "Bernstein check failed");
    if (o.pass) o.detail = "worst Laplace gap " + num(worst) + " SE";
    return o;
}

Outcome entropy_transfer() {
    Outcome o;
    FiniteSemigroup sg = truncate_birth_death(1.0, 1.0, 200);
    const int points = 50;
    std::vector<double> times;
    for (int i = 0; i < points; ++i) times.push_back(10.0 * i / (points - 1));
    // Oracle propagates by one dense matrix exponential of the grid step, independent of uniformization.
    const MatrixXd step = (sg.Q * times[1]).exp();
    double worst = 1e300, oracle_gap = 0;
    for (std::size_t start : {std::size_t{0}, std::size_t{50}}) {
        std::vector<CurvePoint> curve = decay_experiment(sg, DiscreteMeasure::dirac(sg.size(), start), times);
        Eigen::RowVectorXd row = Eigen::RowVectorXd::Zero(static_cast<Eigen::Index>(sg.size()));
        row(static_cast<Eigen::Index>(start)) = 1;
        for (int i = 0; i < points; ++i) {
            if (i > 0) row = row * step;
            std::vector<double> m(sg.size());
            for (std::size_t k = 0; k < sg.size(); ++k) m[k] = std::max(0.0, row(static_cast<Eigen::Index>(k)));
            double s = 0;
            for (double x : m) s += x;
            for (double& x : m) x /= s;
            DiscreteMeasure mm = DiscreteMeasure::from_weights(m);
            double ent = phi_entropy(mm, sg.invariant, PhiKind::kl());
            double d = tv(mm, sg.invariant);
            oracle_gap = std::max(oracle_gap, std::abs(ent - curve[i].entropy));
            o.require(ent >= 2 * d * d - 1e-12, "Pinsker fails at t=" + num(times[i]));
            if (i > 0) o.require(curve[i].entropy <= curve[i - 1].entropy + 1e-12, "curve not monotone at t=" + num(times[i]));
            worst = std::min(worst, 2 * std::exp(-times[i]) * curve[0].entropy - curve[i].entropy);
        }
    }
    o.require(oracle_gap <= 1e-9, "library curve differs from oracle by " + num(oracle_gap));
    o.require(worst >= -1e-12, "bound violated by " + num(-worst));
    if (o.pass) o.detail = "smallest bound margin " + num(worst) + ", oracle gap " + num(oracle_gap);
    return o;
}

Outcome hypercontractivity() {
    Outcome o;
    FiniteSemigroup sg = truncate_birth_death(1.0, 1.0, 200);
    Stream rng(7);
    double best = 0;
    for (double t : {0.5, 1.0}) {
        Stream s = rng.split(static_cast<std::uint64_t>(t * 10));
        best = std::max(best, hyperbound_norm(sg, t + std::log(2.0), 1 + std::exp(t), 20, s).best);
    }
    o.require(best <= 1 + 1e-6, "norm " + num(best));
    if (o.pass) o.detail = "largest norm found " + std::to_string(best) + " (necessary-condition check)";
    return o;
}

Outcome hardy() {
    Outcome o;
    const double ratio = 10 * (8.0 / 3) / (1 - std::sqrt(5.0) / (2 * std::sqrt(2.0)));
    double worst_ratio = 0, worst_tail = 0;
    for (auto [b, s] : {std::pair{0.5, 1.0}, std::pair{1.0, 1.0}, std::pair{2.0, 0.5}}) {
        try {
            ErgodicConstants c = hardy_constant(b, s, 2000);
            worst_tail = std::max(worst_tail, c.tail_increment);
            worst_ratio = std::max(worst_ratio, std::abs(c.upper / c.lower - ratio) / ratio);
            o.require(c.lower > 0 && std::isfinite(c.hardy), "degenerate constant");
        } catch (const PrecisionError& e) {
            o.require(false, e.what());
        }
    }
    o.require(worst_tail < 1e-12, "tail " + num(worst_tail));
    o.require(worst_ratio < 1e-10, "ratio error " + num(worst_ratio));
    if (o.pass) o.detail = "bound ratio error " + num(worst_ratio);
    return o;
}

Outcome ou_transfer() {
    Outcome o;
    OUModel kin = kinetic_example();
    MatrixXd ref = oracle::lyapunov(kin.B, kin.Gamma);
    MatrixXd expected = MatrixXd(Eigen::Vector2d(0.5, 0.25).asDiagonal());
    o.require((gamma_infinity(kin.B, kin.Gamma) - expected).cwiseAbs().maxCoeff() < 1e-10, "stationary covariance");
    o.require((ref - expected).cwiseAbs().maxCoeff() < 1e-10, "oracle covariance");
    DiagonalTransfer d = diagonal_transfer_setup(kin.B, kin.Gamma);
    double inter = 0;
    for (double t : {0.1, 1.0, 5.0})
        inter = std::max(inter, kernel_distance(compose(ou_kernel(kin, t), d.lambda), compose(d.lambda, ou_kernel(d.diagonal, t))));
    o.require(inter < 1e-8, "intertwining residual " + num(inter));
    try {
        RightFactor rf = solve_right_factor(ou_kernel(kin, d.warmup), d.lambda);
        double f = kernel_distance(compose(d.lambda, rf.kernel), ou_kernel(kin, d.warmup));
        o.require(f < 1e-8, "factorization residual " + num(f));
    } catch (const InfeasibleError&) {
        o.require(false, "right factor infeasible at the warm-up");
    }
    Stream rng(9);
    double worst = 0;
    for (int trial = 0; trial < 50; ++trial) {
        MatrixXd A(2, 2);
        VectorXd a(2);
        for (int i = 0; i < 2; ++i) {
            a(i) = rng.normal();
            for (int j = 0; j < 2; ++j) A(i, j) = rng.normal();
        }
        for (int k = 0; k <= 40; ++k) {
            double t = 0.25 * k;
            worst = std::max(worst, variance_ratio(kin, t, A, a) / (d.kappa * std::exp(-2 * d.b(0) * t)));
        }
    }
    o.require(worst <= 1 + 1e-6, "variance ratio exceeds bound by factor " + num(worst));
    if (o.pass) o.detail = "intertwining " + num(inter) + ", worst variance ratio / bound " + num(worst);
    return o;
}

Outcome sampler_parity() {
    Outcome o;
    const double beta = 1, scale = 1, sigma = 2, t = 0.5, x = 3;
    const double total = std::log1p(1 / (scale * sigma)) + t;
    // The transition oracle is checked first against the polynomial semigroup.
    auto closed = laguerre_transition_moments(beta, scale, total, x, 4);
    PolyOp P = semigroup_polyop(generator_polyop(gen::LaguerreDiffusion{beta, scale}, 4), total);
    double oracle_err = 0;
    for (int k = 0; k <= 4; ++k) {
        double v = 0;
        for (int j = 0; j <= 4; ++j) v += P.matrix(j, k) * std::pow(x, j);
        oracle_err = std::max(oracle_err, std::abs(v - closed[k]) / std::max(1.0, v));
    }
    o.require(oracle_err < 1e-10, "oracle moments off by " + num(oracle_err));
    auto d = draws(100000, 11, [&](Stream& s) { return intertwined_laguerre_sampler(beta, scale, sigma, t, x, s); });
    auto ode = oracle::cir_moments(beta, scale, total, x, 3);
    double worst = 0;
    for (int k = 1; k <= 3; ++k) {
        std::vector<double> v(d.size());
        for (std::size_t i = 0; i < d.size(); ++i) v[i] = std::pow(d[i], k);
        worst = std::max(worst, se_gap(v, ode[k]));
    }
    o.require(worst <= 4, "moment gap " + num(worst) + " SE");
    int passes = 0;
    for (std::uint64_t seed : {21, 22, 23}) {
        auto a = draws(10000, seed, [&](Stream& s) { return intertwined_laguerre_sampler(beta, scale, sigma, t, x, s); });
        auto b = draws(10000, seed + 100, [&](Stream& s) { return exact_laguerre_transition(beta, scale, total, x, s); });
        if (ks_two_sample(a, b).p_value >= 0.01) ++passes;
    }
    o.require(passes >= 2, "KS passed in " + std::to_string(passes) + " of 3 seeds");
    if (o.pass) o.detail = "moment gap " + num(worst) + " SE, KS " + std::to_string(passes) + "/3";
    return o;
}

Outcome cutoff() {
    Outcome o;
    const std::vector<int> sizes = {1, 4, 16, 64, 256};
    const std::vector<double> rs = {0.25, 0.5, 0.75, 1.0, 1.5, 2.0, 3.0};
    Stream rng(13);
    OUFamily kin = kinetic_family(sizes, 3.0);
    auto p = tv_profile(kin, rs, 200000, rng);
    CutoffSummary s = cutoff_summary(p);
    o.require(s.early_final >= 0.9, "TV(1/2) = " + num(s.early_final));
    o.require(s.late_final <= 0.1, "TV(2) = " + num(s.late_final));
    o.require(s.monotone_in_r, "profile not monotone in r");
    o.require(s.signature, "kinetic family: no cut-off signature");
    Stream rng2(14);
    auto pt = tv_profile(transfer_family(kin), rs, 200000, rng2);
    CutoffSummary st = cutoff_summary(pt);
    o.require(st.signature && st.monotone_in_r, "transfer family: no cut-off signature");
    if (o.pass)
        o.detail = "n=256: TV(1/2)=" + num(s.early_final) + " TV(2)=" + num(s.late_final) + "; transfer " +
                   num(st.early_final) + "/" + num(st.late_final);
    return o;
}

Outcome properties() {
    Outcome o;
    Stream rng(15);
    DataProcessingReport dp = data_processing_test(500, rng);
    o.require(dp.pass && dp.trials == 500, "data processing slack " + num(dp.worst_slack));
    double sep = 0;
    for (int i = 0; i < 100; ++i) {
        std::size_t n = 2 + static_cast<std::size_t>(rng.uniform() * 6);
        DiscreteMeasure m = random_measure(n, rng), nu = random_measure(n, rng);
        sep = std::max(sep, std::abs(std::pow(phi_entropy(m, nu, PhiKind::power(200)), 1.0 / 200) - separation(m, nu)));
    }
    o.require(sep < 0.02, "separation limit gap " + num(sep));
    PolyOp L = generator_polyop(gen::LaguerreDiffusion{1.5}, 12);
    double law = compare(semigroup_polyop(L, 0.3) * semigroup_polyop(L, 0.9), semigroup_polyop(L, 1.2)).scaled;
    FiniteSemigroup sg = truncate_birth_death(1.0, 1.0, 60);
    MatrixXd P1 = transition_matrix(sg, 0.4) * transition_matrix(sg, 0.7), P2 = transition_matrix(sg, 1.1);
    law = std::max(law, (P1 - P2).cwiseAbs().maxCoeff());
    o.require(law < 1e-10, "semigroup law residual " + num(law));
    const double beta = 2.0;
    std::vector<double> eig(13);
    for (int n = 0; n <= 12; ++n) eig[n] = n;
    double sub = 0;
    for (double t : {0.5, 1.0, 3.0}) {
        auto m = subordinate_multipliers(eig, wl::NegLogBeta{1.0, beta}, t);
        for (int n = 0; n <= 12; ++n)
            sub = std::max(sub, std::abs(m[n] / std::pow(oracle::gamma_ratio(n + 1, beta + 1, n + beta + 1, 1), t) - 1));
    }
    o.require(sub < 1e-10, "subordination multiplier error " + num(sub));
    if (o.pass) o.detail = "separation gap " + num(sep) + ", semigroup law " + num(law) + ", subordination " + num(sub);
    return o;
}

}  // namespace

int main() {
    struct Criterion {
        const char* name;
        Outcome (*fn)();
        double budget_seconds;
    };
    const Criterion criteria[] = {
        {"two-point interweaving", two_point, 1},
        {"Bessel and Laguerre polynomial identities", bessel_laguerre, 2},
        {"beta kernel multipliers and transitivity", beta_kernels, 0},
        {"generalized Laguerre multipliers", generalized_laguerre, 0},
        {"warm-up laws", warmup_laws, 30},
        {"entropy transfer bound", entropy_transfer, 5},
        {"transferred hypercontractivity", hypercontractivity, 60},
        {"Hardy constants", hardy, 0},
        {"OU diagonal transfer", ou_transfer, 0},
        {"sampler parity", sampler_parity, 60},
        {"cut-off signature", cutoff, 600},
        {"property suites", properties, 0},
    };
    int failed = 0, index = 0;
    for (const auto& c : criteria) {
        ++index;
        auto start = std::chrono::steady_clock::now();
        Outcome o;
        try {
            o = c.fn();
        } catch (const std::exception& e) {
            o.pass = false;
            o.detail = std::string("exception: ") + e.what();
        }
        double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        if (c.budget_seconds > 0 && secs > c.budget_seconds) {
            o.pass = false;
            o.detail += " (runtime " + num(secs) + " s over budget " + num(c.budget_seconds) + " s)";
        }
        if (!o.pass) ++failed;
        std::printf("[%2d] %s  %s  (%.2f s)  %s\n", index, o.pass ? "PASS" : "FAIL", c.name, secs, o.detail.c_str());
        std::fflush(stdout);
    }
    std::printf("%d of %d criteria passed\n", index - failed, index);
    return failed == 0 ? 0 : 1;
}
