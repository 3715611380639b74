#include "interweave/runner.hpp"

#include <algorithm>
#include <charconv>
#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <functional>
#include <sstream>

#include "json.hpp"

#include "interweave/cutoff.hpp"
#include "interweave/ergodics.hpp"
#include "interweave/errors.hpp"
#include "interweave/gauss.hpp"
#include "interweave/kernels.hpp"
#include "interweave/parallel.hpp"
#include "interweave/polyop.hpp"
#include "interweave/semigroups.hpp"
#include "interweave/special.hpp"
#include "interweave/stats.hpp"
#include "interweave/warmup.hpp"

namespace interweave {

namespace {

using Eigen::MatrixXd;
using Eigen::VectorXd;

std::vector<double> linspace(double lo, double hi, long points) {
    std::vector<double> g(static_cast<std::size_t>(points));
    for (long i = 0; i < points; ++i) g[i] = lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(points - 1);
    return g;
}

std::vector<double> draw_many(std::size_t n, const Stream& base, const std::function<double(Stream&)>& fn) {
    constexpr std::size_t kChunks = 64;
    std::vector<double> out(n);
    parallel_for(kChunks, [&](std::size_t c) {
        Stream s = base.split(c);
        for (std::size_t k = n * c / kChunks; k < n * (c + 1) / kChunks; ++k) out[k] = fn(s);
    });
    return out;
}

double log_gamma_ratio(double a, double b, double c, double d) {
    return std::exp(log_gamma(a) + log_gamma(b) - log_gamma(c) - log_gamma(d));
}

std::string fmt(double x) {
    std::ostringstream os;
    os << x;
    return os.str();
}

// ---------------------------------------------------------------- verify

void verify_two_point(const ExperimentConfig& cfg, Stream& rng, Report& rep) {
    const long trials = cfg.integer("trials");
    double worst_forward = 0, worst_backward = 0, worst_feasibility = 0;
    for (long i = 0; i < trials; ++i) {
        Stream s = rng.split(static_cast<std::uint64_t>(i));
        double a = 0.02 + 0.96 * s.uniform(), b = 0.02 + 0.96 * s.uniform(), lambda = 0.1 + 4.9 * s.uniform();
        Eigen::Vector2d mu(a, 1 - a), mu_t(b, 1 - b);
        TwoPointOptimal opt = two_point_optimal(mu, mu_t);
        TwoPointModel L{lambda, mu}, Lt{lambda, mu_t};
        double warm = opt.t0 / lambda;
        worst_forward = std::max(worst_forward, (opt.lambda * opt.lambda_tilde - L.semigroup(warm)).cwiseAbs().maxCoeff());
        worst_backward = std::max(worst_backward, (opt.lambda_tilde * opt.lambda - Lt.semigroup(warm)).cwiseAbs().maxCoeff());
        for (const Eigen::Matrix2d* k : {&opt.lambda, &opt.lambda_tilde})
            worst_feasibility = std::max(worst_feasibility, std::max(-k->minCoeff(), k->maxCoeff() - 1.0));
    }
    rep.checks.push_back(check_at_most("two_point.forward_factorization", "two-point interweaving", worst_forward, 1e-12));
    rep.checks.push_back(check_at_most("two_point.backward_factorization", "two-point interweaving", worst_backward, 1e-12));
    rep.checks.push_back(check_at_most("two_point.kernel_entries_in_unit_interval", "two-point interweaving",
                                       worst_feasibility, 1e-12));
    TwoPointOptimal q = two_point_optimal({0.25, 0.75}, {0.5, 0.5});
    rep.checks.push_back(check_at_most("two_point.quarter_vs_uniform_warmup", "two-point optimal warm-up",
                                       std::abs(q.t0 - std::log(3.0)), 1e-14));
    rep.constants["two_point.quarter_vs_uniform_t0"] = q.t0;
}

void verify_polynomial(const ExperimentConfig& cfg, Report& rep) {
    const int N = static_cast<int>(cfg.integer("N"));
    const double tol = cfg.real("tol");
    const double t = 0.7;
    struct Triple {
        double beta, sigma, scale;
    };
    double bessel = 0, laguerre = 0, law = 0;
    for (Triple p : {Triple{0.5, 1, 1}, Triple{1, 2, 1}, Triple{2, 0.5, 0.7}}) {
        PolyOp G = generator_polyop(gen::BesselDiffusion{p.beta}, N);
        PolyOp Gt = generator_polyop(gen::BesselBirthDeath{p.beta, p.sigma}, N);
        PolyOp Lam = kernel_polyop(kern::Poisson{p.sigma}, N);
        PolyOp LamT = kernel_polyop(kern::GammaMix{p.beta, p.sigma}, N);
        double warm = 1.0 / p.sigma;
        bessel = std::max({bessel, check_intertwining(semigroup_polyop(G, t), Lam, semigroup_polyop(Gt, t)).scaled,
                           check_interweaving(Lam, LamT, semigroup_polyop(G, warm)).scaled,
                           check_interweaving(LamT, Lam, semigroup_polyop(Gt, warm)).scaled});

        PolyOp P = generator_polyop(gen::LaguerreDiffusion{p.beta, p.scale}, N);
        PolyOp Pt = generator_polyop(gen::LaguerreBirthDeath{p.beta, p.sigma * p.scale}, N);
        PolyOp LamL = kernel_polyop(kern::GammaMix{p.beta, p.sigma + 1.0 / p.scale}, N);
        double t0 = std::log1p(1.0 / (p.scale * p.sigma));
        laguerre = std::max({laguerre, check_intertwining(semigroup_polyop(P, t), Lam, semigroup_polyop(Pt, t)).scaled,
                             check_interweaving(Lam, LamL, semigroup_polyop(P, t0)).scaled,
                             check_interweaving(LamL, Lam, semigroup_polyop(Pt, t0)).scaled});
        law = std::max(law, compare(semigroup_polyop(P, 0.1) * semigroup_polyop(P, 0.7), semigroup_polyop(P, 0.8)).scaled);
    }
    rep.checks.push_back(check_at_most("bessel.residual", "Bessel intertwining and interweaving", bessel, tol));
    rep.checks.push_back(check_at_most("laguerre.residual", "Laguerre intertwining and interweaving", laguerre, tol));
    rep.checks.push_back(check_at_most("laguerre.semigroup_law", "semigroup property", law, 1e-10));

    double mult = 0, inter = 0, offdiag = 0, trans = 0;
    for (auto [beta, eps] : {std::pair{0.5, 0.3}, std::pair{1.0, 1.0}, std::pair{2.0, 0.7}}) {
        PolyOp Lam = kernel_polyop(kern::BetaMult{beta, eps}, N);
        PolyOp Star = kernel_polyop(kern::BStar{beta}, N);
        PolyOp Le = generator_polyop(gen::LaguerreDiffusion{eps}, N);
        PolyOp Lbe = generator_polyop(gen::LaguerreDiffusion{beta + eps}, N);
        auto m1 = eigen_multipliers(Lam * Star, Lbe);
        auto m2 = eigen_multipliers(Star * Lam, Le);
        for (int n = 0; n <= N; ++n) {
            double F = log_gamma_ratio(beta + eps, n + eps, eps, n + beta + eps);
            mult = std::max({mult, std::abs(m1[n] / F - 1), std::abs(m2[n] / F - 1)});
        }
        offdiag = std::max({offdiag, eigenbasis_offdiagonal(Lam * Star, Lbe, Lbe), eigenbasis_offdiagonal(Star * Lam, Le, Le)});
        inter = std::max({inter, check_intertwining(semigroup_polyop(Lbe, t), Lam, semigroup_polyop(Le, t)).scaled,
                          check_intertwining(semigroup_polyop(Le, t), Star, semigroup_polyop(Lbe, t)).scaled});
        const double beta2 = 0.8;
        trans = std::max(trans, compare(kernel_polyop(kern::BetaMult{beta2, beta + eps}, N) * Lam,
                                        kernel_polyop(kern::BetaMult{beta + beta2, eps}, N))
                                    .scaled);
    }
    rep.checks.push_back(check_at_most("beta.multiplier_relative_error", "beta kernel spectral factorization", mult, 1e-10));
    rep.checks.push_back(check_at_most("beta.eigenbasis_offdiagonal", "beta kernel spectral factorization", offdiag, 1e-10));
    rep.checks.push_back(check_at_most("beta.intertwining", "beta kernel intertwining", inter, tol));
    rep.checks.push_back(check_at_most("beta.transitivity", "beta kernel transitivity", trans, 1e-12));

    BernsteinSpec phi;
    phi.m = 0.2;
    phi.atoms = {{1.0, 0.5}};
    const double beta = 1.0;
    PolyOp I = kernel_polyop(kern::IPhi{phi}, N);
    PolyOp Star = kernel_polyop(kern::BStar{beta}, N);
    PolyOp V = kernel_polyop(kern::VBeta{phi, beta}, N);
    PolyOp Lphi = generator_polyop(gen::GeneralizedLaguerre{phi}, N);
    PolyOp Lb1 = generator_polyop(gen::LaguerreDiffusion{beta + 1}, N);
    PolyOp Lam = I * Star;
    auto m1 = eigen_multipliers(V * Lam, Lb1);
    auto m2 = eigen_multipliers(Lam * V, Lphi);
    WarmupLaw tau = wl::NegLogBeta{1.0, beta};
    double err_formula = 0, err_laplace = 0;
    for (int n = 0; n <= N; ++n) {
        double c = log_gamma_ratio(1 + beta, n + 1, n + 1 + beta, 1.0);
        err_formula = std::max({err_formula, std::abs(m1[n] / c - 1), std::abs(m2[n] / c - 1)});
        err_laplace = std::max(err_laplace, std::abs(m1[n] / laplace(tau, n) - 1));
    }
    double gl_inter = std::max(check_intertwining(semigroup_polyop(Lphi, t), Lam, semigroup_polyop(Lb1, t)).scaled,
                               check_intertwining(semigroup_polyop(Lb1, t), V, semigroup_polyop(Lphi, t)).scaled);
    rep.checks.push_back(check_at_most("generalized.multiplier_relative_error", "generalized Laguerre interweaving", err_formula, 1e-10));
    rep.checks.push_back(check_at_most("generalized.warmup_laplace_match", "generalized Laguerre warm-up law", err_laplace, 1e-10));
    rep.checks.push_back(check_at_most("generalized.intertwining", "generalized Laguerre intertwining", gl_inter, tol));
}

void verify_ou(Report& rep, Stream& rng) {
    OUModel model = kinetic_example();
    MatrixXd Ginf = gamma_infinity(model.B, model.Gamma);
    MatrixXd expected = (MatrixXd(2, 2) << 0.5, 0, 0, 0.25).finished();
    rep.checks.push_back(check_at_most("ou.stationary_covariance", "kinetic example", (Ginf - expected).cwiseAbs().maxCoeff(), 1e-10));
    rep.checks.push_back(check_true("ou.hypoelliptic", "kinetic example", check_hypoellipticity(model).ok));

    DiagonalTransfer d = diagonal_transfer_setup(model.B, model.Gamma);
    double inter = 0;
    for (double t : {0.1, 1.0, 5.0})
        inter = std::max(inter, kernel_distance(compose(ou_kernel(model, t), d.lambda), compose(d.lambda, ou_kernel(d.diagonal, t))));
    rep.checks.push_back(check_at_most("ou.intertwining", "diagonal transfer intertwining", inter, 1e-8));

    double factor = 0;
    bool feasible = true;
    try {
        RightFactor rf = solve_right_factor(ou_kernel(model, d.warmup), d.lambda);
        factor = kernel_distance(compose(d.lambda, rf.kernel), ou_kernel(model, d.warmup));
    } catch (const InfeasibleError&) {
        feasible = false;
    }
    rep.checks.push_back(check_true("ou.right_factor_feasible", "diagonal transfer interweaving", feasible));
    rep.checks.push_back(check_at_most("ou.factorization", "diagonal transfer interweaving", factor, 1e-8));
    rep.constants["ou.kappa"] = d.kappa;
    rep.constants["ou.warmup"] = d.warmup;
    rep.constants["ou.minimal_feasible_warmup"] = minimal_feasible_warmup(model, d.lambda, d.warmup);

    double worst = 0;
    for (int trial = 0; trial < 20; ++trial) {
        Stream s = rng.split(static_cast<std::uint64_t>(trial));
        MatrixXd A(2, 2);
        VectorXd a(2);
        for (int i = 0; i < 2; ++i) {
            a(i) = s.normal();
            for (int j = 0; j < 2; ++j) A(i, j) = s.normal();
        }
        for (double t : linspace(0, 6, 25)) {
            double bound = d.kappa * std::exp(-2 * d.b.minCoeff() * t);
            worst = std::max(worst, variance_ratio(model, t, A, a) / bound);
        }
    }
    rep.checks.push_back(check_at_most("ou.variance_decay", "hypocoercive variance bound", worst, 1 + 1e-6));
}

void run_verify(const ExperimentConfig& cfg, Stream& rng, Report& rep) {
    const std::string& suite = cfg.text("suite");
    if (suite == "all" || suite == "two_point") {
        Stream s = rng.split(1);
        verify_two_point(cfg, s, rep);
    }
    if (suite == "all" || suite == "laguerre") verify_polynomial(cfg, rep);
    if (suite == "all" || suite == "ou") {
        Stream s = rng.split(2);
        verify_ou(rep, s);
    }
}

// ---------------------------------------------------------------- entropy

void run_entropy(const ExperimentConfig& cfg, Report& rep) {
    const double beta = cfg.real("beta"), sigma = cfg.real("sigma");
    FiniteSemigroup sg = truncate_birth_death(beta, sigma, static_cast<int>(cfg.integer("N")));
    rep.constants["chain.mass_defect"] = sg.mass_defect;
    rep.checks.push_back(check_at_most("chain.mass_defect", "truncation policy", sg.mass_defect, 1e-8));
    const auto grid = linspace(0, cfg.real("t_max"), cfg.integer("points"));

    for (long start : cfg.integers("starts")) {
        const std::string tag = "start_" + std::to_string(start);
        DiscreteMeasure m = DiscreteMeasure::dirac(sg.size(), static_cast<std::size_t>(start));
        std::vector<CurvePoint> curve;
        double pinsker = 1e300, prev = 0;
        for (double t : grid) {
            m = evolve(sg, m, t - prev);
            prev = t;
            double ent = phi_entropy(m, sg.invariant, PhiKind::kl());
            double d = tv(m, sg.invariant);
            curve.push_back({t, ent});
            pinsker = std::min(pinsker, ent - 2 * d * d);
        }
        BoundCheck bc = check_transfer_bound(curve, cfg.real("rate"), cfg.real("warmup"), cfg.real("prefactor"));
        rep.checks.push_back(check_at_least(tag + ".transfer_bound_margin", "entropy transfer bound", bc.worst_margin,
                                            -1e-12 * std::max(1.0, curve.front().entropy)));
        rep.checks.push_back(check_true(tag + ".monotone", "entropy monotonicity", bc.monotone));
        rep.checks.push_back(check_at_least(tag + ".pinsker_slack", "Pinsker inequality", pinsker, -1e-12));
        Table tab{"entropy_" + tag, {"t", "entropy", "bound", "margin"}, {}};
        for (const auto& r : bc.rows) tab.rows.push_back({r.t, r.entropy, r.bound, r.margin});
        rep.tables.push_back(std::move(tab));
    }

    // Two-point chains: delayed rate-2 bound from the uniform comparison versus the exact curve.
    Table cross{"two_point_crossover", {"mu_min", "alpha", "delay", "crossover"}, {}};
    for (double mu_min : {0.05, 0.1, 0.25}) {
        Eigen::Vector2d mu(mu_min, 1 - mu_min);
        FiniteSemigroup tp = two_point_semigroup({1.0, mu});
        double delay = std::log(1.0 / mu_min - 1.0);
        double worst = 1e300;
        for (std::size_t s = 0; s < 2; ++s) {
            DiscreteMeasure m0 = DiscreteMeasure::dirac(2, s);
            double ent0 = phi_entropy(m0, tp.invariant, PhiKind::kl());
            for (double t : linspace(0, 10, 201)) {
                double ent = phi_entropy(evolve(tp, m0, t), tp.invariant, PhiKind::kl());
                worst = std::min(worst, std::exp(-2 * std::max(0.0, t - delay)) * ent0 - ent);
            }
        }
        rep.checks.push_back(check_at_least("two_point_" + fmt(mu_min) + ".delayed_bound_margin",
                                            "two-point entropy bound", worst, -1e-12));
        cross.rows.push_back({mu_min, two_point_log_sobolev(1.0, mu), delay, two_point_bound_crossover(1.0, mu)});
    }
    rep.tables.push_back(std::move(cross));
}

// ---------------------------------------------------------------- hyperbound

void run_hyperbound(const ExperimentConfig& cfg, Stream& rng, Report& rep) {
    const double sigma = cfg.real("sigma");
    FiniteSemigroup sg = truncate_birth_death(cfg.real("beta"), sigma, static_cast<int>(cfg.integer("N")));
    const double delay = std::log1p(1.0 / sigma);
    Table tab{"hyperbound", {"t", "time", "p", "best"}, {}};
    std::uint64_t k = 0;
    for (double t : cfg.reals("times")) {
        Stream s = rng.split(k++);
        double p = 1 + std::exp(t);
        if (p < 2) p = 2;
        HyperboundResult r = hyperbound_norm(sg, t + delay, p, static_cast<int>(cfg.integer("restarts")), s);
        rep.checks.push_back(check_at_most("hyperbound.t_" + fmt(t), "transferred hypercontractivity (necessary condition)",
                                           r.best, 1 + cfg.real("tol")));
        tab.rows.push_back({t, t + delay, p, r.best});
    }
    rep.tables.push_back(std::move(tab));
}

// ---------------------------------------------------------------- hardy

void run_hardy(const ExperimentConfig& cfg, Report& rep) {
    const auto betas = cfg.reals("beta"), sigmas = cfg.reals("sigma");
    const double ratio = 10 * hardy_upper_factor();
    Table tab{"hardy", {"beta", "sigma", "C", "lower", "upper", "argmin", "tail_increment"}, {}};
    for (std::size_t i = 0; i < betas.size(); ++i) {
        const std::string tag = "hardy_" + fmt(betas[i]) + "_" + fmt(sigmas[i]);
        try {
            ErgodicConstants c = hardy_constant(betas[i], sigmas[i], cfg.integer("Ncap"));
            rep.checks.push_back(check_at_most(tag + ".tail_increment", "Hardy constant convergence", c.tail_increment, 1e-12));
            rep.checks.push_back(check_at_most(tag + ".bound_ratio_error", "Hardy bounds",
                                               std::abs(c.upper / c.lower - ratio) / ratio, 1e-10));
            rep.checks.push_back(check_at_least(tag + ".lower_bound", "Hardy bounds", c.lower, 0.0));
            tab.rows.push_back({betas[i], sigmas[i], c.hardy, c.lower, c.upper, static_cast<double>(c.argmin), c.tail_increment});
        } catch (const PrecisionError&) {
            rep.checks.push_back(check_true(tag + ".converged", "Hardy constant convergence", false));
        }
    }
    rep.constants["hardy.bound_ratio"] = ratio;
    rep.tables.push_back(std::move(tab));
}

// ---------------------------------------------------------------- warmup

void run_warmup(const ExperimentConfig& cfg, Stream& rng, Report& rep) {
    const int order = static_cast<int>(cfg.integer("order"));
    const auto grid = linear_grid(0.0, cfg.real("u_max"), static_cast<int>(cfg.integer("grid_points")));
    if (cfg.text("law") == "jacobi") {
        WarmupLaw law = wl::Jacobi{cfg.real("lambda1"), cfg.real("beta")};
        MonotonicityReport m = check_complete_monotonicity([&](double u) { return laplace(law, u); }, grid, order);
        rep.checks.push_back(check_at_least("jacobi.complete_monotonicity", "Jacobi warm-up law", m.worst, -1e-9));
        return;
    }
    WarmupLaw law = wl::NegLogBeta{cfg.real("eps"), cfg.real("beta")};
    const auto n = static_cast<std::size_t>(cfg.integer("samples"));
    const auto draws = draw_many(n, rng.split(1), [&](Stream& s) { return sample(law, s); });
    Table tab{"warmup_laplace", {"u", "exact", "estimate", "se"}, {}};
    for (double u : cfg.reals("points")) {
        std::vector<double> v(draws.size());
        std::transform(draws.begin(), draws.end(), v.begin(), [u](double s) { return std::exp(-u * s); });
        Estimate e = mean_se(v);
        double exact = laplace(law, u);
        rep.checks.push_back(check_at_most("neg_log_beta.laplace_u_" + fmt(u) + "_in_se", "log-beta warm-up law",
                                           std::abs(e.value - exact) / e.se, 4.0));
        tab.rows.push_back({u, exact, e.value, e.se});
    }
    rep.tables.push_back(std::move(tab));
    MonotonicityReport cm = check_complete_monotonicity([&](double u) { return laplace(law, u); }, grid, order);
    rep.checks.push_back(check_at_least("neg_log_beta.complete_monotonicity", "log-beta warm-up law", cm.worst, -1e-9));
    MonotonicityReport bern = bernstein_check([&](double u) { return bernstein_exponent(law, u); }, grid, order);
    rep.checks.push_back(check_true("neg_log_beta.bernstein_exponent", "log-beta warm-up law", bern.pass));
    WarmupLaw tau = wl::NegLogBeta{1.0, cfg.real("beta")};
    MonotonicityReport bt = bernstein_check([&](double u) { return bernstein_exponent(tau, u); }, grid, order);
    rep.checks.push_back(check_true("generalized_warmup.bernstein_exponent", "generalized Laguerre warm-up law", bt.pass));
}

// ---------------------------------------------------------------- sample

void run_sample(const ExperimentConfig& cfg, Stream& rng, Report& rep) {
    const double beta = cfg.real("beta"), scale = cfg.real("scale"), sigma = cfg.real("sigma");
    const double t = cfg.real("t"), x = cfg.real("x");

    // The oracle's closed-form moments against the polynomial semigroup.
    double oracle = 0;
    for (auto [b, sc, tt, xx] : {std::tuple{beta, scale, t + std::log1p(1.0 / (scale * sigma)), x},
                                 std::tuple{0.5, 2.0, 0.3, 1.0}, std::tuple{2.0, 0.7, 1.5, 0.0}}) {
        PolyOp P = semigroup_polyop(generator_polyop(gen::LaguerreDiffusion{b, sc}, 4), tt);
        auto mom = laguerre_transition_moments(b, sc, tt, xx, 4);
        for (int k = 0; k <= 4; ++k) {
            double v = 0;
            for (int j = 0; j <= 4; ++j) v += P.matrix(j, k) * std::pow(xx, j);
            oracle = std::max(oracle, std::abs(v - mom[k]) / std::max(1.0, std::abs(v)));
        }
    }
    rep.checks.push_back(check_at_most("oracle.polynomial_moments", "exact transition oracle", oracle, 1e-10));

    const double total = std::log1p(1.0 / (scale * sigma)) + t;
    const auto n = static_cast<std::size_t>(cfg.integer("draws"));
    auto draws = draw_many(n, rng.split(1), [&](Stream& s) { return intertwined_laguerre_sampler(beta, scale, sigma, t, x, s); });
    auto exact = laguerre_transition_moments(beta, scale, total, x, 3);
    Table tab{"sampler_moments", {"k", "exact", "estimate", "se"}, {}};
    for (int k = 1; k <= 3; ++k) {
        std::vector<double> v(draws.size());
        std::transform(draws.begin(), draws.end(), v.begin(), [k](double s) { return std::pow(s, k); });
        Estimate e = mean_se(v);
        rep.checks.push_back(check_at_most("sampler.moment_" + std::to_string(k) + "_in_se", "intertwined sampler parity",
                                           std::abs(e.value - exact[k]) / e.se, 4.0));
        tab.rows.push_back({static_cast<double>(k), exact[k], e.value, e.se});
    }
    rep.tables.push_back(std::move(tab));

    const long seeds = cfg.integer("seeds");
    const auto m = static_cast<std::size_t>(cfg.integer("ks_draws"));
    long passes = 0;
    Table ks{"sampler_ks", {"seed", "statistic", "p_value"}, {}};
    for (long s = 0; s < seeds; ++s) {
        Stream base = rng.split(100 + static_cast<std::uint64_t>(s));
        auto a = draw_many(m, base.split(0), [&](Stream& r) { return intertwined_laguerre_sampler(beta, scale, sigma, t, x, r); });
        auto b = draw_many(m, base.split(1), [&](Stream& r) { return exact_laguerre_transition(beta, scale, total, x, r); });
        KSResult res = ks_two_sample(a, b);
        if (res.p_value >= 0.01) ++passes;
        ks.rows.push_back({static_cast<double>(s), res.statistic, res.p_value});
    }
    rep.tables.push_back(std::move(ks));
    rep.checks.push_back(check_at_least("sampler.ks_passes", "intertwined sampler parity", static_cast<double>(passes),
                                        static_cast<double>(std::max<long>(1, seeds - 1))));
}

// ---------------------------------------------------------------- cutoff

void run_cutoff(const ExperimentConfig& cfg, Stream& rng, Report& rep) {
    std::vector<int> sizes;
    for (long n : cfg.integers("sizes")) sizes.push_back(static_cast<int>(n));
    const std::string& family_name = cfg.text("family");
    OUFamily family = family_name == "scalar" ? scalar_family(cfg.real("b"), sizes, cfg.real("c"))
                                              : kinetic_family(sizes, cfg.real("c"));
    if (family_name == "transfer") family = transfer_family(family);
    family.time_scale = cfg.real("time_scale");
    const auto cap = static_cast<std::size_t>(cfg.real("memory_cap_mb") * 1024 * 1024);
    auto profile = tv_profile(family, cfg.reals("r_grid"), static_cast<std::size_t>(cfg.integer("samples")), rng, cap);
    CutoffSummary s = cutoff_summary(profile);
    const std::string anchor = "cut-off signature";
    rep.checks.push_back(check_at_least(family_name + ".early_tv_largest_n", anchor, s.early_final, 0.9));
    rep.checks.push_back(check_at_most(family_name + ".late_tv_largest_n", anchor, s.late_final, 0.1));
    rep.checks.push_back(check_true(family_name + ".early_tv_nondecreasing_in_n", anchor, s.early_rises));
    rep.checks.push_back(check_true(family_name + ".late_tv_nonincreasing_in_n", anchor, s.late_falls));
    rep.checks.push_back(check_at_most(family_name + ".profile_monotone_in_r_se_units", "TV profile monotonicity",
                                       s.worst_r_violation, 3.0));
    rep.constants[family_name + ".signature"] = s.signature ? 1.0 : 0.0;
    Table tab{"cutoff_profile", {"n", "r", "t", "tv", "se"}, {}};
    for (const auto& c : profile) tab.rows.push_back({static_cast<double>(c.n), c.r, c.t, c.tv.value, c.tv.se});
    rep.tables.push_back(std::move(tab));
}

void write_number(std::ostream& os, double v) {
    if (std::isnan(v))
        os << "nan";
    else if (std::isinf(v))
        os << (v > 0 ? "inf" : "-inf");
    else {
        char buf[32];
        auto res = std::to_chars(buf, buf + sizeof buf, v);
        os.write(buf, res.ptr - buf);
    }
}

}  // namespace

Check check_at_most(std::string name, std::string anchor, double value, double threshold) {
    Check c{std::move(name), std::move(anchor), "<=", value, threshold, threshold - value, false};
    c.pass = std::isfinite(value) && value <= threshold;
    return c;
}

Check check_at_least(std::string name, std::string anchor, double value, double threshold) {
    Check c{std::move(name), std::move(anchor), ">=", value, threshold, value - threshold, false};
    c.pass = std::isfinite(value) && value >= threshold;
    return c;
}

Check check_true(std::string name, std::string anchor, bool ok) {
    return check_at_least(std::move(name), std::move(anchor), ok ? 1.0 : 0.0, 1.0);
}

bool Report::passed() const {
    return std::all_of(checks.begin(), checks.end(), [](const Check& c) { return c.pass; });
}

std::vector<std::string> Report::failures() const {
    std::vector<std::string> out;
    for (const auto& c : checks)
        if (!c.pass) out.push_back(c.name);
    return out;
}

Report run(const ExperimentConfig& config) {
    const auto begin = std::chrono::steady_clock::now();
    Report rep;
    rep.command = command_name(config.command);
    rep.seed = config.seed;
    Stream rng(config.seed);
    switch (config.command) {
        case Command::Verify:
            run_verify(config, rng, rep);
            break;
        case Command::Entropy:
            run_entropy(config, rep);
            break;
        case Command::Hyperbound:
            run_hyperbound(config, rng, rep);
            break;
        case Command::Hardy:
            run_hardy(config, rep);
            break;
        case Command::Warmup:
            run_warmup(config, rng, rep);
            break;
        case Command::Sample:
            run_sample(config, rng, rep);
            break;
        case Command::Cutoff:
            run_cutoff(config, rng, rep);
            break;
    }
    rep.runtime_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - begin).count();
    return rep;
}

std::string report_json(const Report& report, bool timing) {
    auto num = [](double v) -> nlohmann::json {
        if (std::isfinite(v)) return v;
        return std::isnan(v) ? "nan" : (v > 0 ? "inf" : "-inf");
    };
    nlohmann::json j;
    j["command"] = report.command;
    j["seed"] = report.seed;
    j["passed"] = report.passed();
    j["failures"] = report.failures();
    nlohmann::json checks = nlohmann::json::array();
    for (const auto& c : report.checks)
        checks.push_back({{"name", c.name},
                          {"anchor", c.anchor},
                          {"relation", c.relation},
                          {"value", num(c.value)},
                          {"threshold", num(c.threshold)},
                          {"margin", num(c.margin)},
                          {"pass", c.pass}});
    j["checks"] = checks;
    nlohmann::json constants = nlohmann::json::object();
    for (const auto& [k, v] : report.constants) constants[k] = num(v);
    j["constants"] = constants;
    nlohmann::json tables = nlohmann::json::array();
    for (const auto& t : report.tables) tables.push_back(t.name + ".csv");
    j["tables"] = tables;
    if (timing) j["runtime_seconds"] = report.runtime_seconds;
    return j.dump(2) + "\n";
}

std::string checks_csv(const Report& report, bool timing) {
    std::ostringstream os;
    os << "name,anchor,relation,value,threshold,margin,pass";
    if (timing) os << ",runtime_seconds";
    os << '\n';
    for (const auto& c : report.checks) {
        os << c.name << ",\"" << c.anchor << "\"," << c.relation << ',';
        write_number(os, c.value);
        os << ',';
        write_number(os, c.threshold);
        os << ',';
        write_number(os, c.margin);
        os << ',' << (c.pass ? "true" : "false");
        if (timing) {
            os << ',';
            write_number(os, report.runtime_seconds);
        }
        os << '\n';
    }
    return os.str();
}

std::string table_csv(const Table& table) {
    std::ostringstream os;
    for (std::size_t i = 0; i < table.header.size(); ++i) os << (i ? "," : "") << table.header[i];
    os << '\n';
    for (const auto& row : table.rows) {
        for (std::size_t i = 0; i < row.size(); ++i) {
            if (i) os << ',';
            write_number(os, row[i]);
        }
        os << '\n';
    }
    return os.str();
}

int write_report(const Report& report, const ExperimentConfig& config) {
    namespace fs = std::filesystem;
    fs::path dir(config.output);
    fs::create_directories(dir);
    {
        std::ofstream os(dir / (config.format == "csv" ? "report.csv" : "report.json"), std::ios::binary);
        os << (config.format == "csv" ? checks_csv(report, config.timing) : report_json(report, config.timing));
    }
    for (const auto& t : report.tables) {
        std::ofstream os(dir / (t.name + ".csv"), std::ios::binary);
        os << table_csv(t);
    }
    return report.passed() ? 0 : 1;
}

}  // namespace interweave
