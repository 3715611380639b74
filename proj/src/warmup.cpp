#include "interweave/warmup.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "interweave/errors.hpp"
#include "interweave/special.hpp"

namespace interweave {

namespace {

template <class... Ts>
struct overloaded : Ts... {
    using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

double jacobi_rho(const wl::Jacobi& j, double u) {
    double a = 0.5 * (j.lambda1 - 1);
    return u / (std::sqrt(u + a * a) + a);
}

MonotonicityReport signed_differences(const std::vector<double>& x, const std::vector<double>& f, int order,
                                      int sign_offset) {
    const std::size_t n = x.size();
    if (order < 1) throw DomainError("monotonicity check: order must be at least 1");
    if (n < static_cast<std::size_t>(order) + 1) throw DomainError("monotonicity check: grid too short for order");
    for (std::size_t i = 1; i < n; ++i)
        if (!(x[i] > x[i - 1])) throw DomainError("monotonicity check: grid must be strictly increasing");
    double fmax = 0;
    for (double v : f) fmax = std::max(fmax, std::abs(v));
    if (fmax == 0) fmax = 1;
    const double hbar = (x.back() - x.front()) / static_cast<double>(n - 1);
    MonotonicityReport r;
    std::vector<double> dd = f;
    double factorial = 1;
    for (int k = 1; k <= order; ++k) {
        factorial *= k;
        std::vector<double> next(n - k);
        for (std::size_t i = 0; i + k < n; ++i) next[i] = (dd[i + 1] - dd[i]) / (x[i + k] - x[i]);
        dd = std::move(next);
        double sign = ((k + sign_offset) % 2 == 0) ? 1.0 : -1.0;
        double norm = factorial * std::pow(hbar, k) / fmax;
        for (std::size_t i = 0; i < dd.size(); ++i) {
            double v = sign * dd[i] * norm;
            if (v < r.worst) {
                r.worst = v;
                r.worst_at = x[i];
            }
            if (v < -1e-9 && r.pass) {
                r.pass = false;
                r.failing_order = k;
            }
        }
    }
    return r;
}

}  // namespace

void validate(const WarmupLaw& law) {
    std::visit(overloaded{
                   [](const wl::Dirac& d) { require(d.t0 >= 0 && std::isfinite(d.t0), "Dirac: t0 must be nonnegative"); },
                   [](const wl::NegLogBeta& d) {
                       require(d.eps > 0 && d.beta > 0 && std::isfinite(d.eps) && std::isfinite(d.beta),
                               "NegLogBeta: eps and beta must be positive");
                   },
                   [](const wl::Jacobi& d) {
                       require(d.beta > 1 && d.lambda1 >= 2 * d.beta, "Jacobi warm-up: need lambda1 >= 2 beta > 2");
                   },
                   [](const wl::Sum& d) {
                       require(!d.parts.empty(), "Sum: no parts");
                       for (const auto& p : d.parts) validate(p);
                   },
                   [](const wl::Subordinated& d) {
                       require(d.base != nullptr, "Subordinated: missing base law");
                       require(d.t >= 0 && std::isfinite(d.t), "Subordinated: t must be nonnegative");
                       validate(*d.base);
                   },
               },
               law.v);
}

std::string describe(const WarmupLaw& law) {
    std::ostringstream os;
    std::visit(overloaded{
                   [&](const wl::Dirac& d) { os << "Dirac(" << d.t0 << ")"; },
                   [&](const wl::NegLogBeta& d) { os << "NegLogBeta(" << d.eps << ", " << d.beta << ")"; },
                   [&](const wl::Jacobi& d) { os << "JacobiWarmup(" << d.lambda1 << ", " << d.beta << ")"; },
                   [&](const wl::Sum& d) {
                       for (std::size_t i = 0; i < d.parts.size(); ++i) os << (i ? " + " : "") << describe(d.parts[i]);
                   },
                   [&](const wl::Subordinated& d) { os << "Subordinated(" << describe(*d.base) << ", t=" << d.t << ")"; },
               },
               law.v);
    return os.str();
}

double laplace(const WarmupLaw& law, double u) {
    require(u >= 0 && std::isfinite(u), "laplace: u must be nonnegative");
    validate(law);
    return std::visit(overloaded{
                          [&](const wl::Dirac& d) { return std::exp(-u * d.t0); },
                          [&](const wl::NegLogBeta& d) {
                              return std::exp(log_gamma(d.beta + d.eps) + log_gamma(u + d.eps) - log_gamma(d.eps) -
                                              log_gamma(u + d.beta + d.eps));
                          },
                          [&](const wl::Jacobi& d) {
                              double rho = jacobi_rho(d, u);
                              return std::exp(log_gamma(d.lambda1 - d.beta) + log_gamma(rho + 0.5 * d.lambda1) -
                                              log_gamma(rho + d.lambda1 - d.beta) - log_gamma(0.5 * d.lambda1));
                          },
                          [&](const wl::Sum& d) {
                              double p = 1;
                              for (const auto& part : d.parts) p *= laplace(part, u);
                              return p;
                          },
                          [&](const wl::Subordinated& d) { return std::exp(-d.t * bernstein_exponent(*d.base, u)); },
                      },
                      law.v);
}

bool has_density(const WarmupLaw& law) { return std::holds_alternative<wl::NegLogBeta>(law.v); }

double density(const WarmupLaw& law, double s) {
    validate(law);
    const auto* d = std::get_if<wl::NegLogBeta>(&law.v);
    if (!d) throw UnsupportedError("density not available for " + describe(law));
    if (!(s > 0)) return 0.0;
    double log_norm = log_gamma(d->beta + d->eps) - log_gamma(d->beta) - log_gamma(d->eps);
    return std::exp(log_norm - d->eps * s + (d->beta - 1) * std::log(-std::expm1(-s)));
}

bool has_sampler(const WarmupLaw& law) {
    return std::visit(overloaded{
                          [](const wl::Dirac&) { return true; },
                          [](const wl::NegLogBeta&) { return true; },
                          [](const wl::Jacobi&) { return false; },
                          [](const wl::Sum& d) {
                              return std::all_of(d.parts.begin(), d.parts.end(),
                                                 [](const WarmupLaw& p) { return has_sampler(p); });
                          },
                          [](const wl::Subordinated& d) {
                              return d.t == std::floor(d.t) && d.t <= 1e6 && has_sampler(*d.base);
                          },
                      },
                      law.v);
}

double sample(const WarmupLaw& law, Stream& rng) {
    validate(law);
    if (!has_sampler(law)) throw UnsupportedError("sampler not available for " + describe(law));
    return std::visit(overloaded{
                          [&](const wl::Dirac& d) { return d.t0; },
                          [&](const wl::NegLogBeta& d) { return -rng.log_beta_variate(d.eps, d.beta); },
                          [&](const wl::Jacobi&) -> double { throw UnsupportedError("no sampler"); },
                          [&](const wl::Sum& d) {
                              double s = 0;
                              for (const auto& p : d.parts) s += sample(p, rng);
                              return s;
                          },
                          [&](const wl::Subordinated& d) {
                              double s = 0;
                              for (long k = 0; k < static_cast<long>(d.t); ++k) s += sample(*d.base, rng);
                              return s;
                          },
                      },
                      law.v);
}

bool is_infinitely_divisible(const WarmupLaw& law) {
    return std::visit(overloaded{
                          [](const wl::Dirac&) { return true; },
                          [](const wl::NegLogBeta&) { return true; },
                          [](const wl::Jacobi&) { return false; },
                          [](const wl::Sum& d) {
                              return std::all_of(d.parts.begin(), d.parts.end(),
                                                 [](const WarmupLaw& p) { return is_infinitely_divisible(p); });
                          },
                          [](const wl::Subordinated& d) { return is_infinitely_divisible(*d.base); },
                      },
                      law.v);
}

double bernstein_exponent(const WarmupLaw& law, double u) {
    if (!is_infinitely_divisible(law))
        throw UnsupportedError("law is not known to be infinitely divisible: " + describe(law));
    return -std::log(laplace(law, u));
}

std::optional<double> mean(const WarmupLaw& law) {
    return std::visit(overloaded{
                          [](const wl::Dirac& d) -> std::optional<double> { return d.t0; },
                          [](const wl::NegLogBeta& d) -> std::optional<double> {
                              return digamma(d.eps + d.beta) - digamma(d.eps);
                          },
                          [](const wl::Jacobi&) -> std::optional<double> { return std::nullopt; },
                          [](const wl::Sum& d) -> std::optional<double> {
                              double s = 0;
                              for (const auto& p : d.parts) {
                                  auto m = mean(p);
                                  if (!m) return std::nullopt;
                                  s += *m;
                              }
                              return s;
                          },
                          [](const wl::Subordinated& d) -> std::optional<double> {
                              auto m = mean(*d.base);
                              if (!m) return std::nullopt;
                              return d.t * *m;
                          },
                      },
                      law.v);
}

WarmupLaw convolve(const WarmupLaw& a, const WarmupLaw& b) {
    validate(a);
    validate(b);
    const auto* da = std::get_if<wl::Dirac>(&a.v);
    const auto* db = std::get_if<wl::Dirac>(&b.v);
    if (da && db) return wl::Dirac{da->t0 + db->t0};
    wl::Sum s;
    for (const WarmupLaw* x : {&a, &b}) {
        if (const auto* inner = std::get_if<wl::Sum>(&x->v))
            s.parts.insert(s.parts.end(), inner->parts.begin(), inner->parts.end());
        else
            s.parts.push_back(*x);
    }
    return s;
}

WarmupLaw shift(const WarmupLaw& law, double t) {
    require(t >= 0 && std::isfinite(t), "shift: t must be nonnegative");
    return convolve(law, wl::Dirac{t});
}

WarmupLaw subordinated(const WarmupLaw& base, double t) {
    validate(base);
    require(t >= 0 && std::isfinite(t), "subordinated: t must be nonnegative");
    if (const auto* d = std::get_if<wl::Dirac>(&base.v)) return wl::Dirac{t * d->t0};
    if (!is_infinitely_divisible(base))
        throw UnsupportedError("subordination needs an infinitely divisible law: " + describe(base));
    return wl::Subordinated{std::make_shared<const WarmupLaw>(base), t};
}

MonotonicityReport check_complete_monotonicity(const std::function<double(double)>& f,
                                               const std::vector<double>& grid, int order) {
    std::vector<double> values(grid.size());
    for (std::size_t i = 0; i < grid.size(); ++i) values[i] = f(grid[i]);
    return signed_differences(grid, values, order, 0);
}

MonotonicityReport bernstein_check(const std::function<double(double)>& phi, const std::vector<double>& grid,
                                   int order) {
    if (grid.size() < static_cast<std::size_t>(order) + 2) throw DomainError("bernstein_check: grid too short for order");
    std::vector<double> values(grid.size());
    for (std::size_t i = 0; i < grid.size(); ++i) values[i] = phi(grid[i]);
    std::vector<double> mids(grid.size() - 1), slopes(grid.size() - 1);
    for (std::size_t i = 0; i + 1 < grid.size(); ++i) {
        mids[i] = 0.5 * (grid[i] + grid[i + 1]);
        slopes[i] = (values[i + 1] - values[i]) / (grid[i + 1] - grid[i]);
    }
    MonotonicityReport r;
    double scale = 1;
    for (double v : values) scale = std::max(scale, std::abs(v));
    if (values[0] < -1e-9 * scale) {
        r.pass = false;
        r.worst = values[0] / scale;
        r.worst_at = grid[0];
    }
    for (std::size_t i = 0; i < slopes.size(); ++i) {
        if (slopes[i] < -1e-9 * std::max(1.0, std::abs(slopes[i]))) {
            if (r.pass) r.failing_order = 1;
            r.pass = false;
            r.worst = std::min(r.worst, slopes[i]);
            r.worst_at = mids[i];
        }
    }
    if (order >= 1 && slopes.size() >= 2) {
        MonotonicityReport d = signed_differences(mids, slopes, std::min<int>(order, static_cast<int>(slopes.size()) - 1), 0);
        if (!d.pass) {
            if (r.pass) r.failing_order = d.failing_order + 1;
            r.pass = false;
        }
        if (d.worst < r.worst) {
            r.worst = d.worst;
            r.worst_at = d.worst_at;
        }
    }
    return r;
}

std::vector<double> linear_grid(double lo, double hi, int points) {
    require(points >= 2 && hi > lo, "linear_grid: need at least two points and hi > lo");
    std::vector<double> g(static_cast<std::size_t>(points));
    for (int i = 0; i < points; ++i) g[i] = lo + (hi - lo) * i / (points - 1);
    return g;
}

}  // namespace interweave
