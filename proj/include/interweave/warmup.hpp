#pragma once

#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "interweave/rng.hpp"

namespace interweave {

struct WarmupLaw;

namespace wl {
struct Dirac { double t0; };
// -log R with R ~ Beta(eps, beta)
struct NegLogBeta { double eps; double beta; };
// Known only through its Laplace transform.
struct Jacobi { double lambda1; double beta; };
// Independent sum.
struct Sum { std::vector<WarmupLaw> parts; };
// Time-t marginal of the subordinator whose time-1 law is base.
struct Subordinated {
    std::shared_ptr<const WarmupLaw> base;
    double t;
};
}  // namespace wl

struct WarmupLaw {
    std::variant<wl::Dirac, wl::NegLogBeta, wl::Jacobi, wl::Sum, wl::Subordinated> v;

    WarmupLaw(wl::Dirac d) : v(d) {}
    WarmupLaw(wl::NegLogBeta d) : v(d) {}
    WarmupLaw(wl::Jacobi d) : v(d) {}
    WarmupLaw(wl::Sum d) : v(std::move(d)) {}
    WarmupLaw(wl::Subordinated d) : v(std::move(d)) {}
};

void validate(const WarmupLaw& law);
std::string describe(const WarmupLaw& law);

// E[exp(-u tau)]
double laplace(const WarmupLaw& law, double u);

bool has_density(const WarmupLaw& law);
double density(const WarmupLaw& law, double s);

bool has_sampler(const WarmupLaw& law);
double sample(const WarmupLaw& law, Stream& rng);

bool is_infinitely_divisible(const WarmupLaw& law);
// -log laplace(u); requires infinite divisibility.
double bernstein_exponent(const WarmupLaw& law, double u);

std::optional<double> mean(const WarmupLaw& law);

WarmupLaw convolve(const WarmupLaw& a, const WarmupLaw& b);
WarmupLaw shift(const WarmupLaw& law, double t);
WarmupLaw subordinated(const WarmupLaw& base, double t);

struct MonotonicityReport {
    bool pass = true;
    int failing_order = 0;    // first order with a violation, 0 when passing
    double worst = 0;         // most negative normalized signed difference
    double worst_at = 0;      // grid point where it occurs
};

// Signed divided differences (-1)^k k! hbar^k f[x_i..x_{i+k}] / max|f| for
// k = 1..order must stay above -1e-9.
MonotonicityReport check_complete_monotonicity(const std::function<double(double)>& f,
                                               const std::vector<double>& grid, int order);

// phi(grid[0]) >= 0 and phi' completely monotone up to the given order.
MonotonicityReport bernstein_check(const std::function<double(double)>& phi, const std::vector<double>& grid,
                                   int order);

std::vector<double> linear_grid(double lo, double hi, int points);

}  // namespace interweave
