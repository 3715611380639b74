#include "interweave/kernels.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

#include "interweave/errors.hpp"

namespace interweave {

namespace {

void check_pair(const Eigen::Vector2d& mu) {
    require(std::isfinite(mu(0)) && std::isfinite(mu(1)), "two-point: probabilities must be finite");
    require(mu(0) > 0 && mu(1) > 0, "two-point: degenerate measure (an atom has mass 0)");
    require(std::abs(mu(0) + mu(1) - 1) <= 1e-12, "two-point: probabilities must sum to 1");
}

double check_lattice_point(double x) {
    require(x >= 0 && std::floor(x) == x, "kernel: expected a nonnegative integer state");
    return x;
}

}  // namespace

double sample_kernel(const KernelSpec& spec, double x, Stream& rng) {
    return std::visit(
        [&](const auto& s) -> double {
            using T = std::decay_t<decltype(s)>;
            if constexpr (std::is_same_v<T, kern::Poisson>) {
                require(s.sigma > 0, "poisson kernel: sigma must be positive");
                require(x >= 0, "poisson kernel: state must be nonnegative");
                return static_cast<double>(rng.poisson(s.sigma * x));
            } else if constexpr (std::is_same_v<T, kern::GammaMix>) {
                require(s.beta > 0 && s.sigma > 0, "gamma kernel: parameters must be positive");
                return rng.gamma(check_lattice_point(x) + s.beta, 1.0 / s.sigma);
            } else if constexpr (std::is_same_v<T, kern::BetaMult>) {
                require(s.beta > 0 && s.eps > 0, "beta kernel: parameters must be positive");
                require(x >= 0, "beta kernel: state must be nonnegative");
                return x * std::exp(rng.log_beta_variate(s.eps, s.beta));
            } else if constexpr (std::is_same_v<T, kern::BStar>) {
                require(s.beta > 0, "bstar kernel: beta must be positive");
                require(x >= 0, "bstar kernel: state must be nonnegative");
                return x + rng.gamma(s.beta, 1.0);
            } else if constexpr (std::is_same_v<T, kern::TwoPoint>) {
                require(x == 0 || x == 1, "two-point kernel: state must be 0 or 1");
                int i = static_cast<int>(x);
                require(s.k(i, 1) >= -1e-12 && s.k(i, 1) <= 1 + 1e-12, "two-point kernel: entries outside [0,1]");
                return rng.uniform() < s.k(i, 1) ? 1.0 : 0.0;
            } else if constexpr (std::is_same_v<T, kern::Dilation>) {
                require(s.scale > 0, "dilation: scale must be positive");
                return s.scale * x;
            } else {
                throw UnsupportedError("kernel has a polynomial action only: " + describe(spec));
            }
        },
        spec);
}

Estimate apply_kernel_mc(const KernelSpec& spec, const std::function<double(double)>& f, double x,
                         std::size_t nsamples, Stream& rng) {
    require(nsamples > 0, "apply_kernel_mc: nsamples must be positive");
    std::vector<double> values(nsamples);
    for (auto& v : values) v = f(sample_kernel(spec, x, rng));
    return mean_se(values);
}

void TwoPointModel::validate() const {
    require(lambda > 0 && std::isfinite(lambda), "two-point: lambda must be positive");
    check_pair(mu);
}

double TwoPointModel::l() const { return std::sqrt(mu(1) / mu(0)); }

Eigen::Vector2d TwoPointModel::phi() const { return {l(), -1.0 / l()}; }

double TwoPointModel::mu_min() const { return std::min(mu(0), mu(1)); }

Eigen::Matrix2d TwoPointModel::generator() const {
    validate();
    Eigen::Matrix2d m;
    m.row(0) = mu.transpose();
    m.row(1) = mu.transpose();
    return lambda * (m - Eigen::Matrix2d::Identity());
}

Eigen::Matrix2d TwoPointModel::semigroup(double t) const {
    validate();
    require(t >= 0, "two-point: t must be nonnegative");
    Eigen::Matrix2d m;
    m.row(0) = mu.transpose();
    m.row(1) = mu.transpose();
    return m + std::exp(-lambda * t) * (Eigen::Matrix2d::Identity() - m);
}

TwoPointLambda two_point_lambda(const Eigen::Vector2d& mu, const Eigen::Vector2d& mu_tilde, double eps) {
    check_pair(mu);
    check_pair(mu_tilde);
    require(eps > 0 && std::isfinite(eps), "two_point_lambda: eps must be positive");
    TwoPointModel target{1.0, mu}, source{1.0, mu_tilde};
    Eigen::Matrix2d from, to;
    from.col(0).setOnes();
    from.col(1) = source.phi();
    to.col(0).setOnes();
    to.col(1) = eps * target.phi();
    TwoPointLambda out;
    out.matrix = to * from.inverse();
    out.margin = std::min(out.matrix.minCoeff(), 1.0 - out.matrix.maxCoeff());
    out.feasible = out.margin >= -1e-12;
    return out;
}

TwoPointOptimal two_point_optimal(const Eigen::Vector2d& mu, const Eigen::Vector2d& mu_tilde) {
    check_pair(mu);
    check_pair(mu_tilde);
    double l = TwoPointModel{1.0, mu}.l();
    double lt = TwoPointModel{1.0, mu_tilde}.l();
    TwoPointOptimal out;
    out.eps0 = std::min(l / lt, lt / l);
    out.t0 = -2.0 * std::log(out.eps0);
    out.lambda = two_point_lambda(mu, mu_tilde, out.eps0).matrix;
    out.lambda_tilde = two_point_lambda(mu_tilde, mu, out.eps0).matrix;
    return out;
}

}  // namespace interweave
