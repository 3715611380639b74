#pragma once

#include <cstddef>

#include <Eigen/Dense>

#include "interweave/rng.hpp"
#include "interweave/stats.hpp"

namespace interweave {

// x -> Normal(M x + c, Sigma)
struct AffineGaussianKernel {
    Eigen::MatrixXd M;
    Eigen::VectorXd c;
    Eigen::MatrixXd Sigma;

    int dim() const { return static_cast<int>(M.rows()); }
    void validate() const;
    static AffineGaussianKernel identity(int d);
};

// First k1, then k2.
AffineGaussianKernel compose(const AffineGaussianKernel& k1, const AffineGaussianKernel& k2);

// Largest entrywise difference across M, c and Sigma.
double kernel_distance(const AffineGaussianKernel& a, const AffineGaussianKernel& b);

// dX = -B X dt + Gamma^{1/2} dW
struct OUModel {
    Eigen::MatrixXd B;
    Eigen::MatrixXd Gamma;

    int dim() const { return static_cast<int>(B.rows()); }
    void validate() const;
};

// Solves B X + X B^T = Gamma.
Eigen::MatrixXd gamma_infinity(const Eigen::MatrixXd& B, const Eigen::MatrixXd& Gamma);

// Gamma_t from the Lyapunov solution, Gamma_inf - e^{-tB} Gamma_inf e^{-tB^T}.
Eigen::MatrixXd gamma_t_closed_form(const OUModel& model, double t);

// Transition kernel; covariance by adaptive Dormand-Prince integration.
AffineGaussianKernel ou_kernel(const OUModel& model, double t);

struct HypoellipticityReport {
    bool ok = false;
    double min_det = 0;  // smallest det Gamma_t over the test times
    int kalman_rank = 0;
};

HypoellipticityReport check_hypoellipticity(const OUModel& model);

struct DiagonalTransfer {
    Eigen::MatrixXd V;        // rows are unit-norm left eigenvectors: V B V^{-1} = diag(b)
    Eigen::VectorXd b;        // ascending
    Eigen::MatrixXd G;        // V Gamma_inf V^T
    double kappa = 1;         // condition number of G
    double warmup = 0;        // log(kappa) / b_min
    Eigen::VectorXd alpha;
    AffineGaussianKernel lambda;  // x -> Normal(V x, diag(alpha) - G)
    OUModel diagonal;             // (diag(b), 2 diag(b) diag(alpha)), invariant covariance diag(alpha)
};

DiagonalTransfer diagonal_transfer_setup(const Eigen::MatrixXd& B, const Eigen::MatrixXd& Gamma);

struct RightFactor {
    AffineGaussianKernel kernel;
    double min_eigenvalue = 0;  // of the recovered covariance
};

// The unique K with compose(left, K) = target. Throws InfeasibleError when the
// recovered covariance has an eigenvalue below -1e-9.
RightFactor solve_right_factor(const AffineGaussianKernel& target, const AffineGaussianKernel& left);

// Smallest t with solve_right_factor(ou_kernel(model, t), lambda) feasible, by bisection.
double minimal_feasible_warmup(const OUModel& model, const AffineGaussianKernel& lambda, double t_hi,
                               double tol = 1e-10);

// Var(P_t f) / Var(f) under the invariant law for f(x) = a.x + x^T A x.
double variance_ratio(const OUModel& model, double t, const Eigen::MatrixXd& A, const Eigen::VectorXd& a);

struct Gaussian {
    Eigen::VectorXd mean;
    Eigen::MatrixXd cov;
};

// TV(p, q) = E_p[(1 - q/p)_+], which equals half of E_p|1 - q/p|.
Estimate tv_gaussian_mc(const Gaussian& p, const Gaussian& q, std::size_t nsamples, Stream& rng);

// TV between the products p^{copies} and q^{copies}.
Estimate tv_product_gaussian_mc(const Gaussian& p, const Gaussian& q, int copies, std::size_t nsamples,
                                Stream& rng);

}  // namespace interweave
