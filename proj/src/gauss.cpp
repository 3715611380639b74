#include "interweave/gauss.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

#include <boost/numeric/odeint.hpp>
#include <unsupported/Eigen/MatrixFunctions>

#include "interweave/errors.hpp"
#include "interweave/parallel.hpp"

namespace interweave {

using Eigen::MatrixXd;
using Eigen::VectorXd;

namespace {

MatrixXd symmetrize(const MatrixXd& m) { return 0.5 * (m + m.transpose()); }

double min_eigenvalue(const MatrixXd& m) {
    if (m.size() == 0) return 0;
    return Eigen::SelfAdjointEigenSolver<MatrixXd>(symmetrize(m), Eigen::EigenvaluesOnly).eigenvalues()(0);
}

MatrixXd psd_sqrt(const MatrixXd& m) {
    Eigen::SelfAdjointEigenSolver<MatrixXd> es(symmetrize(m));
    VectorXd ev = es.eigenvalues().cwiseMax(0.0).cwiseSqrt();
    return es.eigenvectors() * ev.asDiagonal() * es.eigenvectors().transpose();
}

void check_square(const MatrixXd& m, int d, const char* what) {
    if (m.rows() != d || m.cols() != d) throw DimensionError(std::string(what) + ": dimension mismatch");
}

void check_stable(const MatrixXd& B) {
    Eigen::EigenSolver<MatrixXd> es(B, false);
    double worst = es.eigenvalues().real().minCoeff();
    if (!(worst > 0)) throw DomainError("OU drift is not stable: an eigenvalue has nonpositive real part");
}

}  // namespace

void AffineGaussianKernel::validate() const {
    int d = dim();
    check_square(M, d, "kernel");
    check_square(Sigma, d, "kernel covariance");
    if (c.size() != d) throw DimensionError("kernel: offset dimension mismatch");
    double scale = std::max(1.0, Sigma.cwiseAbs().maxCoeff());
    require((Sigma - Sigma.transpose()).cwiseAbs().maxCoeff() <= 1e-12 * scale, "kernel covariance must be symmetric");
    require(min_eigenvalue(Sigma) >= -1e-12 * scale, "kernel covariance must be positive semidefinite");
}

AffineGaussianKernel AffineGaussianKernel::identity(int d) {
    return {MatrixXd::Identity(d, d), VectorXd::Zero(d), MatrixXd::Zero(d, d)};
}

AffineGaussianKernel compose(const AffineGaussianKernel& k1, const AffineGaussianKernel& k2) {
    if (k1.dim() != k2.dim() || k1.M.cols() != k2.M.cols()) throw DimensionError("compose: dimension mismatch");
    return {k2.M * k1.M, k2.M * k1.c + k2.c, symmetrize(k2.M * k1.Sigma * k2.M.transpose() + k2.Sigma)};
}

double kernel_distance(const AffineGaussianKernel& a, const AffineGaussianKernel& b) {
    if (a.dim() != b.dim()) throw DimensionError("kernel_distance: dimension mismatch");
    return std::max({(a.M - b.M).cwiseAbs().maxCoeff(), (a.c - b.c).cwiseAbs().maxCoeff(),
                     (a.Sigma - b.Sigma).cwiseAbs().maxCoeff()});
}

void OUModel::validate() const {
    int d = dim();
    require(d >= 1, "OU model: dimension must be positive");
    check_square(B, d, "OU drift");
    check_square(Gamma, d, "OU diffusion");
    require((Gamma - Gamma.transpose()).cwiseAbs().maxCoeff() <= 1e-12 * std::max(1.0, Gamma.cwiseAbs().maxCoeff()),
            "OU diffusion matrix must be symmetric");
    require(min_eigenvalue(Gamma) >= -1e-12, "OU diffusion matrix must be positive semidefinite");
    check_stable(B);
}

MatrixXd gamma_infinity(const MatrixXd& B, const MatrixXd& Gamma) {
    OUModel{B, Gamma}.validate();
    const auto d = B.rows();
    // vec(B X + X B^T) = (I kron B + B kron I) vec(X)
    MatrixXd K = MatrixXd::Zero(d * d, d * d);
    for (Eigen::Index i = 0; i < d; ++i)
        for (Eigen::Index j = 0; j < d; ++j) {
            K.block(j * d, j * d, d, d) += (i == j ? 1.0 : 0.0) * B;
            K.block(i * d, j * d, d, d) += B(i, j) * MatrixXd::Identity(d, d);
        }
    VectorXd rhs = Eigen::Map<const VectorXd>(Gamma.data(), d * d);
    VectorXd x = K.partialPivLu().solve(rhs);
    return symmetrize(Eigen::Map<MatrixXd>(x.data(), d, d));
}

MatrixXd gamma_t_closed_form(const OUModel& model, double t) {
    require(t >= 0, "t must be nonnegative");
    MatrixXd ginf = gamma_infinity(model.B, model.Gamma);
    MatrixXd E = (-t * model.B).exp();
    return symmetrize(ginf - E * ginf * E.transpose());
}

AffineGaussianKernel ou_kernel(const OUModel& model, double t) {
    model.validate();
    require(t >= 0 && std::isfinite(t), "ou_kernel: t must be nonnegative");
    const int d = model.dim();
    AffineGaussianKernel k{(-t * model.B).exp(), VectorXd::Zero(d), MatrixXd::Zero(d, d)};
    if (t == 0) return k;
    using State = std::vector<double>;
    State y(static_cast<std::size_t>(d * d), 0.0);
    const MatrixXd& B = model.B;
    const MatrixXd& G = model.Gamma;
    auto rhs = [&](const State& s, State& ds, double) {
        Eigen::Map<const MatrixXd> S(s.data(), d, d);
        Eigen::Map<MatrixXd> dS(ds.data(), d, d);
        dS = G - B * S - S * B.transpose();
    };
    namespace odeint = boost::numeric::odeint;
    auto stepper = odeint::make_controlled(1e-14, 1e-12, odeint::runge_kutta_dopri5<State>());
    odeint::integrate_adaptive(stepper, rhs, y, 0.0, t, std::min(t, 1e-3));
    k.Sigma = symmetrize(Eigen::Map<MatrixXd>(y.data(), d, d));
    return k;
}

HypoellipticityReport check_hypoellipticity(const OUModel& model) {
    model.validate();
    const int d = model.dim();
    HypoellipticityReport r;
    r.min_det = INFINITY;
    for (double t : {1e-3, 1e-2, 1e-1, 1.0}) r.min_det = std::min(r.min_det, ou_kernel(model, t).Sigma.determinant());
    MatrixXd root = psd_sqrt(model.Gamma);
    MatrixXd K(d, d * d);
    MatrixXd block = root;
    for (int k = 0; k < d; ++k) {
        K.block(0, k * d, d, d) = block;
        block = model.B * block;
    }
    Eigen::FullPivLU<MatrixXd> lu(K);
    lu.setThreshold(1e-10);
    r.kalman_rank = static_cast<int>(lu.rank());
    r.ok = r.min_det > 1e-14 && r.kalman_rank == d;
    return r;
}

DiagonalTransfer diagonal_transfer_setup(const MatrixXd& B, const MatrixXd& Gamma) {
    OUModel model{B, Gamma};
    model.validate();
    if (!check_hypoellipticity(model).ok) throw DomainError("diagonal_transfer_setup: model is not hypoelliptic");
    const int d = model.dim();
    Eigen::EigenSolver<MatrixXd> es(B);
    double scale = std::max(1.0, B.cwiseAbs().maxCoeff());
    if (es.eigenvalues().imag().cwiseAbs().maxCoeff() > 1e-10 * scale)
        throw DomainError("diagonal_transfer_setup: drift has complex eigenvalues");
    VectorXd vals = es.eigenvalues().real();
    MatrixXd vecs = es.eigenvectors().real();
    std::vector<int> order(d);
    for (int i = 0; i < d; ++i) order[i] = i;
    std::sort(order.begin(), order.end(), [&](int i, int j) { return vals(i) < vals(j); });
    DiagonalTransfer out;
    out.b.resize(d);
    MatrixXd R(d, d);
    for (int i = 0; i < d; ++i) {
        out.b(i) = vals(order[i]);
        R.col(i) = vecs.col(order[i]);
    }
    Eigen::JacobiSVD<MatrixXd> svd(R);
    double cond = svd.singularValues()(0) / svd.singularValues()(d - 1);
    if (!(cond < 1e10)) throw DomainError("diagonal_transfer_setup: drift is not diagonalizable within tolerance");
    out.V = R.inverse();
    for (int i = 0; i < d; ++i) out.V.row(i) /= out.V.row(i).norm();

    MatrixXd ginf = gamma_infinity(B, Gamma);
    out.G = symmetrize(out.V * ginf * out.V.transpose());
    VectorXd gam = Eigen::SelfAdjointEigenSolver<MatrixXd>(out.G, Eigen::EigenvaluesOnly).eigenvalues();
    double gmin = gam(0), gmax = gam(d - 1);
    out.kappa = gmax / gmin;
    double bmin = out.b(0);
    out.warmup = std::log(out.kappa) / bmin;
    out.alpha.resize(d);
    for (int i = 0; i < d; ++i) out.alpha(i) = gmin * std::exp(out.b(i) / bmin * std::log(out.kappa));
    MatrixXd Dalpha = out.alpha.asDiagonal();
    out.lambda = {out.V, VectorXd::Zero(d), symmetrize(Dalpha - out.G)};
    out.diagonal = {out.b.asDiagonal(), 2.0 * out.b.asDiagonal() * Dalpha};
    return out;
}

RightFactor solve_right_factor(const AffineGaussianKernel& target, const AffineGaussianKernel& left) {
    if (target.dim() != left.dim()) throw DimensionError("solve_right_factor: dimension mismatch");
    Eigen::FullPivLU<MatrixXd> lu(left.M);
    if (!lu.isInvertible()) throw DomainError("solve_right_factor: left factor is not invertible");
    RightFactor out;
    MatrixXd M = target.M * lu.inverse();
    out.kernel = {M, target.c - M * left.c, symmetrize(target.Sigma - M * left.Sigma * M.transpose())};
    out.min_eigenvalue = min_eigenvalue(out.kernel.Sigma);
    if (out.min_eigenvalue < -1e-9)
        throw InfeasibleError("solve_right_factor: recovered covariance is not positive semidefinite (min eigenvalue " +
                              std::to_string(out.min_eigenvalue) + ")");
    return out;
}

double minimal_feasible_warmup(const OUModel& model, const AffineGaussianKernel& lambda, double t_hi, double tol) {
    auto feasible = [&](double t) {
        try {
            solve_right_factor(ou_kernel(model, t), lambda);
            return true;
        } catch (const InfeasibleError&) {
            return false;
        }
    };
    require(t_hi > 0, "minimal_feasible_warmup: upper bracket must be positive");
    int expansions = 0;
    while (!feasible(t_hi)) {
        t_hi *= 2;
        if (++expansions > 40) throw InfeasibleError("minimal_feasible_warmup: no feasible warm-up found");
    }
    if (feasible(0.0)) return 0.0;
    double lo = 0, hi = t_hi;
    while (hi - lo > tol) {
        double mid = 0.5 * (lo + hi);
        (feasible(mid) ? hi : lo) = mid;
    }
    return hi;
}

double variance_ratio(const OUModel& model, double t, const MatrixXd& A, const VectorXd& a) {
    MatrixXd S = gamma_infinity(model.B, model.Gamma);
    MatrixXd M = (-t * model.B).exp();
    MatrixXd As = symmetrize(A);
    auto var = [&](const MatrixXd& Q, const VectorXd& v) {
        return v.dot(S * v) + 2.0 * (Q * S * Q * S).trace();
    };
    double before = var(As, a);
    require(before > 0, "variance_ratio: test function is constant");
    return var(symmetrize(M.transpose() * As * M), M.transpose() * a) / before;
}

namespace {

struct TvSetup {
    int d;
    std::vector<double> A;  // L_q^{-1} L_p, row-major
    std::vector<double> b;  // L_q^{-1}(mu_p - mu_q)
    double log_ratio_const;  // log det L_p - log det L_q
};

TvSetup prepare_tv(const Gaussian& p, const Gaussian& q) {
    const auto d = p.mean.size();
    if (q.mean.size() != d || p.cov.rows() != d || q.cov.rows() != d || p.cov.cols() != d || q.cov.cols() != d)
        throw DimensionError("tv_gaussian_mc: dimension mismatch");
    Eigen::LLT<MatrixXd> lp(symmetrize(p.cov)), lq(symmetrize(q.cov));
    if (lp.info() != Eigen::Success || lq.info() != Eigen::Success)
        throw DomainError("tv_gaussian_mc: covariance is singular or not positive definite");
    MatrixXd Lp = lp.matrixL(), Lq = lq.matrixL();
    for (Eigen::Index i = 0; i < d; ++i)
        if (!(Lp(i, i) > 0) || !(Lq(i, i) > 0)) throw DomainError("tv_gaussian_mc: singular covariance");
    MatrixXd A = Lq.triangularView<Eigen::Lower>().solve(Lp);
    VectorXd b = Lq.triangularView<Eigen::Lower>().solve(p.mean - q.mean);
    TvSetup s;
    s.d = static_cast<int>(d);
    s.A.resize(static_cast<std::size_t>(d * d));
    for (Eigen::Index i = 0; i < d; ++i)
        for (Eigen::Index j = 0; j < d; ++j) s.A[static_cast<std::size_t>(i * d + j)] = A(i, j);
    s.b.assign(b.data(), b.data() + d);
    s.log_ratio_const = Lp.diagonal().array().log().sum() - Lq.diagonal().array().log().sum();
    return s;
}

}  // namespace

Estimate tv_product_gaussian_mc(const Gaussian& p, const Gaussian& q, int copies, std::size_t nsamples,
                                Stream& rng) {
    require(copies >= 1, "tv_product_gaussian_mc: copies must be positive");
    require(nsamples >= 2, "tv_product_gaussian_mc: need at least two samples");
    const TvSetup s = prepare_tv(p, q);
    const int d = s.d;
    constexpr std::size_t kChunks = 64;
    std::vector<double> sums(kChunks, 0.0), squares(kChunks, 0.0);
    const Stream base = rng.split(0x7476);
    parallel_for(kChunks, [&](std::size_t c) {
        Stream local = base.split(c);
        std::size_t begin = nsamples * c / kChunks, end = nsamples * (c + 1) / kChunks;
        std::vector<double> z(static_cast<std::size_t>(d));
        double sum = 0, sq = 0;
        for (std::size_t k = begin; k < end; ++k) {
            // log q(x) - log p(x) summed over the independent blocks
            double lr = copies * s.log_ratio_const;
            for (int blk = 0; blk < copies; ++blk) {
                double zz = 0, ww = 0;
                for (int i = 0; i < d; ++i) {
                    z[i] = local.normal();
                    zz += z[i] * z[i];
                }
                for (int i = 0; i < d; ++i) {
                    double w = s.b[i];
                    for (int j = 0; j <= i; ++j) w += s.A[i * d + j] * z[j];
                    ww += w * w;
                }
                lr += 0.5 * (zz - ww);
            }
            double v = lr >= 0 ? 0.0 : -std::expm1(lr);
            sum += v;
            sq += v * v;
        }
        sums[c] = sum;
        squares[c] = sq;
    });
    double sum = 0, sq = 0;
    for (std::size_t c = 0; c < kChunks; ++c) {
        sum += sums[c];
        sq += squares[c];
    }
    double n = static_cast<double>(nsamples);
    double m = sum / n;
    double var = std::max(0.0, (sq - n * m * m) / (n - 1));
    return {m, std::sqrt(var / n)};
}

Estimate tv_gaussian_mc(const Gaussian& p, const Gaussian& q, std::size_t nsamples, Stream& rng) {
    return tv_product_gaussian_mc(p, q, 1, nsamples, rng);
}

}  // namespace interweave
