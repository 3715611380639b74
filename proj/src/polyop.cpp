#include "interweave/polyop.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>
#include <sstream>

#include <unsupported/Eigen/MatrixFunctions>

#include "interweave/errors.hpp"
#include "interweave/special.hpp"

namespace interweave {

using Eigen::MatrixXd;
using Eigen::VectorXd;

double BernsteinSpec::operator()(double u) const {
    double v = u + m;
    for (const auto& a : atoms) v += a.weight * std::expm1(-u * a.location);
    return v;
}

double BernsteinSpec::derivative(double u) const {
    double v = 1.0;
    for (const auto& a : atoms) v -= a.weight * a.location * std::exp(-u * a.location);
    return v;
}

double BernsteinSpec::pibar() const {
    double s = 0;
    for (const auto& a : atoms) s += a.weight * a.location;
    return s;
}

double BernsteinSpec::log_w_product(int n) const {
    double s = 0;
    for (int k = 1; k <= n; ++k) s += std::log((*this)(k));
    return s;
}

void BernsteinSpec::validate(int degree) const {
    require(m >= 0 && std::isfinite(m), "Bernstein: m must be nonnegative");
    for (const auto& a : atoms) {
        require(a.location > 0 && std::isfinite(a.location), "Bernstein: atom locations must be positive");
        require(a.weight >= 0 && std::isfinite(a.weight), "Bernstein: atom weights must be nonnegative");
    }
    require(pibar() <= 1.0, "Bernstein: first moment of the jump measure must not exceed 1");
    for (int k = 1; k <= std::max(degree, 1); ++k)
        require((*this)(k) > 0, "Bernstein: phi(k) must be positive for k >= 1");
}

namespace {

std::string fmt(double x) {
    std::ostringstream os;
    os << x;
    return os.str();
}

MatrixXd zeros(int degree) { return MatrixXd::Zero(degree + 1, degree + 1); }

// x^k = sum_j S2(k, j) (x)_j, stored as [j][k].
MatrixXd monomial_to_falling(int degree) {
    MatrixXd s = zeros(degree);
    s(0, 0) = 1;
    for (int k = 1; k <= degree; ++k)
        for (int j = 1; j <= k; ++j) s(j, k) = j * s(j, k - 1) + s(j - 1, k - 1);
    return s;
}

// (x)_k = sum_j s(k, j) x^j, stored as [j][k].
MatrixXd falling_to_monomial(int degree) {
    MatrixXd s = zeros(degree);
    s(0, 0) = 1;
    for (int k = 1; k <= degree; ++k)
        for (int j = 0; j <= k; ++j)
            s(j, k) = (j > 0 ? s(j - 1, k - 1) : 0.0) - (k - 1) * s(j, k - 1);
    return s;
}

MatrixXd change_of_basis(Basis from, Basis to, int degree) {
    if (from == to) return MatrixXd::Identity(degree + 1, degree + 1);
    return from == Basis::Monomial ? monomial_to_falling(degree) : falling_to_monomial(degree);
}

void check_positive(double v, const char* what) {
    require(v > 0 && std::isfinite(v), std::string(what) + " must be positive, got " + fmt(v));
}

MatrixXd expm_nilpotent(const MatrixXd& T) {
    const auto n = T.rows();
    MatrixXd term = MatrixXd::Identity(n, n);
    MatrixXd sum = term;
    for (Eigen::Index k = 1; k < n; ++k) {
        term = term * T / static_cast<double>(k);
        sum += term;
    }
    return sum;
}

// Parlett recurrence for an upper-triangular matrix with distinct diagonal.
MatrixXd expm_parlett(const MatrixXd& T) {
    const auto n = T.rows();
    MatrixXd F = MatrixXd::Zero(n, n);
    for (Eigen::Index i = 0; i < n; ++i) F(i, i) = std::exp(T(i, i));
    for (Eigen::Index p = 1; p < n; ++p) {
        for (Eigen::Index i = 0; i + p < n; ++i) {
            Eigen::Index j = i + p;
            double s = T(i, j) * (F(i, i) - F(j, j));
            for (Eigen::Index k = i + 1; k < j; ++k) s += T(i, k) * F(k, j) - F(i, k) * T(k, j);
            F(i, j) = s / (T(i, i) - T(j, j));
        }
    }
    return F;
}

// Off-diagonal entries nonnegative: exp(T) is entrywise nonnegative and can be
// built from a shifted Taylor series plus squaring without cancellation.
bool is_metzler(const MatrixXd& T) {
    for (Eigen::Index i = 0; i < T.rows(); ++i)
        for (Eigen::Index j = 0; j < T.cols(); ++j)
            if (i != j && T(i, j) < 0) return false;
    return true;
}

MatrixXd expm_metzler(const MatrixXd& T) {
    const auto n = T.rows();
    double shift = std::max(0.0, -T.diagonal().minCoeff());
    MatrixXd A = T + shift * MatrixXd::Identity(n, n);
    double norm = A.cwiseAbs().rowwise().sum().maxCoeff();
    int squarings = norm > 0.5 ? static_cast<int>(std::ceil(std::log2(norm / 0.5))) : 0;
    double factor = std::ldexp(1.0, -squarings);
    A *= factor;
    MatrixXd term = MatrixXd::Identity(n, n);
    MatrixXd sum = term;
    for (int k = 1; k < 60; ++k) {
        term = term * A / static_cast<double>(k);
        sum += term;
        if (term.maxCoeff() <= 1e-18 * sum.maxCoeff()) break;
    }
    sum *= std::exp(-shift * factor);
    for (int i = 0; i < squarings; ++i) sum = sum * sum;
    return sum;
}

bool distinct_diagonal(const MatrixXd& T) {
    double scale = 1.0 + T.diagonal().cwiseAbs().maxCoeff();
    for (Eigen::Index i = 0; i < T.rows(); ++i)
        for (Eigen::Index j = i + 1; j < T.rows(); ++j)
            if (std::abs(T(i, i) - T(j, j)) < 1e-8 * scale) return false;
    return true;
}

void check_same_shape(const PolyOp& a, const PolyOp& b, const char* what) {
    if (a.matrix.rows() != b.matrix.rows() || a.matrix.cols() != b.matrix.cols())
        throw DimensionError(std::string(what) + ": operator degrees differ");
}

PolyOp aligned(const PolyOp& op, const PolyOp& like) {
    if (op.dom.space != like.dom.space || op.cod.space != like.cod.space)
        throw DimensionError("operators act between different state spaces");
    return with_bases(op, like.dom.basis, like.cod.basis);
}

}  // namespace

std::string describe(const GeneratorSpec& spec) {
    return std::visit(
        [](const auto& g) -> std::string {
            using T = std::decay_t<decltype(g)>;
            if constexpr (std::is_same_v<T, gen::TwoPoint>)
                return "two-point(lambda=" + fmt(g.lambda) + ", mu0=" + fmt(g.mu0) + ")";
            else if constexpr (std::is_same_v<T, gen::BesselDiffusion>)
                return "bessel-diffusion(beta=" + fmt(g.beta) + ")";
            else if constexpr (std::is_same_v<T, gen::BesselBirthDeath>)
                return "bessel-birth-death(beta=" + fmt(g.beta) + ", rate=" + fmt(g.rate) + ")";
            else if constexpr (std::is_same_v<T, gen::LaguerreDiffusion>)
                return "laguerre-diffusion(beta=" + fmt(g.beta) + ", scale=" + fmt(g.scale) + ")";
            else if constexpr (std::is_same_v<T, gen::LaguerreBirthDeath>)
                return "laguerre-birth-death(beta=" + fmt(g.beta) + ", sigma=" + fmt(g.sigma) + ")";
            else if constexpr (std::is_same_v<T, gen::Jacobi>)
                return "jacobi(lambda1=" + fmt(g.lambda1) + ", beta=" + fmt(g.beta) + ")";
            else
                return "generalized-laguerre(m=" + fmt(g.phi.m) + ", atoms=" +
                       std::to_string(g.phi.atoms.size()) + ")";
        },
        spec);
}

std::string describe(const KernelSpec& spec) {
    return std::visit(
        [](const auto& k) -> std::string {
            using T = std::decay_t<decltype(k)>;
            if constexpr (std::is_same_v<T, kern::Poisson>) return "poisson(sigma=" + fmt(k.sigma) + ")";
            else if constexpr (std::is_same_v<T, kern::GammaMix>)
                return "gamma(beta=" + fmt(k.beta) + ", sigma=" + fmt(k.sigma) + ")";
            else if constexpr (std::is_same_v<T, kern::BetaMult>)
                return "beta-mult(beta=" + fmt(k.beta) + ", eps=" + fmt(k.eps) + ")";
            else if constexpr (std::is_same_v<T, kern::BStar>) return "bstar(beta=" + fmt(k.beta) + ")";
            else if constexpr (std::is_same_v<T, kern::TwoPoint>) return "two-point";
            else if constexpr (std::is_same_v<T, kern::Dilation>) return "dilation(" + fmt(k.scale) + ")";
            else if constexpr (std::is_same_v<T, kern::IPhi>) return "i-phi";
            else return "v-beta(beta=" + fmt(k.beta) + ")";
        },
        spec);
}

PolyOp identity_polyop(int degree, Side side) {
    require(degree >= 0, "degree must be nonnegative");
    return {MatrixXd::Identity(degree + 1, degree + 1), side, side};
}

PolyOp generator_polyop(const GeneratorSpec& spec, int N) {
    require(N >= 1, "generator_polyop: degree must be at least 1");
    MatrixXd g = zeros(N);
    Side side = kContinuous;
    std::visit(
        [&](const auto& s) {
            using T = std::decay_t<decltype(s)>;
            if constexpr (std::is_same_v<T, gen::TwoPoint>) {
                check_positive(s.lambda, "lambda");
                require(s.mu0 > 0 && s.mu0 < 1, "two-point: mu0 must lie in (0,1)");
                require(N == 1, "two-point space carries polynomials of degree <= 1 only");
                side = kLatticeMonomial;
                g(0, 1) = s.lambda * (1 - s.mu0);
                g(1, 1) = -s.lambda;
            } else if constexpr (std::is_same_v<T, gen::BesselDiffusion>) {
                check_positive(s.beta, "beta");
                for (int n = 1; n <= N; ++n) g(n - 1, n) = n * (n + s.beta - 1);
            } else if constexpr (std::is_same_v<T, gen::BesselBirthDeath>) {
                check_positive(s.beta, "beta");
                check_positive(s.rate, "rate");
                side = kLatticeFalling;
                for (int k = 1; k <= N; ++k) g(k - 1, k) = s.rate * k * (k - 1 + s.beta);
            } else if constexpr (std::is_same_v<T, gen::LaguerreDiffusion>) {
                check_positive(s.beta, "beta");
                check_positive(s.scale, "scale");
                for (int n = 1; n <= N; ++n) {
                    g(n - 1, n) = s.scale * n * (n - 1 + s.beta);
                    g(n, n) = -n;
                }
            } else if constexpr (std::is_same_v<T, gen::LaguerreBirthDeath>) {
                check_positive(s.beta, "beta");
                check_positive(s.sigma, "sigma");
                side = kLatticeFalling;
                for (int k = 1; k <= N; ++k) {
                    g(k - 1, k) = s.sigma * k * (k - 1 + s.beta);
                    g(k, k) = -k;
                }
            } else if constexpr (std::is_same_v<T, gen::Jacobi>) {
                require(s.beta > 1 && s.lambda1 >= 2 * s.beta,
                        "jacobi: need lambda1 >= 2 beta > 2, got lambda1=" + fmt(s.lambda1) +
                            ", beta=" + fmt(s.beta));
                for (int n = 1; n <= N; ++n) {
                    g(n - 1, n) = n * (n - 1 + s.lambda1 - s.beta);
                    g(n, n) = -(n * (n - 1.0) + s.lambda1 * n);
                }
            } else {
                s.phi.validate(N);
                for (int n = 1; n <= N; ++n) {
                    g(n - 1, n) = n * s.phi(n);
                    g(n, n) = -n;
                }
            }
        },
        spec);
    return {g, side, side};
}

PolyOp semigroup_polyop(const PolyOp& gen, double t) {
    require(t >= 0 && std::isfinite(t), "semigroup_polyop: t must be nonnegative");
    if (!(gen.dom == gen.cod)) throw DimensionError("semigroup_polyop: generator must be an endomorphism");
    if (!is_upper_triangular(gen)) throw DomainError("semigroup_polyop: generator must be upper triangular");
    const int N = gen.degree();
    PolyOp out{MatrixXd::Identity(N + 1, N + 1), gen.dom, gen.cod};
    if (t == 0) return out;
    MatrixXd T = t * gen.matrix;
    if (T.diagonal().cwiseAbs().maxCoeff() == 0)
        out.matrix = expm_nilpotent(T);
    else if (is_metzler(T))
        out.matrix = expm_metzler(T);
    else if (distinct_diagonal(T))
        out.matrix = expm_parlett(T);
    else
        out.matrix = T.exp();
    return out;
}

PolyOp kernel_polyop(const KernelSpec& spec, int N) {
    require(N >= 0, "kernel_polyop: degree must be nonnegative");
    PolyOp op{zeros(N), kContinuous, kContinuous};
    auto& k = op.matrix;
    std::visit(
        [&](const auto& s) {
            using T = std::decay_t<decltype(s)>;
            if constexpr (std::is_same_v<T, kern::Poisson>) {
                check_positive(s.sigma, "sigma");
                op.dom = kLatticeFalling;
                for (int n = 0; n <= N; ++n) k(n, n) = std::pow(s.sigma, n);
            } else if constexpr (std::is_same_v<T, kern::GammaMix>) {
                check_positive(s.beta, "beta");
                check_positive(s.sigma, "sigma");
                op.cod = kLatticeFalling;
                // (n + beta)(n + beta + 1)...(n + beta + k - 1) has forward differences
                // (k)_j (beta + j)_{k-j} at 0, so its falling-factorial coefficients are
                // binom(k, j) times a rising factorial.
                for (int kk = 0; kk <= N; ++kk)
                    for (int j = 0; j <= kk; ++j)
                        k(j, kk) = std::exp(log_gamma(kk + 1.0) - log_gamma(j + 1.0) - log_gamma(kk - j + 1.0) +
                                            log_rising(s.beta + j, kk - j) - kk * std::log(s.sigma));
            } else if constexpr (std::is_same_v<T, kern::BetaMult>) {
                check_positive(s.beta, "beta");
                check_positive(s.eps, "eps");
                for (int n = 0; n <= N; ++n)
                    k(n, n) = std::exp(log_gamma(s.beta + s.eps) + log_gamma(n + s.eps) - log_gamma(s.eps) -
                                       log_gamma(n + s.beta + s.eps));
            } else if constexpr (std::is_same_v<T, kern::BStar>) {
                check_positive(s.beta, "beta");
                for (int n = 0; n <= N; ++n)
                    for (int m = 0; m <= n; ++m)
                        k(n - m, n) = std::exp(log_gamma(n + 1.0) - log_gamma(m + 1.0) - log_gamma(n - m + 1.0) +
                                               log_rising(s.beta, m));
            } else if constexpr (std::is_same_v<T, kern::TwoPoint>) {
                require(N == 1, "two-point kernel acts on polynomials of degree <= 1 only");
                for (int i = 0; i < 2; ++i) {
                    require(std::abs(s.k(i, 0) + s.k(i, 1) - 1) <= 1e-12, "two-point kernel rows must sum to 1");
                    for (int j = 0; j < 2; ++j)
                        require(s.k(i, j) >= -1e-12 && s.k(i, j) <= 1 + 1e-12,
                                "two-point kernel entries must lie in [0,1]");
                }
                op.dom = op.cod = kLatticeMonomial;
                k(0, 0) = 1;
                k(0, 1) = s.k(0, 1);
                k(1, 1) = s.k(1, 1) - s.k(0, 1);
            } else if constexpr (std::is_same_v<T, kern::Dilation>) {
                check_positive(s.scale, "scale");
                for (int n = 0; n <= N; ++n) k(n, n) = std::pow(s.scale, n);
            } else if constexpr (std::is_same_v<T, kern::IPhi>) {
                s.phi.validate(N);
                for (int n = 0; n <= N; ++n) k(n, n) = std::exp(log_gamma(n + 1.0) - s.phi.log_w_product(n));
            } else {
                s.phi.validate(N);
                require(s.beta > s.phi.pibar() + s.phi.m,
                        "v-beta: need beta > pibar + m, got beta=" + fmt(s.beta));
                for (int n = 0; n <= N; ++n)
                    k(n, n) = std::exp(log_gamma(1 + s.beta) + s.phi.log_w_product(n) - log_gamma(n + 1 + s.beta));
            }
        },
        spec);
    return op;
}

Eigen::VectorXd convert_coefficients(const Eigen::VectorXd& coeffs, Basis from, Basis to) {
    require(coeffs.size() >= 1, "convert_coefficients: empty vector");
    return change_of_basis(from, to, static_cast<int>(coeffs.size()) - 1) * coeffs;
}

PolyOp with_bases(const PolyOp& op, Basis dom, Basis cod) {
    if (op.dom.space == Space::Continuous && dom != Basis::Monomial)
        throw DomainError("falling-factorial basis requested on a continuous-state side");
    if (op.cod.space == Space::Continuous && cod != Basis::Monomial)
        throw DomainError("falling-factorial basis requested on a continuous-state side");
    const int N = op.degree();
    PolyOp out = op;
    out.matrix = change_of_basis(op.cod.basis, cod, N) * op.matrix * change_of_basis(dom, op.dom.basis, N);
    out.dom.basis = dom;
    out.cod.basis = cod;
    return out;
}

PolyOp convert_basis(const PolyOp& op, Basis target) {
    bool dom_lattice = op.dom.space == Space::Lattice;
    bool cod_lattice = op.cod.space == Space::Lattice;
    if (!dom_lattice && !cod_lattice)
        throw DomainError("convert_basis: operator acts only on continuous-state functions");
    return with_bases(op, dom_lattice ? target : op.dom.basis, cod_lattice ? target : op.cod.basis);
}

PolyOp operator*(const PolyOp& a, const PolyOp& b) {
    if (a.matrix.cols() != b.matrix.rows()) throw DimensionError("operator product: degrees differ");
    if (a.dom.space != b.cod.space) throw DimensionError("operator product: state spaces do not match");
    PolyOp bb = with_bases(b, b.dom.basis, a.dom.basis);
    return {a.matrix * bb.matrix, bb.dom, a.cod};
}

Residual compare(const PolyOp& x, const PolyOp& y) {
    check_same_shape(x, y, "compare");
    PolyOp ya = aligned(y, x);
    Residual r;
    for (Eigen::Index i = 0; i < x.matrix.rows(); ++i)
        for (Eigen::Index j = 0; j < x.matrix.cols(); ++j) {
            double a = x.matrix(i, j), b = ya.matrix(i, j);
            double d = std::abs(a - b);
            r.absolute = std::max(r.absolute, d);
            r.scaled = std::max(r.scaled, d / std::max({1.0, std::abs(a), std::abs(b)}));
        }
    return r;
}

Residual check_intertwining(const PolyOp& P, const PolyOp& lambda, const PolyOp& P_tilde) {
    return compare(P * lambda, lambda * P_tilde);
}

Residual check_interweaving(const PolyOp& lambda, const PolyOp& lambda_tilde, const PolyOp& P_warm) {
    return compare(lambda * lambda_tilde, P_warm);
}

Eigen::MatrixXd eigenpolynomials(const PolyOp& gen) {
    if (!is_upper_triangular(gen)) throw DomainError("eigenpolynomials: generator must be upper triangular");
    const MatrixXd& G = gen.matrix;
    const auto n = G.rows();
    double scale = 1.0 + G.diagonal().cwiseAbs().maxCoeff();
    MatrixXd E = MatrixXd::Identity(n, n);
    for (Eigen::Index k = 0; k < n; ++k) {
        for (Eigen::Index i = k - 1; i >= 0; --i) {
            double gap = G(k, k) - G(i, i);
            if (std::abs(gap) < 1e-10 * scale)
                throw DegeneracyError("eigenpolynomials: repeated eigenvalue at degrees " + std::to_string(i) +
                                      " and " + std::to_string(k));
            double s = 0;
            for (Eigen::Index j = i + 1; j <= k; ++j) s += G(i, j) * E(j, k);
            E(i, k) = s / gap;
        }
    }
    return E;
}

namespace {

MatrixXd in_eigenbases(const PolyOp& op, const PolyOp& dom_gen, const PolyOp& cod_gen) {
    check_same_shape(op, dom_gen, "eigen_multipliers");
    check_same_shape(op, cod_gen, "eigen_multipliers");
    if (dom_gen.dom.space != op.dom.space || cod_gen.dom.space != op.cod.space)
        throw DimensionError("eigen_multipliers: generator state spaces do not match the operator");
    PolyOp gd = with_bases(dom_gen, op.dom.basis, op.dom.basis);
    PolyOp gc = with_bases(cod_gen, op.cod.basis, op.cod.basis);
    MatrixXd Ed = eigenpolynomials(gd);
    MatrixXd Ec = eigenpolynomials(gc);
    return Ec.triangularView<Eigen::Upper>().solve(op.matrix * Ed);
}

}  // namespace

std::vector<double> eigen_multipliers(const PolyOp& op, const PolyOp& gen) {
    return eigen_multipliers(op, gen, gen);
}

std::vector<double> eigen_multipliers(const PolyOp& op, const PolyOp& dom_gen, const PolyOp& cod_gen) {
    VectorXd d = in_eigenbases(op, dom_gen, cod_gen).diagonal();
    return std::vector<double>(d.data(), d.data() + d.size());
}

double eigenbasis_offdiagonal(const PolyOp& op, const PolyOp& dom_gen, const PolyOp& cod_gen) {
    check_same_shape(op, dom_gen, "eigenbasis_offdiagonal");
    check_same_shape(op, cod_gen, "eigenbasis_offdiagonal");
    PolyOp gd = with_bases(dom_gen, op.dom.basis, op.dom.basis);
    PolyOp gc = with_bases(cod_gen, op.cod.basis, op.cod.basis);
    MatrixXd Ed = eigenpolynomials(gd);
    MatrixXd EcInv = eigenpolynomials(gc).triangularView<Eigen::Upper>().solve(
        MatrixXd::Identity(op.matrix.rows(), op.matrix.cols()));
    MatrixXd D = EcInv * op.matrix * Ed;
    MatrixXd scale = EcInv.cwiseAbs() * op.matrix.cwiseAbs() * Ed.cwiseAbs();
    double worst = 0;
    for (Eigen::Index i = 0; i < D.rows(); ++i)
        for (Eigen::Index j = 0; j < D.cols(); ++j)
            if (i != j && scale(i, j) > 0) worst = std::max(worst, std::abs(D(i, j)) / scale(i, j));
    return worst;
}

PolyOp spectral_function(const PolyOp& gen, const std::function<double(double)>& f) {
    if (!(gen.dom == gen.cod)) throw DimensionError("spectral_function: generator must be an endomorphism");
    eigenpolynomials(gen);  // triangularity and distinct eigenvalues
    // Parlett recurrence on the triangular matrix of -gen; avoids the badly
    // conditioned eigenpolynomial basis.
    const MatrixXd T = -gen.matrix;
    const Eigen::Index n = T.rows();
    MatrixXd F = MatrixXd::Zero(n, n);
    for (Eigen::Index i = 0; i < n; ++i) F(i, i) = f(T(i, i));
    for (Eigen::Index p = 1; p < n; ++p)
        for (Eigen::Index i = 0; i + p < n; ++i) {
            const Eigen::Index j = i + p;
            double s = T(i, j) * (F(i, i) - F(j, j));
            for (Eigen::Index k = i + 1; k < j; ++k) s += F(i, k) * T(k, j) - T(i, k) * F(k, j);
            F(i, j) = s / (T(i, i) - T(j, j));
        }
    return {F, gen.dom, gen.cod};
}

PolyOp similarity_transform(const PolyOp& P, const PolyOp& M) {
    check_same_shape(P, M, "similarity_transform");
    if (!(P.dom == P.cod)) throw DimensionError("similarity_transform: P must be an endomorphism");
    if (!is_upper_triangular(M)) throw DomainError("similarity_transform: M must be upper triangular");
    double scale = M.matrix.cwiseAbs().maxCoeff();
    for (Eigen::Index i = 0; i < M.matrix.rows(); ++i)
        if (std::abs(M.matrix(i, i)) <= 1e-14 * scale) throw DomainError("similarity_transform: M is singular");
    PolyOp Ma = with_bases(M, P.cod.basis, M.cod.basis);
    if (Ma.dom.space != P.cod.space) throw DimensionError("similarity_transform: state spaces do not match");
    MatrixXd MP = Ma.matrix * P.matrix;
    MatrixXd out = Ma.matrix.triangularView<Eigen::Upper>().solve<Eigen::OnTheRight>(MP);
    return {out, Ma.cod, Ma.cod};
}

bool is_upper_triangular(const PolyOp& op, double tol) {
    const MatrixXd& m = op.matrix;
    if (m.rows() != m.cols()) return false;
    for (Eigen::Index j = 0; j < m.cols(); ++j)
        for (Eigen::Index i = j + 1; i < m.rows(); ++i)
            if (std::abs(m(i, j)) > tol) return false;
    return true;
}

void write_csv(std::ostream& os, const PolyOp& op) {
    auto tag = [](const Side& s) {
        return std::string(s.space == Space::Continuous ? "continuous" : "lattice") + ":" +
               (s.basis == Basis::Monomial ? "monomial" : "falling");
    };
    os << "# dom=" << tag(op.dom) << " cod=" << tag(op.cod) << " degree=" << op.degree() << "\n";
    for (Eigen::Index j = 0; j < op.matrix.cols(); ++j) os << (j ? "," : "") << "c" << j;
    os << "\n";
    os.precision(17);
    for (Eigen::Index i = 0; i < op.matrix.rows(); ++i) {
        for (Eigen::Index j = 0; j < op.matrix.cols(); ++j) os << (j ? "," : "") << op.matrix(i, j);
        os << "\n";
    }
}

}  // namespace interweave
