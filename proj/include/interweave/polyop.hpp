#pragma once

#include <functional>
#include <iosfwd>
#include <string>
#include <variant>
#include <vector>

#include <Eigen/Dense>

namespace interweave {

// Functions on the half line (or [0,1]) versus functions on the integers.
enum class Space { Continuous, Lattice };

// Monomials x^n, or falling factorials (n)_k = n(n-1)...(n-k+1) on the lattice.
enum class Basis { Monomial, FallingFactorial };

struct Side {
    Space space = Space::Continuous;
    Basis basis = Basis::Monomial;
    bool operator==(const Side&) const = default;
};

inline constexpr Side kContinuous{Space::Continuous, Basis::Monomial};
inline constexpr Side kLatticeFalling{Space::Lattice, Basis::FallingFactorial};
inline constexpr Side kLatticeMonomial{Space::Lattice, Basis::Monomial};

// Linear map between truncated polynomial spaces. Column n holds the image of
// the n-th input basis element, expanded in the output basis.
struct PolyOp {
    Eigen::MatrixXd matrix;
    Side dom;
    Side cod;

    int degree() const { return static_cast<int>(matrix.rows()) - 1; }
};

// phi(u) = u + m + sum_i w_i (exp(-u y_i) - 1)
struct BernsteinSpec {
    struct Atom {
        double location;
        double weight;
    };
    double m = 0;
    std::vector<Atom> atoms;

    double operator()(double u) const;
    double derivative(double u) const;
    double pibar() const;               // sum of w_i y_i
    double log_w_product(int n) const;  // ln prod_{k=1}^n phi(k)
    void validate(int degree) const;
};

namespace gen {
struct TwoPoint { double lambda; double mu0; };
struct BesselDiffusion { double beta; };
struct BesselBirthDeath { double beta; double rate = 1.0; };
struct LaguerreDiffusion { double beta; double scale = 1.0; };
struct LaguerreBirthDeath { double beta; double sigma; };
struct Jacobi { double lambda1; double beta; };
struct GeneralizedLaguerre { BernsteinSpec phi; };
}  // namespace gen

using GeneratorSpec = std::variant<gen::TwoPoint, gen::BesselDiffusion, gen::BesselBirthDeath,
                                   gen::LaguerreDiffusion, gen::LaguerreBirthDeath, gen::Jacobi,
                                   gen::GeneralizedLaguerre>;

namespace kern {
struct Poisson { double sigma; };                 // R+ -> Z+, Poisson(sigma x)
struct GammaMix { double beta; double sigma; };   // Z+ -> R+, Gamma(n + beta, rate sigma)
struct BetaMult { double beta; double eps; };     // x * Beta(eps, beta)
struct BStar { double beta; };                    // x + Gamma(beta, 1)
struct TwoPoint { Eigen::Matrix2d k; };
struct Dilation { double scale; };                // x -> scale * x
struct IPhi { BernsteinSpec phi; };
struct VBeta { BernsteinSpec phi; double beta; };
}  // namespace kern

using KernelSpec = std::variant<kern::Poisson, kern::GammaMix, kern::BetaMult, kern::BStar,
                                kern::TwoPoint, kern::Dilation, kern::IPhi, kern::VBeta>;

std::string describe(const GeneratorSpec& spec);
std::string describe(const KernelSpec& spec);

PolyOp identity_polyop(int degree, Side side = kContinuous);

PolyOp generator_polyop(const GeneratorSpec& spec, int degree);
PolyOp semigroup_polyop(const PolyOp& gen, double t);
PolyOp kernel_polyop(const KernelSpec& spec, int degree);

// Stirling change of basis on lattice sides. Converting an operator with no
// lattice side is a domain error.
PolyOp convert_basis(const PolyOp& op, Basis target);
PolyOp with_bases(const PolyOp& op, Basis dom, Basis cod);
Eigen::VectorXd convert_coefficients(const Eigen::VectorXd& coeffs, Basis from, Basis to);

// Operator product: apply b, then a. Lattice bases are aligned automatically.
PolyOp operator*(const PolyOp& a, const PolyOp& b);

struct Residual {
    double absolute = 0;  // max |x_ij - y_ij|
    double scaled = 0;    // max |x_ij - y_ij| / max(1, |x_ij|, |y_ij|)
};

Residual compare(const PolyOp& x, const PolyOp& y);
Residual check_intertwining(const PolyOp& P, const PolyOp& lambda, const PolyOp& P_tilde);
Residual check_interweaving(const PolyOp& lambda, const PolyOp& lambda_tilde, const PolyOp& P_warm);

// Unit upper-triangular matrix whose columns are the monic eigenpolynomials of
// a triangular generator.
Eigen::MatrixXd eigenpolynomials(const PolyOp& gen);

std::vector<double> eigen_multipliers(const PolyOp& op, const PolyOp& gen);
std::vector<double> eigen_multipliers(const PolyOp& op, const PolyOp& dom_gen, const PolyOp& cod_gen);

// Largest off-diagonal entry of op in the two eigenbases, relative to the size of
// the products that form it (so roundoff reads as about 1e-16).
double eigenbasis_offdiagonal(const PolyOp& op, const PolyOp& dom_gen, const PolyOp& cod_gen);

// F(-gen) for a triangular generator with distinct eigenvalues: the operator
// acting on the n-th eigenpolynomial by f(-lambda_n).
PolyOp spectral_function(const PolyOp& gen, const std::function<double(double)>& f);

PolyOp similarity_transform(const PolyOp& P, const PolyOp& M);

bool is_upper_triangular(const PolyOp& op, double tol = 0.0);

void write_csv(std::ostream& os, const PolyOp& op);

}  // namespace interweave
