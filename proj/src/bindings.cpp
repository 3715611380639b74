#include <pybind11/eigen.h>
#include <pybind11/functional.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "interweave/config.hpp"
#include "interweave/cutoff.hpp"
#include "interweave/ergodics.hpp"
#include "interweave/errors.hpp"
#include "interweave/gauss.hpp"
#include "interweave/kernels.hpp"
#include "interweave/polyop.hpp"
#include "interweave/runner.hpp"
#include "interweave/semigroups.hpp"
#include "interweave/warmup.hpp"

namespace py = pybind11;
using namespace interweave;

namespace {

BernsteinSpec make_bernstein(double m, const std::vector<std::pair<double, double>>& atoms) {
    BernsteinSpec phi;
    phi.m = m;
    for (auto [y, w] : atoms) phi.atoms.push_back({y, w});
    return phi;
}

std::string run_config(const std::string& text) {
    ParseResult parsed = parse_config(text);
    if (!parsed.ok()) {
        std::string msg;
        for (const auto& e : parsed.errors) msg += (msg.empty() ? "" : "\n") + to_string(e);
        throw DomainError(msg);
    }
    return report_json(run(*parsed.config), parsed.config->timing);
}

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "Intertwining and interweaving relations for Markov semigroups";

    py::register_exception<PrecisionError>(m, "PrecisionError", PyExc_RuntimeError);
    py::register_exception<InfeasibleError>(m, "InfeasibleError", PyExc_RuntimeError);
    py::register_exception<UnsupportedError>(m, "UnsupportedError", PyExc_RuntimeError);
    py::register_exception<DegeneracyError>(m, "DegeneracyError", PyExc_RuntimeError);

    py::class_<PolyOp>(m, "PolyOp")
        .def_property_readonly("matrix", [](const PolyOp& p) { return p.matrix; })
        .def_property_readonly("degree", &PolyOp::degree)
        .def_property_readonly("lattice_input", [](const PolyOp& p) { return p.dom.space == Space::Lattice; })
        .def_property_readonly("lattice_output", [](const PolyOp& p) { return p.cod.space == Space::Lattice; })
        .def("__matmul__", [](const PolyOp& a, const PolyOp& b) { return a * b; })
        .def("__repr__", [](const PolyOp& p) { return "<PolyOp degree " + std::to_string(p.degree()) + ">"; });

    py::class_<Residual>(m, "Residual")
        .def_readonly("absolute", &Residual::absolute)
        .def_readonly("scaled", &Residual::scaled);

    m.def("bessel_diffusion", [](double beta, int degree) { return generator_polyop(gen::BesselDiffusion{beta}, degree); },
          py::arg("beta"), py::arg("degree"));
    m.def("bessel_birth_death",
          [](double beta, double rate, int degree) { return generator_polyop(gen::BesselBirthDeath{beta, rate}, degree); },
          py::arg("beta"), py::arg("rate"), py::arg("degree"));
    m.def("laguerre_diffusion",
          [](double beta, double scale, int degree) { return generator_polyop(gen::LaguerreDiffusion{beta, scale}, degree); },
          py::arg("beta"), py::arg("scale") = 1.0, py::arg("degree"));
    m.def("laguerre_birth_death",
          [](double beta, double sigma, int degree) { return generator_polyop(gen::LaguerreBirthDeath{beta, sigma}, degree); },
          py::arg("beta"), py::arg("sigma"), py::arg("degree"));
    m.def("jacobi_generator",
          [](double lambda1, double beta, int degree) { return generator_polyop(gen::Jacobi{lambda1, beta}, degree); },
          py::arg("lambda1"), py::arg("beta"), py::arg("degree"));
    m.def("generalized_laguerre",
          [](double m0, std::vector<std::pair<double, double>> atoms, int degree) {
              return generator_polyop(gen::GeneralizedLaguerre{make_bernstein(m0, atoms)}, degree);
          },
          py::arg("m"), py::arg("atoms"), py::arg("degree"));

    m.def("poisson_kernel", [](double sigma, int degree) { return kernel_polyop(kern::Poisson{sigma}, degree); },
          py::arg("sigma"), py::arg("degree"));
    m.def("gamma_mixture_kernel",
          [](double beta, double sigma, int degree) { return kernel_polyop(kern::GammaMix{beta, sigma}, degree); },
          py::arg("beta"), py::arg("sigma"), py::arg("degree"));
    m.def("beta_kernel", [](double beta, double eps, int degree) { return kernel_polyop(kern::BetaMult{beta, eps}, degree); },
          py::arg("beta"), py::arg("eps"), py::arg("degree"));
    m.def("gamma_shift_kernel", [](double beta, int degree) { return kernel_polyop(kern::BStar{beta}, degree); },
          py::arg("beta"), py::arg("degree"));
    m.def("bernstein_kernel",
          [](double m0, std::vector<std::pair<double, double>> atoms, int degree) {
              return kernel_polyop(kern::IPhi{make_bernstein(m0, atoms)}, degree);
          },
          py::arg("m"), py::arg("atoms"), py::arg("degree"));
    m.def("bernstein_dual_kernel",
          [](double m0, std::vector<std::pair<double, double>> atoms, double beta, int degree) {
              return kernel_polyop(kern::VBeta{make_bernstein(m0, atoms), beta}, degree);
          },
          py::arg("m"), py::arg("atoms"), py::arg("beta"), py::arg("degree"));

    m.def("semigroup", &semigroup_polyop, py::arg("generator"), py::arg("t"));
    m.def("compare", &compare, py::arg("x"), py::arg("y"));
    m.def("check_intertwining", &check_intertwining, py::arg("P"), py::arg("kernel"), py::arg("P_tilde"));
    m.def("check_interweaving", &check_interweaving, py::arg("kernel"), py::arg("kernel_tilde"), py::arg("P_warm"));
    m.def("eigen_multipliers", py::overload_cast<const PolyOp&, const PolyOp&>(&eigen_multipliers), py::arg("op"),
          py::arg("generator"));

    py::class_<TwoPointOptimal>(m, "TwoPointOptimal")
        .def_readonly("eps0", &TwoPointOptimal::eps0)
        .def_readonly("t0", &TwoPointOptimal::t0)
        .def_readonly("kernel", &TwoPointOptimal::lambda)
        .def_readonly("kernel_tilde", &TwoPointOptimal::lambda_tilde);
    m.def("two_point_optimal", &two_point_optimal, py::arg("mu"), py::arg("mu_tilde"));
    m.def("two_point_semigroup", [](double lambda, Eigen::Vector2d mu, double t) { return TwoPointModel{lambda, mu}.semigroup(t); },
          py::arg("rate"), py::arg("mu"), py::arg("t"));
    m.def("two_point_log_sobolev", &two_point_log_sobolev, py::arg("rate"), py::arg("mu"));

    m.def("neg_log_beta_laplace", [](double eps, double beta, double u) { return laplace(wl::NegLogBeta{eps, beta}, u); },
          py::arg("eps"), py::arg("beta"), py::arg("u"));
    m.def("jacobi_laplace", [](double lambda1, double beta, double u) { return laplace(wl::Jacobi{lambda1, beta}, u); },
          py::arg("lambda1"), py::arg("beta"), py::arg("u"));
    m.def("neg_log_beta_bernstein",
          [](double eps, double beta, double u) { return bernstein_exponent(wl::NegLogBeta{eps, beta}, u); },
          py::arg("eps"), py::arg("beta"), py::arg("u"));

    py::class_<ErgodicConstants>(m, "ErgodicConstants")
        .def_readonly("hardy", &ErgodicConstants::hardy)
        .def_readonly("lower", &ErgodicConstants::lower)
        .def_readonly("upper", &ErgodicConstants::upper)
        .def_readonly("argmin", &ErgodicConstants::argmin)
        .def_readonly("tail_increment", &ErgodicConstants::tail_increment);
    m.def("hardy_constant", &hardy_constant, py::arg("beta"), py::arg("sigma"), py::arg("ncap") = 2000);

    m.def("birth_death_entropy_curve",
          [](double beta, double sigma, int N, std::size_t start, std::vector<double> times) {
              FiniteSemigroup sg = truncate_birth_death(beta, sigma, N);
              DiscreteMeasure m0 = DiscreteMeasure::dirac(sg.size(), start);
              std::vector<double> out;
              for (const auto& p : decay_experiment(sg, m0, times)) out.push_back(p.entropy);
              return out;
          },
          py::arg("beta"), py::arg("sigma"), py::arg("N"), py::arg("start"), py::arg("times"));
    m.def("birth_death_invariant",
          [](double beta, double sigma, int N) { return truncate_birth_death(beta, sigma, N).invariant.weights; },
          py::arg("beta"), py::arg("sigma"), py::arg("N"));

    m.def("gamma_infinity", &gamma_infinity, py::arg("B"), py::arg("Gamma"));
    m.def("diagonal_transfer",
          [](const Eigen::MatrixXd& B, const Eigen::MatrixXd& G) {
              DiagonalTransfer d = diagonal_transfer_setup(B, G);
              py::dict out;
              out["V"] = d.V;
              out["b"] = d.b;
              out["kappa"] = d.kappa;
              out["warmup"] = d.warmup;
              return out;
          },
          py::arg("B"), py::arg("Gamma"));

    m.def("exact_laguerre_moments", &laguerre_transition_moments, py::arg("beta"), py::arg("scale"), py::arg("t"),
          py::arg("x"), py::arg("kmax"));
    m.def("sample_intertwined",
          [](double beta, double scale, double sigma, double t, double x, std::size_t n, std::uint64_t seed) {
              Stream rng(seed);
              std::vector<double> out(n);
              for (auto& v : out) v = intertwined_laguerre_sampler(beta, scale, sigma, t, x, rng);
              return out;
          },
          py::arg("beta"), py::arg("scale"), py::arg("sigma"), py::arg("t"), py::arg("x"), py::arg("n"), py::arg("seed") = 0);

    m.def("run", &run_config, py::arg("config"),
          "Run an experiment from `key = value` configuration text and return the JSON report.");
}
