#include "interweave/cutoff.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <ostream>

#include "interweave/errors.hpp"

namespace interweave {

void OUFamily::validate() const {
    base.validate();
    require(!sizes.empty(), "OU family: no sizes");
    for (int n : sizes) require(n >= 1, "OU family: sizes must be positive");
    if (start.size() != base.dim()) throw DimensionError("OU family: start vector has the wrong dimension");
    require(start.norm() > 0, "OU family: start vector must be nonzero");
    require(time_scale > 0 && std::isfinite(time_scale), "OU family: time scale must be positive");
}

double OUFamily::b_min() const {
    Eigen::VectorXcd ev = base.B.eigenvalues();
    double m = ev(0).real();
    for (Eigen::Index i = 1; i < ev.size(); ++i) m = std::min(m, ev(i).real());
    return m;
}

double OUFamily::critical_time(int n) const {
    require(n >= 1, "critical_time: n must be positive");
    return time_scale * std::log(static_cast<double>(n)) / (2.0 * b_min());
}

OUModel kinetic_example() {
    OUModel m;
    m.B = (Eigen::Matrix2d() << 0, -1, 0.5, 2).finished();
    m.Gamma = (Eigen::Matrix2d() << 0, 0, 0, 1).finished();
    return m;
}

OUModel scalar_example(double b) {
    require(b > 0 && std::isfinite(b), "scalar_example: b must be positive");
    OUModel m;
    m.B = Eigen::MatrixXd::Constant(1, 1, b);
    m.Gamma = Eigen::MatrixXd::Constant(1, 1, 2 * b);
    return m;
}

OUFamily kinetic_family(const std::vector<int>& sizes, double c) {
    OUFamily f;
    f.base = kinetic_example();
    f.sizes = sizes;
    f.start = Eigen::Vector2d(0.0, c);
    f.name = "kinetic";
    f.validate();
    return f;
}

OUFamily scalar_family(double b, const std::vector<int>& sizes, double c) {
    OUFamily f;
    f.base = scalar_example(b);
    f.sizes = sizes;
    f.start = Eigen::VectorXd::Constant(1, c);
    f.name = "scalar";
    f.validate();
    return f;
}

OUFamily transfer_family(const OUFamily& family) {
    family.validate();
    DiagonalTransfer d = diagonal_transfer_setup(family.base.B, family.base.Gamma);
    OUFamily f = family;
    f.base = d.diagonal;
    f.start = d.V * family.start;
    f.name = family.name + "-transfer";
    f.validate();
    return f;
}

double tensor_kappa(const OUModel& base, int n) {
    base.validate();
    require(n >= 1, "tensor_kappa: n must be positive");
    const int d = base.dim();
    Eigen::MatrixXd B = Eigen::MatrixXd::Zero(n * d, n * d), G = B;
    for (int k = 0; k < n; ++k) {
        B.block(k * d, k * d, d, d) = base.B;
        G.block(k * d, k * d, d, d) = base.Gamma;
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(gamma_infinity(B, G));
    return es.eigenvalues().maxCoeff() / es.eigenvalues().minCoeff();
}

std::vector<ProfileCell> tv_profile(const OUFamily& family, const std::vector<double>& r_grid, std::size_t nsamples,
                                    Stream& rng, std::size_t memory_cap) {
    family.validate();
    require(!r_grid.empty(), "tv_profile: empty r grid");
    for (double r : r_grid) require(r > 0 && std::isfinite(r), "tv_profile: r values must be positive");
    const std::size_t d = static_cast<std::size_t>(family.base.dim());
    for (int n : family.sizes) {
        std::size_t side = static_cast<std::size_t>(n) * d;
        if (side * side * sizeof(double) > memory_cap)
            throw DomainError("tv_profile: size " + std::to_string(n) + " exceeds the covariance memory cap");
    }
    const Eigen::MatrixXd gamma_inf = gamma_infinity(family.base.B, family.base.Gamma);
    const Gaussian target{Eigen::VectorXd::Zero(family.base.dim()), gamma_inf};
    std::vector<ProfileCell> out;
    std::uint64_t index = 0;
    for (int n : family.sizes) {
        for (double r : r_grid) {
            ProfileCell cell;
            cell.n = n;
            cell.r = r;
            cell.t = r * family.critical_time(n);
            Stream local = rng.split(index++);
            if (cell.t == 0) {
                // The start is a point mass, singular to the equilibrium law.
                cell.tv = {1.0, 0.0};
            } else {
                AffineGaussianKernel k = ou_kernel(family.base, cell.t);
                Gaussian from{k.M * family.start + k.c, k.Sigma};
                cell.tv = tv_product_gaussian_mc(from, target, n, nsamples, local);
            }
            out.push_back(cell);
        }
    }
    return out;
}

CutoffSummary cutoff_summary(const std::vector<ProfileCell>& profile, double early_r, double late_r) {
    std::map<int, std::vector<ProfileCell>> by_n;
    for (const auto& c : profile) by_n[c.n].push_back(c);
    if (by_n.size() < 4) throw DomainError("cutoff_summary: need profiles for at least four sizes");

    auto pick = [](const std::vector<ProfileCell>& cells, double r) -> const ProfileCell& {
        for (const auto& c : cells)
            if (std::abs(c.r - r) <= 1e-12 * std::max(1.0, r)) return c;
        throw DomainError("cutoff_summary: profile lacks r = " + std::to_string(r));
    };
    auto joint_se = [](double a, double b) { return std::sqrt(a * a + b * b); };

    CutoffSummary s;
    for (auto& [n, cells] : by_n) {
        std::sort(cells.begin(), cells.end(), [](const ProfileCell& a, const ProfileCell& b) { return a.r < b.r; });
        for (std::size_t j = 1; j < cells.size(); ++j) {
            double rise = cells[j].tv.value - cells[j - 1].tv.value;
            double se = joint_se(cells[j].tv.se, cells[j - 1].tv.se);
            double units = rise <= 0 ? 0.0 : (se > 0 ? rise / se : 1e300);
            s.worst_r_violation = std::max(s.worst_r_violation, units);
            if (units > 3) s.monotone_in_r = false;
        }
        if (n == 1) continue;
        const auto& e = pick(cells, early_r);
        const auto& l = pick(cells, late_r);
        s.early.push_back({n, e.tv.value, e.tv.se});
        s.late.push_back({n, l.tv.value, l.tv.se});
    }
    if (s.early.size() < 2) throw DomainError("cutoff_summary: need at least two sizes above 1");

    s.early_rises = s.late_falls = true;
    for (std::size_t i = 1; i < s.early.size(); ++i) {
        if (s.early[i].tv < s.early[i - 1].tv - 3 * joint_se(s.early[i].se, s.early[i - 1].se)) s.early_rises = false;
        if (s.late[i].tv > s.late[i - 1].tv + 3 * joint_se(s.late[i].se, s.late[i - 1].se)) s.late_falls = false;
    }
    s.early_final = s.early.back().tv;
    s.late_final = s.late.back().tv;
    s.signature = s.early_rises && s.late_falls && s.early_final >= 0.9 && s.late_final <= 0.1;
    return s;
}

void write_csv(std::ostream& os, const std::vector<ProfileCell>& profile) {
    os << "n,r,t,tv,se\n";
    os.precision(17);
    for (const auto& c : profile) os << c.n << ',' << c.r << ',' << c.t << ',' << c.tv.value << ',' << c.tv.se << '\n';
}

}  // namespace interweave
