#pragma once

#include <cstddef>
#include <iosfwd>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "interweave/gauss.hpp"
#include "interweave/rng.hpp"
#include "interweave/stats.hpp"

namespace interweave {

// n independent copies of a base OU model, each started at the same vector.
struct OUFamily {
    OUModel base;
    std::vector<int> sizes;
    Eigen::VectorXd start;
    double time_scale = 1.0;        // multiplies the critical time log(n) / (2 b_min)
    std::string name = "custom";

    void validate() const;
    double b_min() const;           // smallest real part of the spectrum of B
    double critical_time(int n) const;
};

// B = (0 -1; 1/2 2), Gamma = diag(0, 1).
OUModel kinetic_example();

// One-dimensional B = b, Gamma = 2b.
OUModel scalar_example(double b);

OUFamily kinetic_family(const std::vector<int>& sizes, double c);
OUFamily scalar_family(double b, const std::vector<int>& sizes, double c);

// The diagonal model of the transfer construction, started at V x0.
OUFamily transfer_family(const OUFamily& family);

// Condition number of the stationary covariance of the n-fold tensorization,
// assembled densely.
double tensor_kappa(const OUModel& base, int n);

struct ProfileCell {
    int n = 0;
    double r = 0;
    double t = 0;
    Estimate tv;
};

// TV from the fixed start to equilibrium at t = r * critical_time(n). Throws
// DomainError when a dense 2n x 2n covariance would exceed memory_cap bytes.
std::vector<ProfileCell> tv_profile(const OUFamily& family, const std::vector<double>& r_grid, std::size_t nsamples,
                                    Stream& rng, std::size_t memory_cap = std::size_t(1) << 30);

struct TrendPoint {
    int n;
    double tv;
    double se;
};

struct CutoffSummary {
    bool signature = false;
    bool early_rises = false;       // TV at r = 1/2 nondecreasing in n within 3 SE
    bool late_falls = false;        // TV at r = 2 nonincreasing in n within 3 SE
    double early_final = 0;         // TV at r = 1/2 for the largest n
    double late_final = 0;          // TV at r = 2 for the largest n
    bool monotone_in_r = true;      // every profile nonincreasing in r within 3 SE
    double worst_r_violation = 0;   // in SE units
    std::vector<TrendPoint> early;
    std::vector<TrendPoint> late;
};

// Needs profiles for at least four sizes above 1, each containing r = 1/2 and r = 2.
CutoffSummary cutoff_summary(const std::vector<ProfileCell>& profile, double early_r = 0.5, double late_r = 2.0);

void write_csv(std::ostream& os, const std::vector<ProfileCell>& profile);

}  // namespace interweave
