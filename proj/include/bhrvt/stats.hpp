#pragma once
// Mean, variance, correlation and covariance of the solution process,
// integrated against the transformed densities.
//
// Second moments are computed about the mean (a first pass finds the means),
// so covariances do not inherit the rounding of E[X1 X2] - E[X1] E[X2].

#include <vector>

#include "bhrvt/dist.hpp"
#include "bhrvt/parallel.hpp"
#include "bhrvt/quad.hpp"
#include "bhrvt/types.hpp"

namespace bhrvt::stats {

struct MeanVar {
    double mean = 0.0;
    double variance = 0.0;

    double std() const;
};

// Variance below this is an internal inconsistency rather than rounding.
inline constexpr double kNegativeVarianceTolerance = 1e-6;

// E[X_n] and Var[X_n]. Throws quad::QuadratureError on non-convergence and
// std::logic_error when the variance comes out below -1e-6.
MeanVar mean_var_at(Period n, const dist::JointDensity& d, const quad::QuadratureConfig& cfg = {});
double mean_at(Period n, const dist::JointDensity& d, const quad::QuadratureConfig& cfg = {});

// Same moments from a one-dimensional integral of x^k f_1(x, n) over the
// range of X_n. Slower and limited by the accuracy of f_1; kept as a check.
MeanVar mean_var_from_density(Period n, const dist::JointDensity& d, const quad::QuadratureConfig& cfg = {});

// Moments of X_inf. Throws std::domain_error when the box reaches b = 0.
MeanVar steady_moments(const dist::JointDensity& d, const quad::QuadratureConfig& cfg = {});

// E[X_n1 X_n2] for n1 != n2 (std::invalid_argument otherwise).
double correlation_at(Period n1, Period n2, const dist::JointDensity& d, const quad::QuadratureConfig& cfg = {});
// Cov[X_n1, X_n2] given the two means; n1 == n2 gives the variance.
double covariance_at(Period n1, double mean1, Period n2, double mean2, const dist::JointDensity& d,
                     const quad::QuadratureConfig& cfg = {});

struct MomentSeries {
    struct Entry {
        Period n = 0;
        double mean = 0.0;
        double std = 0.0;
    };
    std::vector<Entry> entries;
    double steady_mean = 0.0;
    double steady_std = 0.0;
};

MomentSeries moment_series(Period n_max, const dist::JointDensity& d, const quad::QuadratureConfig& cfg = {},
                           Exec exec = Exec::openmp);

struct CovarianceSurface {
    std::vector<Period> periods;
    std::vector<double> mean;
    std::vector<double> gamma;  // row-major, periods x periods
    std::vector<double> cov;

    std::size_t size() const { return periods.size(); }
    double gamma_at(std::size_t i, std::size_t j) const { return gamma[i * size() + j]; }
    double cov_at(std::size_t i, std::size_t j) const { return cov[i * size() + j]; }
};

// Entries for i <= j are computed and mirrored. Throws on an empty list.
CovarianceSurface covariance_surface(const std::vector<Period>& periods, const dist::JointDensity& d,
                                     const quad::QuadratureConfig& cfg = {}, Exec exec = Exec::openmp);

}  // namespace bhrvt::stats
