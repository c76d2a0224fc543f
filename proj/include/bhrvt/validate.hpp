#pragma once
// Cross-checks of the transformed densities and moments against the Monte
// Carlo oracle.
//
// A histogram bin agrees when its height lies within n_se standard errors of
// the analytic density averaged over the bin. The standard error is the one
// implied by the analytic bin probability p: sqrt(p (1 - p) / N) / width,
// with p floored at 1/N so empty tails are not judged on a zero SE.

#include <algorithm>
#include <cmath>
#include <iosfwd>
#include <string>
#include <vector>

#include "bhrvt/dist.hpp"
#include "bhrvt/mc.hpp"
#include "bhrvt/parallel.hpp"
#include "bhrvt/quad.hpp"

namespace bhrvt::validate {

struct BinComparison {
    std::size_t bins = 0;
    std::size_t within = 0;
    double max_abs_z = 0.0;

    double fraction() const { return bins ? static_cast<double>(within) / static_cast<double>(bins) : 0.0; }
};

// bin_probability(lo, hi) returns the analytic probability of [lo, hi].
template <class F>
BinComparison compare_histogram(const mc::EmpiricalDensity& h, F&& bin_probability, double n_se,
                                Exec exec = Exec::openmp);

BinComparison compare_pdf1(Period n, const dist::JointDensity& d, const mc::EmpiricalDensity& h,
                           const quad::QuadratureConfig& cfg, double n_se = 4.0, Exec exec = Exec::openmp);
BinComparison compare_steady(const dist::JointDensity& d, const mc::EmpiricalDensity& h,
                             const quad::QuadratureConfig& cfg, double n_se = 4.0, Exec exec = Exec::openmp);

struct Check {
    std::string name;
    bool passed = false;
    std::string detail;
};

struct Report {
    std::string distribution;
    std::vector<Check> checks;

    bool all_passed() const;
};

struct Options {
    std::vector<Period> periods{1, 5, 20};
    double n_se = 4.0;
    double min_bin_fraction = 0.99;
    double route_tolerance = 1e-12;
};

// Histograms and moments of X_n for every period in opts plus the steady
// state, and the iterate-vs-closed-form identity over the simulated paths.
Report cross_validate(const dist::JointDensity& d, const quad::QuadratureConfig& cfg, const mc::McConfig& mcfg,
                      const Options& opts = {}, Exec exec = Exec::openmp);

void print(std::ostream& os, const Report& r);

template <class F>
BinComparison compare_histogram(const mc::EmpiricalDensity& h, F&& bin_probability, double n_se, Exec exec) {
    const double total = static_cast<double>(h.total);
    std::vector<double> z(h.bins());
    for_each_index(h.bins(), exec, [&](std::size_t i) {
        const double w = h.width(i);
        const double p = bin_probability(h.bin_edges[i], h.bin_edges[i + 1]);
        const double pf = std::max(p, 1.0 / total);
        const double se = std::sqrt(pf * std::max(1.0 - pf, 0.0) / total) / w;
        z[i] = (h.heights[i] - p / w) / se;
    });
    BinComparison out;
    out.bins = z.size();
    for (double v : z) {
        if (std::abs(v) <= n_se) ++out.within;
        out.max_abs_z = std::max(out.max_abs_z, std::abs(v));
    }
    return out;
}

}  // namespace bhrvt::validate
