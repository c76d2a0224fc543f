#pragma once
// Monte Carlo oracle: direct simulation of the random recurrence, histograms
// and sample moments, used to cross-check the transformed densities.
//
// Samples are drawn in fixed blocks of kBlockSize; block k uses its own
// generator seeded from (seed, k). Output therefore depends only on
// (seed, n_samples), never on thread count or scheduling.

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "bhrvt/dist.hpp"
#include "bhrvt/parallel.hpp"
#include "bhrvt/types.hpp"

namespace bhrvt::mc {

inline constexpr std::size_t kBlockSize = 4096;

struct McConfig {
    std::uint64_t n_samples = 1'000'000;
    std::uint64_t seed = 20190101;
    std::size_t n_bins = 100;

    // Throws std::invalid_argument unless n_samples >= 1000 and n_bins >= 10.
    void validate() const;
};

// Generator for stream `index` of a run seeded with `seed`.
dist::Rng make_stream(std::uint64_t seed, std::uint64_t index);

// Draws n_samples input points.
std::vector<ParamPoint> sample_params(const dist::JointDensity& d, std::uint64_t n_samples, std::uint64_t seed,
                                      Exec exec = Exec::openmp);

// Trajectories x_0..x_{n_max}, stored only for the kept periods.
struct Ensemble {
    std::vector<Period> periods;
    std::uint64_t n_samples = 0;
    std::vector<double> values;  // period-major: values[k * n_samples + i]
    std::vector<ParamPoint> params;
    // Largest relative gap between iterating the map and the closed form.
    double max_route_discrepancy = 0.0;

    std::span<const double> at_period_index(std::size_t k) const {
        return {values.data() + k * n_samples, static_cast<std::size_t>(n_samples)};
    }
    // Values for period n; throws std::out_of_range when n was not kept.
    std::span<const double> period(Period n) const;
};

// Simulates every sample to n_max by iterating the map. keep lists the
// periods to store (default: all of 0..n_max).
Ensemble simulate_paths(const dist::JointDensity& d, Period n_max, const McConfig& cfg,
                        std::optional<std::vector<Period>> keep = std::nullopt, Exec exec = Exec::openmp);

struct EmpiricalDensity {
    std::vector<double> bin_edges;
    std::vector<double> heights;
    std::vector<double> standard_errors;
    std::uint64_t total = 0;   // all values, including any outside the range
    std::uint64_t inside = 0;  // values that fell in a bin

    std::size_t bins() const { return heights.size(); }
    double width(std::size_t i) const { return bin_edges[i + 1] - bin_edges[i]; }
    double mass() const;
};

// Histogram over [min, max] of the values, normalized to unit mass. Equal
// values are centered in a unit-width range. Throws on empty input.
EmpiricalDensity empirical_pdf(std::span<const double> values, std::size_t n_bins);

// Histogram over a fixed range; heights are count / (total * width), so the
// mass falls short of 1 by the fraction of values outside the range.
EmpiricalDensity empirical_pdf(std::span<const double> values, std::size_t n_bins, Interval range);

// Steady-state samples (A - 1)/B drawn directly.
std::vector<double> steady_samples(const dist::JointDensity& d, const McConfig& cfg, Exec exec = Exec::openmp);
EmpiricalDensity empirical_steady(const dist::JointDensity& d, const McConfig& cfg, Exec exec = Exec::openmp);

struct MomentEstimate {
    double mean = 0.0;
    double std = 0.0;
    double mean_stderr = 0.0;
    double std_stderr = 0.0;
    std::uint64_t count = 0;
};

// Sample mean and standard deviation with delta-method standard errors.
// Throws std::invalid_argument on empty input.
MomentEstimate mc_moments(std::span<const double> values);

// Mean of x_{n1} x_{n2} over an ensemble holding both periods.
MomentEstimate mc_cross_moment(const Ensemble& e, Period n1, Period n2);

// Empirical quantile (linear interpolation); values is copied.
double quantile(std::span<const double> values, double q);

}  // namespace bhrvt::mc
