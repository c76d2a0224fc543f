#include "bhrvt/mc.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <string>

#include "bhrvt/model.hpp"

namespace bhrvt::mc {

namespace {

std::size_t block_count(std::uint64_t n) { return static_cast<std::size_t>((n + kBlockSize - 1) / kBlockSize); }

}  // namespace

void McConfig::validate() const {
    if (n_samples < 1000) throw std::invalid_argument("Monte Carlo needs at least 1000 samples");
    if (n_bins < 10) throw std::invalid_argument("histograms need at least 10 bins");
}

dist::Rng make_stream(std::uint64_t seed, std::uint64_t index) {
    std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                      static_cast<std::uint32_t>(index), static_cast<std::uint32_t>(index >> 32),
                      0x9e3779b9u};
    return dist::Rng(seq);
}

std::vector<ParamPoint> sample_params(const dist::JointDensity& d, std::uint64_t n_samples, std::uint64_t seed,
                                      Exec exec) {
    std::vector<ParamPoint> out(n_samples);
    for_each_index(block_count(n_samples), exec, [&](std::size_t k) {
        auto rng = make_stream(seed, k);
        const std::size_t begin = k * kBlockSize;
        const std::size_t end = std::min<std::size_t>(begin + kBlockSize, n_samples);
        for (std::size_t i = begin; i < end; ++i) out[i] = d.sample(rng);
    });
    return out;
}

std::span<const double> Ensemble::period(Period n) const {
    const auto it = std::find(periods.begin(), periods.end(), n);
    if (it == periods.end()) throw std::out_of_range("period " + std::to_string(n) + " not kept in ensemble");
    return at_period_index(static_cast<std::size_t>(it - periods.begin()));
}

Ensemble simulate_paths(const dist::JointDensity& d, Period n_max, const McConfig& cfg,
                        std::optional<std::vector<Period>> keep, Exec exec) {
    Ensemble e;
    if (keep) {
        e.periods = *keep;
        std::sort(e.periods.begin(), e.periods.end());
        e.periods.erase(std::unique(e.periods.begin(), e.periods.end()), e.periods.end());
        if (!e.periods.empty() && e.periods.back() > n_max) {
            throw std::invalid_argument("kept period exceeds n_max");
        }
    } else {
        e.periods.resize(n_max + 1);
        std::iota(e.periods.begin(), e.periods.end(), Period{0});
    }
    std::vector<int> slot(n_max + 1, -1);
    for (std::size_t k = 0; k < e.periods.size(); ++k) slot[e.periods[k]] = static_cast<int>(k);

    e.n_samples = cfg.n_samples;
    e.params = sample_params(d, cfg.n_samples, cfg.seed, exec);
    e.values.assign(e.periods.size() * cfg.n_samples, 0.0);

    const std::size_t blocks = block_count(cfg.n_samples);
    std::vector<double> block_gap(blocks, 0.0);
    for_each_index(blocks, exec, [&](std::size_t k) {
        const std::size_t begin = k * kBlockSize;
        const std::size_t end = std::min<std::size_t>(begin + kBlockSize, cfg.n_samples);
        double gap = 0.0;
        for (std::size_t i = begin; i < end; ++i) {
            const ParamPoint& p = e.params[i];
            double x = p.c;
            for (Period n = 0;; ++n) {
                if (slot[n] >= 0) {
                    e.values[static_cast<std::size_t>(slot[n]) * cfg.n_samples + i] = x;
                    const double closed = model::solution_closed_form(p.c, p.a, p.b, n);
                    gap = std::max(gap, std::abs(x - closed) / std::abs(closed));
                }
                if (n == n_max) break;
                x = p.a * x / (1.0 + p.b * x);
            }
        }
        block_gap[k] = gap;
    });
    for (double g : block_gap) e.max_route_discrepancy = std::max(e.max_route_discrepancy, g);
    return e;
}

double EmpiricalDensity::mass() const {
    double m = 0.0;
    for (std::size_t i = 0; i < bins(); ++i) m += heights[i] * width(i);
    return m;
}

EmpiricalDensity empirical_pdf(std::span<const double> values, std::size_t n_bins, Interval range) {
    if (values.empty()) throw std::invalid_argument("empirical density of an empty sample");
    if (n_bins == 0) throw std::invalid_argument("need at least one bin");
    if (range.empty()) throw std::invalid_argument("histogram range must satisfy lo < hi");
    EmpiricalDensity h;
    h.total = values.size();
    h.bin_edges.resize(n_bins + 1);
    for (std::size_t i = 0; i <= n_bins; ++i) {
        h.bin_edges[i] = range.lo + range.width() * static_cast<double>(i) / static_cast<double>(n_bins);
    }
    h.bin_edges.back() = range.hi;
    std::vector<std::uint64_t> counts(n_bins, 0);
    for (double v : values) {
        if (!(v >= range.lo && v <= range.hi)) continue;
        auto idx = static_cast<std::size_t>((v - range.lo) / range.width() * static_cast<double>(n_bins));
        idx = std::min(idx, n_bins - 1);
        ++counts[idx];
        ++h.inside;
    }
    h.heights.resize(n_bins);
    h.standard_errors.resize(n_bins);
    const double total = static_cast<double>(h.total);
    for (std::size_t i = 0; i < n_bins; ++i) {
        const double p = static_cast<double>(counts[i]) / total;
        h.heights[i] = p / h.width(i);
        h.standard_errors[i] = std::sqrt(p * (1.0 - p) / total) / h.width(i);
    }
    return h;
}

EmpiricalDensity empirical_pdf(std::span<const double> values, std::size_t n_bins) {
    if (values.empty()) throw std::invalid_argument("empirical density of an empty sample");
    const auto [mn, mx] = std::minmax_element(values.begin(), values.end());
    Interval range{*mn, *mx};
    if (!(range.hi > range.lo)) range = {*mn - 0.5, *mn + 0.5};
    return empirical_pdf(values, n_bins, range);
}

std::vector<double> steady_samples(const dist::JointDensity& d, const McConfig& cfg, Exec exec) {
    const auto params = sample_params(d, cfg.n_samples, cfg.seed, exec);
    std::vector<double> out(params.size());
    for (std::size_t i = 0; i < params.size(); ++i) out[i] = model::steady_state_value(params[i].a, params[i].b);
    return out;
}

EmpiricalDensity empirical_steady(const dist::JointDensity& d, const McConfig& cfg, Exec exec) {
    const auto samples = steady_samples(d, cfg, exec);
    return empirical_pdf(samples, cfg.n_bins);
}

MomentEstimate mc_moments(std::span<const double> values) {
    if (values.empty()) throw std::invalid_argument("moments of an empty sample");
    const auto n = static_cast<double>(values.size());
    long double sum = 0.0L;
    for (double v : values) sum += v;
    const double mean = static_cast<double>(sum / values.size());
    long double m2 = 0.0L, m4 = 0.0L;
    for (double v : values) {
        const long double d = v - mean;
        m2 += d * d;
        m4 += d * d * d * d;
    }
    MomentEstimate out;
    out.count = values.size();
    out.mean = mean;
    const double var = values.size() > 1 ? static_cast<double>(m2 / (values.size() - 1)) : 0.0;
    out.std = std::sqrt(var);
    out.mean_stderr = out.std / std::sqrt(n);
    const double mu2 = static_cast<double>(m2 / values.size());
    const double mu4 = static_cast<double>(m4 / values.size());
    const double var_se = std::sqrt(std::max(0.0, mu4 - mu2 * mu2) / n);
    out.std_stderr = out.std > 0.0 ? var_se / (2.0 * out.std) : 0.0;
    return out;
}

MomentEstimate mc_cross_moment(const Ensemble& e, Period n1, Period n2) {
    const auto x1 = e.period(n1);
    const auto x2 = e.period(n2);
    std::vector<double> prod(x1.size());
    for (std::size_t i = 0; i < x1.size(); ++i) prod[i] = x1[i] * x2[i];
    return mc_moments(prod);
}

double quantile(std::span<const double> values, double q) {
    if (values.empty()) throw std::invalid_argument("quantile of an empty sample");
    if (!(q >= 0.0 && q <= 1.0)) throw std::invalid_argument("quantile level must lie in [0, 1]");
    std::vector<double> v(values.begin(), values.end());
    const double pos = q * static_cast<double>(v.size() - 1);
    const auto lo = static_cast<std::size_t>(std::floor(pos));
    const std::size_t hi = std::min(lo + 1, v.size() - 1);
    std::nth_element(v.begin(), v.begin() + static_cast<long>(lo), v.end());
    const double v_lo = v[lo];
    double v_hi = v_lo;
    if (hi != lo) v_hi = *std::min_element(v.begin() + static_cast<long>(lo) + 1, v.end());
    return v_lo + (pos - static_cast<double>(lo)) * (v_hi - v_lo);
}

}  // namespace bhrvt::mc
