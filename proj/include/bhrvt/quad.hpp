#pragma once
// Adaptive Gauss-Kronrod integration over finite intervals and boxes.
//
// The 1D engine is globally adaptive: every panel carries a 15-point Kronrod
// estimate and the |K15 - G7| difference as its error; the panel with the
// largest error is bisected until the summed error meets the tolerance or no
// panel may be split further (max_depth). Final values are summed in order of
// panel position, so a fixed configuration gives bit-identical results.
//
// 2D and 3D integrals nest the 1D engine; inner tolerances are ten times
// tighter than the outer ones.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <queue>
#include <span>
#include <stdexcept>
#include <string>
#include <type_traits>
#include <vector>

#include "bhrvt/types.hpp"

namespace bhrvt::quad {

enum class PanelRule { gauss_kronrod_7_15 };

struct QuadratureConfig {
    double rel_tol = 1e-6;
    double abs_tol = 1e-9;
    int max_depth = 12;
    int initial_panels = 1;
    PanelRule panel_rule = PanelRule::gauss_kronrod_7_15;

    // Throws std::invalid_argument when a field is out of range.
    void validate() const;

    // Tolerances for integrals nested inside this one.
    QuadratureConfig inner() const {
        QuadratureConfig c = *this;
        c.rel_tol *= 0.1;
        c.abs_tol *= 0.1;
        return c;
    }

    QuadratureConfig with_panels(int panels) const {
        QuadratureConfig c = *this;
        c.initial_panels = std::max(1, panels);
        return c;
    }
};

struct IntegralResult {
    double value = 0.0;
    double error_estimate = 0.0;
    long panels_used = 0;
    bool converged = true;
};

template <std::size_t N>
struct IntegralResultN {
    std::array<double, N> value{};
    std::array<double, N> error_estimate{};
    long panels_used = 0;
    bool converged = true;
};

// Raised by callers that treat non-convergence as fatal.
class QuadratureError : public std::runtime_error {
public:
    QuadratureError(const std::string& what, double error_estimate)
        : std::runtime_error(what + " (error estimate " + std::to_string(error_estimate) + ")"),
          error_estimate_(error_estimate) {}

    double error_estimate() const { return error_estimate_; }

private:
    double error_estimate_;
};

// Throws QuadratureError when r did not converge.
void require_converged(const IntegralResult& r, const char* what);

namespace detail {

inline constexpr std::array<double, 8> kKronrodNodes = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.000000000000000000000000000000000};

inline constexpr std::array<double, 8> kKronrodWeights = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};

// Gauss weights for nodes kKronrodNodes[1], [3], [5], [7].
inline constexpr std::array<double, 4> kGaussWeights = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

template <std::size_t N>
using Vec = std::array<double, N>;

template <std::size_t N, class F>
Vec<N> call_vec(F& f, double x) {
    if constexpr (N == 1 && std::is_arithmetic_v<std::invoke_result_t<F&, double>>) {
        return Vec<1>{static_cast<double>(f(x))};
    } else {
        return f(x);
    }
}

template <std::size_t N>
struct PanelEstimate {
    Vec<N> value{};
    Vec<N> error{};
};

template <std::size_t N, class F>
PanelEstimate<N> gauss_kronrod_15(F& f, double lo, double hi) {
    const double center = 0.5 * (lo + hi);
    const double half = 0.5 * (hi - lo);
    const Vec<N> fc = call_vec<N>(f, center);
    Vec<N> kron{};
    Vec<N> gauss{};
    for (std::size_t k = 0; k < N; ++k) {
        kron[k] = fc[k] * kKronrodWeights[7];
        gauss[k] = fc[k] * kGaussWeights[3];
    }
    for (std::size_t j = 0; j < 7; ++j) {
        const double dx = half * kKronrodNodes[j];
        const Vec<N> f1 = call_vec<N>(f, center - dx);
        const Vec<N> f2 = call_vec<N>(f, center + dx);
        for (std::size_t k = 0; k < N; ++k) {
            const double s = f1[k] + f2[k];
            kron[k] += kKronrodWeights[j] * s;
            if (j % 2 == 1) gauss[k] += kGaussWeights[(j - 1) / 2] * s;
        }
    }
    PanelEstimate<N> out;
    for (std::size_t k = 0; k < N; ++k) {
        out.value[k] = kron[k] * half;
        out.error[k] = std::abs((kron[k] - gauss[k]) * half);
        if (!std::isfinite(out.value[k])) {
            throw QuadratureError("non-finite integrand value", INFINITY);
        }
    }
    return out;
}

template <std::size_t N>
bool within_tolerance(const Vec<N>& value, const Vec<N>& err, const QuadratureConfig& cfg) {
    for (std::size_t k = 0; k < N; ++k) {
        if (err[k] > std::max(cfg.abs_tol, cfg.rel_tol * std::abs(value[k]))) return false;
    }
    return true;
}

}  // namespace detail

// Integrates a function returning std::array<double, N> (or double when
// N == 1) over iv. An empty or reversed interval integrates to zero.
template <std::size_t N, class F>
IntegralResultN<N> integrate_1d_n(F&& f, Interval iv, const QuadratureConfig& cfg) {
    using detail::Vec;
    IntegralResultN<N> out;
    if (!(iv.hi > iv.lo)) return out;

    struct Panel {
        double lo, hi;
        Vec<N> value, err;
        int depth;
        double key;
    };
    std::vector<Panel> panels;
    Vec<N> sum_value{};
    Vec<N> sum_err{};

    auto make_panel = [&](double lo, double hi, int depth) {
        auto est = detail::gauss_kronrod_15<N>(f, lo, hi);
        double key = 0.0;
        for (std::size_t k = 0; k < N; ++k) key = std::max(key, est.error[k]);
        return Panel{lo, hi, est.value, est.error, depth, key};
    };
    auto add = [&](const Panel& p, double sign) {
        for (std::size_t k = 0; k < N; ++k) {
            sum_value[k] += sign * p.value[k];
            sum_err[k] += sign * p.err[k];
        }
    };

    auto heap_order = [&panels](std::size_t i, std::size_t j) {
        if (panels[i].key != panels[j].key) return panels[i].key < panels[j].key;
        return panels[i].lo > panels[j].lo;
    };
    std::priority_queue<std::size_t, std::vector<std::size_t>, decltype(heap_order)> heap(heap_order);

    const int n0 = std::max(1, cfg.initial_panels);
    panels.reserve(static_cast<std::size_t>(n0) * 8);
    const double step = (iv.hi - iv.lo) / n0;
    for (int i = 0; i < n0; ++i) {
        const double lo = iv.lo + step * i;
        const double hi = (i + 1 == n0) ? iv.hi : iv.lo + step * (i + 1);
        panels.push_back(make_panel(lo, hi, 0));
        add(panels.back(), 1.0);
        if (cfg.max_depth > 0) heap.push(panels.size() - 1);
    }

    bool converged = false;
    for (;;) {
        if (detail::within_tolerance<N>(sum_value, sum_err, cfg)) {
            // Running sums drift; confirm against an exact re-summation.
            sum_value = {};
            sum_err = {};
            for (const auto& p : panels) add(p, 1.0);
            if (detail::within_tolerance<N>(sum_value, sum_err, cfg)) {
                converged = true;
                break;
            }
        }
        if (heap.empty()) break;
        const std::size_t i = heap.top();
        heap.pop();
        const Panel parent = panels[i];
        const double mid = 0.5 * (parent.lo + parent.hi);
        if (!(mid > parent.lo && mid < parent.hi)) continue;  // below resolution
        add(parent, -1.0);
        panels[i] = make_panel(parent.lo, mid, parent.depth + 1);
        panels.push_back(make_panel(mid, parent.hi, parent.depth + 1));
        add(panels[i], 1.0);
        add(panels.back(), 1.0);
        if (parent.depth + 1 < cfg.max_depth) {
            heap.push(i);
            heap.push(panels.size() - 1);
        }
    }

    std::sort(panels.begin(), panels.end(), [](const Panel& x, const Panel& y) { return x.lo < y.lo; });
    for (const auto& p : panels) {
        for (std::size_t k = 0; k < N; ++k) {
            out.value[k] += p.value[k];
            out.error_estimate[k] += p.err[k];
        }
    }
    out.panels_used = static_cast<long>(panels.size());
    out.converged = converged;
    return out;
}

template <class F>
IntegralResult integrate_1d(F&& f, Interval iv, const QuadratureConfig& cfg) {
    auto r = integrate_1d_n<1>(std::forward<F>(f), iv, cfg);
    return {r.value[0], r.error_estimate[0], r.panels_used, r.converged};
}

// Integrates over consecutive pieces [edges[i], edges[i+1]]. edges must be
// nondecreasing; the absolute tolerance is shared out by piece width and each
// piece gets initial panels in proportion to its width.
template <std::size_t N, class F>
IntegralResultN<N> integrate_piecewise_n(F&& f, std::span<const double> edges,
                                         const QuadratureConfig& cfg) {
    IntegralResultN<N> out;
    if (edges.size() < 2) return out;
    const double total = edges.back() - edges.front();
    if (!(total > 0.0)) return out;
    for (std::size_t i = 0; i + 1 < edges.size(); ++i) {
        const double w = edges[i + 1] - edges[i];
        if (!(w > 0.0)) continue;
        QuadratureConfig piece = cfg;
        piece.abs_tol = cfg.abs_tol * (w / total);
        piece.initial_panels = std::max(1, static_cast<int>(std::ceil(cfg.initial_panels * w / total)));
        auto r = integrate_1d_n<N>(f, Interval{edges[i], edges[i + 1]}, piece);
        for (std::size_t k = 0; k < N; ++k) {
            out.value[k] += r.value[k];
            out.error_estimate[k] += r.error_estimate[k];
        }
        out.panels_used += r.panels_used;
        out.converged = out.converged && r.converged;
    }
    return out;
}

template <class F>
IntegralResult integrate_piecewise(F&& f, std::span<const double> edges, const QuadratureConfig& cfg) {
    auto r = integrate_piecewise_n<1>(std::forward<F>(f), edges, cfg);
    return {r.value[0], r.error_estimate[0], r.panels_used, r.converged};
}

// f(x, y) over box x-range × y-range; outer axis x.
template <class F>
IntegralResult integrate_2d(F&& f, Interval x_range, Interval y_range, const QuadratureConfig& cfg) {
    const QuadratureConfig icfg = cfg.inner();
    bool inner_ok = true;
    long inner_panels = 0;
    double inner_err = 0.0;
    auto outer = [&](double x) {
        auto r = integrate_1d([&](double y) { return f(x, y); }, y_range, icfg);
        inner_ok = inner_ok && r.converged;
        inner_panels += r.panels_used;
        inner_err = std::max(inner_err, r.error_estimate);
        return r.value;
    };
    IntegralResult r = integrate_1d(outer, x_range, cfg);
    r.converged = r.converged && inner_ok;
    r.panels_used += inner_panels;
    r.error_estimate += inner_err * x_range.width();
    return r;
}

// f(x, y, z) over a box; x outermost, z innermost.
template <class F>
IntegralResult integrate_3d(F&& f, Interval x_range, Interval y_range, Interval z_range,
                            const QuadratureConfig& cfg) {
    const QuadratureConfig icfg = cfg.inner();
    bool inner_ok = true;
    long inner_panels = 0;
    double inner_err = 0.0;
    auto outer = [&](double x) {
        auto r = integrate_2d([&](double y, double z) { return f(x, y, z); }, y_range, z_range, icfg);
        inner_ok = inner_ok && r.converged;
        inner_panels += r.panels_used;
        inner_err = std::max(inner_err, r.error_estimate);
        return r.value;
    };
    IntegralResult r = integrate_1d(outer, x_range, cfg);
    r.converged = r.converged && inner_ok;
    r.panels_used += inner_panels;
    r.error_estimate += inner_err * x_range.width();
    return r;
}

}  // namespace bhrvt::quad
