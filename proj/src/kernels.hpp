#pragma once
// Integrands of the transformed densities with their exact support windows.
// Templated on the concrete density so the innermost loops inline.
//
// Every window is the exact preimage of the support box under the relevant
// inverse mapping, so integrands are smooth inside their domains and the
// kinks of the next-outer integrand sit at known breakpoints.
//
// X_n saturates once c a^n >> 1, so anything integrated over c has a layer
// at c ~ a^-n. Those integrals run in ln c, where the layer has unit width.

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <vector>

#include "bhrvt/dist.hpp"
#include "bhrvt/model.hpp"
#include "bhrvt/quad.hpp"

namespace bhrvt::detail {

using dist::SupportBox;
using quad::IntegralResult;
using quad::IntegralResultN;
using quad::QuadratureConfig;

// Cells scanned for support transitions of the 2-PDF integrand over a.
inline constexpr int kPdf2Cells = 64;
// Below this fraction of the saturation scale, c is integrated linearly.
inline constexpr double kLinearCFraction = 1e-6;

inline int panels_for(double width, double resolution) {
    if (!std::isfinite(resolution) || !(width > 0.0)) return 1;
    return std::clamp(static_cast<int>(std::ceil(width / (2.5 * resolution))), 1, 64);
}

struct Track {
    bool ok = true;
    long panels = 0;

    template <class R>
    void add(const R& r) {
        ok = ok && r.converged;
        panels += r.panels_used;
    }
    template <class R>
    void finish(R& r) const {
        r.converged = r.converged && ok;
        r.panels_used += panels;
    }
};

template <std::size_t N>
void accumulate(IntegralResultN<N>& total, const IntegralResultN<N>& r) {
    for (std::size_t k = 0; k < N; ++k) {
        total.value[k] += r.value[k];
        total.error_estimate[k] += r.error_estimate[k];
    }
    total.panels_used += r.panels_used;
    total.converged = total.converged && r.converged;
}

inline std::vector<double> sorted_edges(const std::vector<double>& pts, Interval range) {
    std::vector<double> edges{range.lo, range.hi};
    for (double p : pts)
        if (p > range.lo && p < range.hi) edges.push_back(p);
    std::sort(edges.begin(), edges.end());
    edges.erase(std::unique(edges.begin(), edges.end()), edges.end());
    return edges;
}

// Integral over c in [range.lo, range.hi] of fn(c). The part above
// `linear_below` (or all of it when range.lo > 0) is done in t = ln c.
template <std::size_t N, class F>
IntegralResultN<N> integrate_log_c(F&& fn, Interval range, double linear_below, const QuadratureConfig& cfg,
                                   double res) {
    IntegralResultN<N> total;
    if (range.empty()) return total;
    double lo = range.lo;
    if (!(lo > 0.0)) {
        const double cut = std::min(range.hi, linear_below);
        if (cut > 0.0) {
            QuadratureConfig lcfg = cfg;
            lcfg.abs_tol *= 1e-3;
            accumulate(total, quad::integrate_1d_n<N>(fn, Interval{0.0, cut}, lcfg));
        }
        lo = cut;
        if (!(lo > 0.0)) return total;
    }
    if (!(range.hi > lo)) return total;
    auto in_log = [&](double t) {
        const double c = std::exp(t);
        auto v = quad::detail::call_vec<N>(fn, c);
        for (auto& e : v) e *= c;
        return v;
    };
    const Interval t{std::log(lo), std::log(range.hi)};
    accumulate(total, quad::integrate_1d_n<N>(in_log, t, cfg.with_panels(panels_for(t.width(), res / range.hi))));
    return total;
}

// c below which x_n = g(c, a, b) grows linearly in c for every b in the box.
inline double saturation_scale(const SupportBox& box, double a, Period n) {
    const double an = model::pow_int(a, n);
    const double b = std::max(box.b.hi, 1e-300);
    return (a - 1.0) / (b * (an - 1.0));
}

// f_1(x, 0) = marginal of C.
template <class D>
IntegralResult marginal_c(const D& dens, const SupportBox& box, double x, const QuadratureConfig& cfg,
                          double res) {
    if (!box.c.contains(x)) return {};
    Track t;
    const QuadratureConfig icfg = cfg.inner().with_panels(panels_for(box.b.width(), res));
    auto outer = [&](double a) {
        auto r = quad::integrate_1d([&](double b) { return dens(x, a, b); }, box.b, icfg);
        t.add(r);
        return r.value;
    };
    auto r = quad::integrate_1d(outer, box.a, cfg.with_panels(panels_for(box.a.width(), res)));
    t.finish(r);
    return r;
}

// a-range on which the level set x_n = x through c stays inside the box.
// Along the level set b increases with a, so b_lo bounds a from below and
// b_hi from above.
inline Interval a_window(double x, Period n, double c, const SupportBox& box) {
    Interval w = box.a;
    if (auto r = model::solve_growth(x, n, c, box.b.lo, box.a)) {
        w.lo = *r;
    } else if (model::closed_form_bound(c, box.a.hi, box.b.lo, n) < x) {
        return {0.0, 0.0};
    }
    if (auto r = model::solve_growth(x, n, c, box.b.hi, box.a)) {
        w.hi = *r;
    } else if (model::closed_form_bound(c, box.a.lo, box.b.hi, n) > x) {
        return {0.0, 0.0};
    }
    return w;
}

// f_1(x, n), n >= 1: outer ln c over the c-range where x is attainable,
// inner a along b = b(c, a) with the constant-in-c Jacobian weight.
template <class D>
IntegralResult pdf1_value(const D& dens, const SupportBox& box, double x, Period n, const QuadratureConfig& cfg,
                          double res) {
    if (n == 0) return marginal_c(dens, box, x, cfg, res);
    if (!(x > 0.0)) return {};
    // c that reaches x from a corner (a*, b*); s1 decreases in a and grows in b.
    auto corner_c = [&](double a, double b) {
        const auto tr = model::transform_1pdf(x, n, a, b);
        return tr.valid ? tr.point.c : std::numeric_limits<double>::infinity();
    };
    const double c_min = corner_c(box.a.hi, box.b.lo);
    if (!std::isfinite(c_min)) return {};
    const Interval c_range{std::max(box.c.lo, c_min), box.c.hi};
    if (c_range.empty()) return {};
    const auto edges = sorted_edges({corner_c(box.a.hi, box.b.hi), corner_c(box.a.lo, box.b.lo),
                                     corner_c(box.a.lo, box.b.hi)},
                                    c_range);

    Track t;
    const QuadratureConfig icfg = cfg.inner();
    auto middle = [&](double c) {
        const Interval aw = a_window(x, n, c, box);
        if (aw.empty()) return 0.0;
        auto r = quad::integrate_1d(
            [&](double a) {
                const auto s = model::slice_1pdf_over_c(x, n, a);
                return s.valid ? dens(c, a, s.b(c)) * s.weight : 0.0;
            },
            aw, icfg.with_panels(panels_for(aw.width(), res)));
        t.add(r);
        return r.value;
    };
    IntegralResult total;
    QuadratureConfig pcfg = cfg;
    for (std::size_t i = 0; i + 1 < edges.size(); ++i) {
        const Interval piece{edges[i], edges[i + 1]};
        pcfg.abs_tol = cfg.abs_tol * piece.width() / c_range.width();
        auto r = integrate_log_c<1>(middle, piece, 0.0, pcfg, res);
        total.value += r.value[0];
        total.error_estimate += r.error_estimate[0];
        total.panels_used += r.panels_used;
        total.converged = total.converged && r.converged;
    }
    t.finish(total);
    return total;
}

// f_1(x, n) integrated literally over (a, b) with c = s_1(x; a, b).
template <class D>
IntegralResult pdf1_value_over_ab(const D& dens, const SupportBox& box, double x, Period n,
                                  const QuadratureConfig& cfg, double res) {
    if (n == 0) return marginal_c(dens, box, x, cfg, res);
    if (!(x > 0.0)) return {};
    std::vector<double> roots;
    for (double cs : {box.c.lo, box.c.hi}) {
        if (!(cs > 0.0)) continue;
        for (double bs : {box.b.lo, box.b.hi})
            if (auto r = model::solve_growth(x, n, cs, bs, box.a)) roots.push_back(*r);
    }
    const auto edges = sorted_edges(roots, box.a);
    Track t;
    const QuadratureConfig icfg = cfg.inner();
    const double inf = std::numeric_limits<double>::infinity();
    auto outer = [&](double a) {
        const double an = model::pow_int(a, n);
        const double lead = an * (a - 1.0);
        const double scale = x * (an - 1.0);
        // c in [c_lo, c_hi] <=> denominator in [x(a-1)/c_hi, x(a-1)/c_lo].
        const double den_min = x * (a - 1.0) / box.c.hi;
        const double den_max = box.c.lo > 0.0 ? x * (a - 1.0) / box.c.lo : inf;
        const Interval bw{std::max(box.b.lo, (lead - den_max) / scale),
                          std::min(box.b.hi, (lead - den_min) / scale)};
        if (bw.empty()) return 0.0;
        auto r = quad::integrate_1d(
            [&](double b) {
                const auto tr = model::transform_1pdf(x, n, a, b);
                return tr.valid ? dens(tr.point.c, a, b) * tr.jacobian_abs : 0.0;
            },
            bw, icfg.with_panels(panels_for(bw.width(), res)));
        t.add(r);
        return r.value;
    };
    auto r = quad::integrate_piecewise(outer, edges, cfg.with_panels(panels_for(box.a.width(), res)));
    t.finish(r);
    return r;
}

// Range of a for which some b in the box takes x1 to x2 in n steps.
// x_n(x1; a, b) rises with a and falls with b, so the ends sit on b_lo and b_hi.
inline Interval a_window_2pdf(double x1, double x2, Period n, const SupportBox& box) {
    auto step = [&](double a, double b) { return model::closed_form_bound(x1, a, b, n); };
    double lo = box.a.lo;
    double hi = box.a.hi;
    if (step(box.a.hi, box.b.lo) < x2 || step(box.a.lo, box.b.hi) > x2) return {0.0, 0.0};
    if (step(box.a.lo, box.b.lo) < x2) lo = model::solve_growth(x2, n, x1, box.b.lo, box.a).value_or(box.a.lo);
    if (step(box.a.hi, box.b.hi) > x2) hi = model::solve_growth(x2, n, x1, box.b.hi, box.a).value_or(box.a.hi);
    return {lo, hi};
}

// f_2(x1, n1; x2, n2) for n1 < n2: single integral over a. The support in a
// is located by scanning kPdf2Cells cells of the a-window and bisecting each
// transition.
template <class D>
IntegralResult pdf2_value(const D& dens, const SupportBox& box, double x1, Period n1, double x2, Period n2,
                          const QuadratureConfig& cfg, double res) {
    if (!(x1 > 0.0) || !(x2 > 0.0)) return {};
    const Interval window = a_window_2pdf(x1, x2, n2 - n1, box);
    if (window.empty()) return {};
    // Recovered (c, b) within rounding of a box face are put on it. On the
    // image of a face (e.g. x1 = x2 at the fixed point c = c_hi) membership
    // would otherwise flip from one a to the next.
    auto snap = [](double v, const Interval& iv) {
        const double tol = 1e-12 * std::max(1.0, std::abs(v));
        if (v < iv.lo && v > iv.lo - tol) return iv.lo;
        if (v > iv.hi && v < iv.hi + tol) return iv.hi;
        return v;
    };
    auto recover = [&](double a) {
        auto tr = model::transform_2pdf(x1, x2, n1, n2, a);
        tr.point.c = snap(tr.point.c, box.c);
        tr.point.b = snap(tr.point.b, box.b);
        return tr;
    };
    auto inside = [&](double a) {
        const auto tr = recover(a);
        return tr.valid && box.contains(tr.point.c, a, tr.point.b);
    };
    auto integrand = [&](double a) {
        const auto tr = recover(a);
        return tr.valid ? dens(tr.point.c, a, tr.point.b) * tr.jacobian_abs : 0.0;
    };
    auto boundary = [&](double in, double out) {
        for (int it = 0; it < 200; ++it) {
            const double mid = 0.5 * (in + out);
            if (mid == in || mid == out) break;
            (inside(mid) ? in : out) = mid;
        }
        return in;
    };

    QuadratureConfig ccfg = cfg;
    ccfg.abs_tol = cfg.abs_tol / kPdf2Cells;
    IntegralResult total;
    const double h = window.width() / kPdf2Cells;
    double left = window.lo;
    bool left_in = inside(left);
    for (int k = 0; k < kPdf2Cells; ++k) {
        const double right = (k + 1 == kPdf2Cells) ? window.hi : window.lo + h * (k + 1);
        const bool right_in = inside(right);
        Interval seg{0.0, 0.0};
        if (left_in && right_in) {
            seg = {left, right};
        } else if (left_in) {
            seg = {left, boundary(left, right)};
        } else if (right_in) {
            seg = {boundary(right, left), right};
        }
        if (!seg.empty()) {
            auto r = quad::integrate_1d(integrand, seg, ccfg.with_panels(panels_for(seg.width(), res)));
            total.value += r.value;
            total.error_estimate += r.error_estimate;
            total.panels_used += r.panels_used;
            total.converged = total.converged && r.converged;
        }
        left = right;
        left_in = right_in;
    }
    return total;
}

// f_X_inf(x): outer c, inner b with a = x b + 1.
template <class D>
IntegralResult steady_value(const D& dens, const SupportBox& box, double x, const QuadratureConfig& cfg,
                            double res) {
    if (!(x > 0.0)) return {};
    const Interval bw = box.b.intersect({(box.a.lo - 1.0) / x, (box.a.hi - 1.0) / x});
    if (bw.empty()) return {};
    Track t;
    const QuadratureConfig icfg = cfg.inner().with_panels(panels_for(bw.width(), res));
    auto outer = [&](double c) {
        auto r = quad::integrate_1d(
            [&](double b) {
                const auto tr = model::transform_steady(x, c, b);
                return dens(tr.point.c, tr.point.a, tr.point.b) * tr.jacobian_abs;
            },
            bw, icfg);
        t.add(r);
        return r.value;
    };
    auto r = quad::integrate_1d(outer, box.c, cfg.with_panels(panels_for(box.c.width(), res)));
    t.finish(r);
    return r;
}

// Integral of value(x, c, a, b) against the transformed density of
// (X_n, A, C), n >= 1: outer a, middle ln c, inner x over the image of the
// b-interval, with b recovered from (x, a, c).
template <std::size_t N, class D, class V>
IntegralResultN<N> transformed_moments(const D& dens, const SupportBox& box, Period n, V&& value,
                                       const QuadratureConfig& cfg, double res) {
    using Vec = std::array<double, N>;
    Track t;
    const QuadratureConfig mcfg = cfg.inner();
    const QuadratureConfig icfg = mcfg.inner().with_panels(panels_for(box.b.width(), res));
    auto outer = [&](double a) -> Vec {
        auto middle = [&](double c) -> Vec {
            const Interval xw{model::closed_form_bound(c, a, box.b.hi, n),
                              model::closed_form_bound(c, a, box.b.lo, n)};
            auto r = quad::integrate_1d_n<N>(
                [&](double x) -> Vec {
                    const auto s = model::slice_1pdf_over_c(x, n, a);
                    if (!s.valid) return Vec{};
                    const double b = s.b(c);
                    const double f = dens(c, a, b) * s.weight;
                    Vec v = value(x, c, a, b);
                    for (auto& e : v) e *= f;
                    return v;
                },
                xw, icfg);
            t.add(r);
            return r.value;
        };
        auto r = integrate_log_c<N>(middle, box.c, kLinearCFraction * saturation_scale(box, a, n), mcfg, res);
        t.add(r);
        return r.value;
    };
    auto r = quad::integrate_1d_n<N>(outer, box.a, cfg.with_panels(panels_for(box.a.width(), res)));
    t.finish(r);
    return r;
}

// Expectation of value(x, c, a, b) with x = x_n. For n = 0 the joint
// density is integrated directly (x = c).
template <std::size_t N, class D, class V>
IntegralResultN<N> expectation(const D& dens, const SupportBox& box, Period n, V&& value, const QuadratureConfig& cfg,
                               double res) {
    if (n > 0) return transformed_moments<N>(dens, box, n, value, cfg, res);
    using Vec = std::array<double, N>;
    Track t;
    const QuadratureConfig mcfg = cfg.inner();
    const QuadratureConfig icfg = mcfg.inner().with_panels(panels_for(box.b.width(), res));
    auto outer = [&](double a) -> Vec {
        auto middle = [&](double c) -> Vec {
            auto r = quad::integrate_1d_n<N>(
                [&](double b) -> Vec {
                    Vec v = value(c, c, a, b);
                    const double f = dens(c, a, b);
                    for (auto& e : v) e *= f;
                    return v;
                },
                box.b, icfg);
            t.add(r);
            return r.value;
        };
        auto r = quad::integrate_1d_n<N>(middle, box.c, mcfg.with_panels(panels_for(box.c.width(), res)));
        t.add(r);
        return r.value;
    };
    auto r = quad::integrate_1d_n<N>(outer, box.a, cfg.with_panels(panels_for(box.a.width(), res)));
    t.finish(r);
    return r;
}

// Expectation of value(x) against the steady density: outer b, middle x
// over the image of the a-interval, inner c. Needs b bounded away from 0.
template <std::size_t N, class D, class V>
IntegralResultN<N> steady_expectation(const D& dens, const SupportBox& box, V&& value, const QuadratureConfig& cfg,
                                      double res) {
    using Vec = std::array<double, N>;
    Track t;
    const QuadratureConfig mcfg = cfg.inner();
    const QuadratureConfig icfg = mcfg.inner().with_panels(panels_for(box.c.width(), res));
    auto outer = [&](double b) -> Vec {
        auto middle = [&](double x) -> Vec {
            auto r = quad::integrate_1d(
                [&](double c) {
                    const auto tr = model::transform_steady(x, c, b);
                    return dens(c, tr.point.a, b) * tr.jacobian_abs;
                },
                box.c, icfg);
            t.add(r);
            Vec v = value(x);
            for (auto& e : v) e *= r.value;
            return v;
        };
        const Interval xw{(box.a.lo - 1.0) / b, (box.a.hi - 1.0) / b};
        auto r = quad::integrate_1d_n<N>(middle, xw, mcfg.with_panels(panels_for(box.a.width(), res * b)));
        t.add(r);
        return r.value;
    };
    auto r = quad::integrate_1d_n<N>(outer, box.b, cfg.with_panels(panels_for(box.b.width(), res)));
    t.finish(r);
    return r;
}

}  // namespace bhrvt::detail
