#include "bhrvt/rvt.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include "bhrvt/mc.hpp"
#include "bhrvt/model.hpp"
#include "kernels.hpp"

namespace bhrvt::rvt {

namespace {

using quad::IntegralResult;
using quad::QuadratureConfig;

// Initial panels for an integral over x spanning `fraction` of the full
// range of the density.
QuadratureConfig x_config(const QuadratureConfig& cfg, const dist::JointDensity& d, double fraction = 1.0) {
    const int full = std::isfinite(d.resolution()) ? 48 : 16;
    QuadratureConfig c = cfg.with_panels(static_cast<int>(std::ceil(full * std::clamp(fraction, 0.0, 1.0))));
    c.max_depth += kExtraDepthOverX;
    return c;
}

double fraction_of(Interval part, Interval whole) {
    return std::isfinite(whole.width()) && whole.width() > 0.0 ? part.width() / whole.width() : 1.0;
}

std::vector<double> edges_in(std::vector<double> pts, Interval range) {
    return detail::sorted_edges(pts, range);
}

template <class Fn>
std::vector<double> eval_grid(const std::vector<double>& x, Exec exec, Fn&& fn) {
    std::vector<double> out(x.size());
    for_each_index(x.size(), exec, [&](std::size_t i) { out[i] = fn(x[i]); });
    return out;
}

void check_grid(const std::vector<double>& x) {
    if (x.empty()) throw std::invalid_argument("grid has no points");
    for (std::size_t i = 1; i < x.size(); ++i)
        if (!(x[i] > x[i - 1])) throw std::invalid_argument("grid points must be strictly increasing");
}

// x2 values where f_2(x1, n1; ., n2) may kink: images at period n2 of the
// corners of the (a, b) region that is consistent with X_n1 = x1.
std::vector<double> conditional_breakpoints(double x1, Period n1, Period n2, const dist::SupportBox& box) {
    std::vector<std::pair<double, double>> corners;
    for (double a : {box.a.lo, box.a.hi})
        for (double b : {box.b.lo, box.b.hi}) corners.emplace_back(a, b);
    if (n1 > 0 && x1 > 0.0) {
        for (double ce : {box.c.lo, box.c.hi}) {
            if (!(ce > 0.0)) continue;
            for (double a : {box.a.lo, box.a.hi}) {
                const auto s = model::slice_1pdf_over_c(x1, n1, a);
                if (s.valid && box.b.contains(s.b(ce))) corners.emplace_back(a, s.b(ce));
            }
            for (double b : {box.b.lo, box.b.hi})
                if (const auto a = model::solve_growth(x1, n1, ce, b, box.a)) corners.emplace_back(*a, b);
        }
    }
    std::vector<double> out;
    for (const auto& [a, b] : corners) {
        double c = x1;
        if (n1 > 0) {
            const auto t = model::transform_1pdf(x1, n1, a, b);
            if (!t.valid) continue;
            c = t.point.c;
        }
        if (c > 0.0) out.push_back(model::closed_form_bound(c, a, b, n2));
    }
    return out;
}

}  // namespace

GridSpec GridSpec::automatic_grid(std::size_t n_points) {
    GridSpec g;
    g.n_points = n_points;
    return g;
}

GridSpec GridSpec::uniform_grid(Interval range, std::size_t n_points) {
    GridSpec g;
    g.kind = Kind::uniform;
    g.range = range;
    g.n_points = n_points;
    return g;
}

GridSpec GridSpec::explicit_grid(std::vector<double> values) {
    GridSpec g;
    g.kind = Kind::points;
    g.n_points = values.size();
    g.values = std::move(values);
    return g;
}

Interval support_image(const dist::JointDensity& d, std::optional<Period> n) {
    const auto& box = d.integration_box();
    if (!n) {
        const double hi = box.b.lo > 0.0 ? (box.a.hi - 1.0) / box.b.lo : INFINITY;
        return {(box.a.lo - 1.0) / box.b.hi, hi};
    }
    return {model::closed_form_bound(box.c.lo, box.a.lo, box.b.hi, *n),
            model::closed_form_bound(box.c.hi, box.a.hi, box.b.lo, *n)};
}

std::vector<double> pdf1_breakpoints(const dist::JointDensity& d, Period n) {
    const auto& box = d.integration_box();
    std::vector<double> pts;
    for (double c : {box.c.lo, box.c.hi})
        for (double a : {box.a.lo, box.a.hi})
            for (double b : {box.b.lo, box.b.hi}) pts.push_back(model::closed_form_bound(c, a, b, n));
    std::sort(pts.begin(), pts.end());
    return pts;
}

std::vector<double> steady_breakpoints(const dist::JointDensity& d) {
    const auto& box = d.integration_box();
    std::vector<double> pts;
    for (double a : {box.a.lo, box.a.hi})
        for (double b : {box.b.lo, box.b.hi})
            if (b > 0.0) pts.push_back((a - 1.0) / b);
    std::sort(pts.begin(), pts.end());
    return pts;
}

Interval auto_range(const dist::JointDensity& d, std::optional<Period> n, const GridSpec& spec) {
    mc::McConfig mcfg;
    mcfg.n_samples = spec.pilot_samples;
    mcfg.seed = spec.seed;
    std::vector<double> samples;
    if (n) {
        const auto e = mc::simulate_paths(d, *n, mcfg, std::vector<Period>{*n});
        const auto v = e.period(*n);
        samples.assign(v.begin(), v.end());
    } else {
        samples = mc::steady_samples(d, mcfg);
    }
    const double lo = mc::quantile(samples, 0.0005);
    const double hi = mc::quantile(samples, 0.9995);
    double pad = 0.1 * (hi - lo);
    if (!(pad > 0.0)) pad = 0.5 * std::max(std::abs(lo), 1e-3);
    const Interval image = support_image(d, n);
    Interval r{std::max(lo - pad, image.lo), std::min(hi + pad, image.hi)};
    if (r.empty()) r = image;
    return r;
}

std::vector<double> resolve_grid(const GridSpec& spec, const dist::JointDensity& d, std::optional<Period> n) {
    if (spec.kind == GridSpec::Kind::points) {
        check_grid(spec.values);
        return spec.values;
    }
    if (spec.n_points < 2) throw std::invalid_argument("a grid needs at least 2 points");
    const Interval r = spec.kind == GridSpec::Kind::uniform ? spec.range : auto_range(d, n, spec);
    if (r.empty() || !std::isfinite(r.width())) throw std::invalid_argument("grid range must be finite with lo < hi");
    std::vector<double> x(spec.n_points);
    const double step = r.width() / static_cast<double>(spec.n_points - 1);
    for (std::size_t i = 0; i < x.size(); ++i) x[i] = r.lo + step * static_cast<double>(i);
    x.back() = r.hi;
    return x;
}

double trapezoid(const std::vector<double>& x, const std::vector<double>& f) {
    double s = 0.0;
    for (std::size_t i = 1; i < x.size(); ++i) s += 0.5 * (f[i] + f[i - 1]) * (x[i] - x[i - 1]);
    return s;
}

double pdf1_at(double x, Period n, const dist::JointDensity& d, const QuadratureConfig& cfg) {
    const auto r = d.visit([&](const auto& impl) {
        return detail::pdf1_value(impl, d.integration_box(), x, n, cfg, d.resolution());
    });
    quad::require_converged(r, "1-PDF");
    return r.value;
}

double pdf1_at_over_ab(double x, Period n, const dist::JointDensity& d, const QuadratureConfig& cfg) {
    const auto r = d.visit([&](const auto& impl) {
        return detail::pdf1_value_over_ab(impl, d.integration_box(), x, n, cfg, d.resolution());
    });
    quad::require_converged(r, "1-PDF over (a, b)");
    return r.value;
}

DensityCurve pdf1_curve(Period n, const dist::JointDensity& d, const GridSpec& grid, const QuadratureConfig& cfg,
                        Exec exec) {
    DensityCurve out;
    out.period = n;
    out.x = resolve_grid(grid, d, n);
    out.f = eval_grid(out.x, exec, [&](double x) { return pdf1_at(x, n, d, cfg); });
    out.mass = trapezoid(out.x, out.f);
    return out;
}

double pdf2_at(double x1, Period n1, double x2, Period n2, const dist::JointDensity& d, const QuadratureConfig& cfg) {
    if (n1 == n2) {
        throw std::invalid_argument("2-PDF needs n1 != n2; for equal periods use the 1-PDF (pdf1)");
    }
    // The integrand is symmetric under swapping the two (x, n) pairs; fixing
    // the order makes that symmetry exact in floating point.
    if (n1 > n2) {
        std::swap(x1, x2);
        std::swap(n1, n2);
    }
    const auto r = d.visit([&](const auto& impl) {
        return detail::pdf2_value(impl, d.integration_box(), x1, n1, x2, n2, cfg, d.resolution());
    });
    quad::require_converged(r, "2-PDF");
    return r.value;
}

DensitySurface pdf2_surface(Period n1, Period n2, const dist::JointDensity& d, const GridSpec& grid1,
                            const GridSpec& grid2, const QuadratureConfig& cfg, Exec exec) {
    if (n1 == n2) {
        throw std::invalid_argument("2-PDF needs n1 != n2; for equal periods use the 1-PDF (pdf1)");
    }
    DensitySurface s;
    s.n1 = n1;
    s.n2 = n2;
    s.x1 = resolve_grid(grid1, d, n1);
    s.x2 = resolve_grid(grid2, d, n2);
    const std::size_t m = s.x2.size();
    s.values.assign(s.x1.size() * m, 0.0);
    for_each_index(s.values.size(), exec,
                   [&](std::size_t k) { s.values[k] = pdf2_at(s.x1[k / m], n1, s.x2[k % m], n2, d, cfg); });
    std::vector<double> rows(s.x1.size());
    for (std::size_t i = 0; i < s.x1.size(); ++i) {
        rows[i] = trapezoid(s.x2, std::vector<double>(s.values.begin() + static_cast<long>(i * m),
                                                      s.values.begin() + static_cast<long>((i + 1) * m)));
    }
    s.mass = trapezoid(s.x1, rows);
    return s;
}

DensitySurface pdf2_surface(Period n1, Period n2, const dist::JointDensity& d, const GridSpec& grid,
                            const QuadratureConfig& cfg, Exec exec) {
    return pdf2_surface(n1, n2, d, grid, grid, cfg, exec);
}

double pdf2_marginal(double x1, Period n1, Period n2, const dist::JointDensity& d, const QuadratureConfig& cfg) {
    if (n1 == n2) throw std::invalid_argument("2-PDF needs n1 != n2; for equal periods use the 1-PDF (pdf1)");
    auto pts = pdf1_breakpoints(d, n2);
    const auto more = conditional_breakpoints(x1, n1, n2, d.integration_box());
    pts.insert(pts.end(), more.begin(), more.end());
    const QuadratureConfig icfg = cfg.inner();
    const auto r = quad::integrate_piecewise([&](double x2) { return pdf2_at(x1, n1, x2, n2, d, icfg); },
                                             edges_in(pts, support_image(d, n2)), x_config(cfg, d));
    quad::require_converged(r, "2-PDF marginal");
    return r.value;
}

double pdf2_total_mass(Period n1, Period n2, const dist::JointDensity& d, const QuadratureConfig& cfg) {
    const QuadratureConfig icfg = cfg.inner();
    const auto edges = edges_in(pdf1_breakpoints(d, n1), support_image(d, n1));
    const auto r = quad::integrate_piecewise([&](double x1) { return pdf2_marginal(x1, n1, n2, d, icfg); }, edges,
                                             x_config(cfg, d));
    quad::require_converged(r, "2-PDF mass");
    return r.value;
}

double pdf_steady_at(double x, const dist::JointDensity& d, const QuadratureConfig& cfg) {
    const auto r = d.visit([&](const auto& impl) {
        return detail::steady_value(impl, d.integration_box(), x, cfg, d.resolution());
    });
    quad::require_converged(r, "steady-state PDF");
    return r.value;
}

DensityCurve steady_curve(const dist::JointDensity& d, const GridSpec& grid, const QuadratureConfig& cfg, Exec exec) {
    DensityCurve out;
    out.x = resolve_grid(grid, d, std::nullopt);
    out.f = eval_grid(out.x, exec, [&](double x) { return pdf_steady_at(x, d, cfg); });
    out.mass = trapezoid(out.x, out.f);
    return out;
}

IntegralResult integrate_pdf1(Period n, const dist::JointDensity& d, Interval range, const QuadratureConfig& cfg) {
    const QuadratureConfig icfg = cfg.inner();
    const double res = d.resolution();
    const auto& box = d.integration_box();
    detail::Track t;
    auto f = [&](double x) {
        const auto r = d.visit([&](const auto& impl) { return detail::pdf1_value(impl, box, x, n, icfg, res); });
        t.add(r);
        return r.value;
    };
    auto r = quad::integrate_piecewise(f, edges_in(pdf1_breakpoints(d, n), range),
                                       x_config(cfg, d, fraction_of(range, support_image(d, n))));
    t.finish(r);
    return r;
}

IntegralResult integrate_steady(const dist::JointDensity& d, Interval range, const QuadratureConfig& cfg) {
    const QuadratureConfig icfg = cfg.inner();
    const double res = d.resolution();
    const auto& box = d.integration_box();
    detail::Track t;
    auto f = [&](double x) {
        const auto r = d.visit([&](const auto& impl) { return detail::steady_value(impl, box, x, icfg, res); });
        t.add(r);
        return r.value;
    };
    auto r = quad::integrate_piecewise(f, edges_in(steady_breakpoints(d), range),
                                       x_config(cfg, d, fraction_of(range, support_image(d, std::nullopt))));
    t.finish(r);
    return r;
}

double pdf1_total_mass(Period n, const dist::JointDensity& d, const QuadratureConfig& cfg) {
    const auto r = integrate_pdf1(n, d, support_image(d, n), cfg);
    quad::require_converged(r, "1-PDF mass");
    return r.value;
}

double l1_distance_to_steady(Period n, const dist::JointDensity& d, const QuadratureConfig& cfg) {
    const Interval a = support_image(d, n);
    const Interval b = support_image(d, std::nullopt);
    if (!std::isfinite(b.hi)) throw std::domain_error("steady-state range is unbounded (b reaches 0)");
    const Interval range{std::min(a.lo, b.lo), std::max(a.hi, b.hi)};
    auto pts = pdf1_breakpoints(d, n);
    const auto sp = steady_breakpoints(d);
    pts.insert(pts.end(), sp.begin(), sp.end());

    const QuadratureConfig icfg = cfg.inner();
    const double res = d.resolution();
    const auto& box = d.integration_box();
    detail::Track t;
    auto f = [&](double x) {
        return d.visit([&](const auto& impl) {
            const auto p = detail::pdf1_value(impl, box, x, n, icfg, res);
            const auto s = detail::steady_value(impl, box, x, icfg, res);
            t.add(p);
            t.add(s);
            return std::abs(p.value - s.value);
        });
    };
    auto r = quad::integrate_piecewise(f, edges_in(pts, range), x_config(cfg, d));
    t.finish(r);
    quad::require_converged(r, "L1 distance");
    return r.value;
}

}  // namespace bhrvt::rvt
