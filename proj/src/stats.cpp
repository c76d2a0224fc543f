#include "bhrvt/stats.hpp"

#include <array>
#include <cmath>
#include <stdexcept>
#include <string>

#include "bhrvt/model.hpp"
#include "bhrvt/rvt.hpp"
#include "kernels.hpp"

namespace bhrvt::stats {

namespace {

using quad::QuadratureConfig;

template <std::size_t N, class V>
std::array<double, N> expect(Period n, const dist::JointDensity& d, const QuadratureConfig& cfg, V&& value,
                             const char* what) {
    const auto r = d.visit([&](const auto& impl) {
        return detail::expectation<N>(impl, d.integration_box(), n, value, cfg, d.resolution());
    });
    if (!r.converged) {
        double err = 0.0;
        for (double e : r.error_estimate) err = std::max(err, e);
        throw quad::QuadratureError(what, err);
    }
    return r.value;
}

double checked_variance(double v, const std::string& what) {
    if (v < -kNegativeVarianceTolerance) {
        throw std::logic_error(what + ": variance " + std::to_string(v) + " is negative beyond tolerance");
    }
    return std::max(v, 0.0);
}

}  // namespace

double MeanVar::std() const { return std::sqrt(variance); }

double mean_at(Period n, const dist::JointDensity& d, const QuadratureConfig& cfg) {
    return expect<1>(n, d, cfg, [](double x, double, double, double) { return std::array<double, 1>{x}; },
                     "mean")[0];
}

double covariance_at(Period n1, double mean1, Period n2, double mean2, const dist::JointDensity& d,
                     const QuadratureConfig& cfg) {
    if (n1 > n2) {
        std::swap(n1, n2);
        std::swap(mean1, mean2);
    }
    return expect<1>(
        n2, d, cfg,
        [&](double x, double c, double a, double b) {
            const double x1 = n1 == n2 ? x : model::closed_form_bound(c, a, b, n1);
            return std::array<double, 1>{(x1 - mean1) * (x - mean2)};
        },
        "covariance")[0];
}

MeanVar mean_var_at(Period n, const dist::JointDensity& d, const QuadratureConfig& cfg) {
    MeanVar out;
    out.mean = mean_at(n, d, cfg);
    out.variance = checked_variance(covariance_at(n, out.mean, n, out.mean, d, cfg), "X_" + std::to_string(n));
    return out;
}

MeanVar mean_var_from_density(Period n, const dist::JointDensity& d, const QuadratureConfig& cfg) {
    const Interval range = rvt::support_image(d, n);
    const auto edges = detail::sorted_edges(rvt::pdf1_breakpoints(d, n), range);
    QuadratureConfig xcfg = cfg.with_panels(std::isfinite(d.resolution()) ? 48 : 16);
    xcfg.max_depth += rvt::kExtraDepthOverX;
    const QuadratureConfig icfg = cfg.inner();
    detail::Track t;
    auto f = [&](double x) -> std::array<double, 3> {
        const auto r = d.visit([&](const auto& impl) {
            return detail::pdf1_value(impl, d.integration_box(), x, n, icfg, d.resolution());
        });
        t.add(r);
        return {r.value, x * r.value, x * x * r.value};
    };
    auto r = quad::integrate_piecewise_n<3>(f, edges, xcfg);
    t.finish(r);
    if (!r.converged) throw quad::QuadratureError("moments from the 1-PDF", r.error_estimate[1]);
    MeanVar out;
    out.mean = r.value[1] / r.value[0];
    out.variance = checked_variance(r.value[2] / r.value[0] - out.mean * out.mean, "X_" + std::to_string(n));
    return out;
}

MeanVar steady_moments(const dist::JointDensity& d, const QuadratureConfig& cfg) {
    const auto& box = d.integration_box();
    if (!(box.b.lo > 0.0)) throw std::domain_error("steady-state moments need b bounded away from 0");
    auto run = [&](auto&& value, const char* what) {
        const auto r = d.visit([&](const auto& impl) {
            return detail::steady_expectation<1>(impl, box, value, cfg, d.resolution());
        });
        if (!r.converged) throw quad::QuadratureError(what, r.error_estimate[0]);
        return r.value[0];
    };
    MeanVar out;
    out.mean = run([](double x) { return std::array<double, 1>{x}; }, "steady mean");
    const double m = out.mean;
    out.variance = checked_variance(
        run([m](double x) { return std::array<double, 1>{(x - m) * (x - m)}; }, "steady variance"), "X_inf");
    return out;
}

double correlation_at(Period n1, Period n2, const dist::JointDensity& d, const QuadratureConfig& cfg) {
    if (n1 == n2) {
        throw std::invalid_argument("correlation_at needs n1 != n2; the diagonal is the second moment of X_n");
    }
    if (n1 > n2) std::swap(n1, n2);
    return expect<1>(
        n2, d, cfg,
        [n1](double x, double c, double a, double b) {
            return std::array<double, 1>{x * model::closed_form_bound(c, a, b, n1)};
        },
        "correlation")[0];
}

MomentSeries moment_series(Period n_max, const dist::JointDensity& d, const QuadratureConfig& cfg, Exec exec) {
    MomentSeries s;
    s.entries.resize(static_cast<std::size_t>(n_max) + 1);
    for_each_index(s.entries.size(), exec, [&](std::size_t i) {
        const auto n = static_cast<Period>(i);
        const MeanVar mv = mean_var_at(n, d, cfg);
        s.entries[i] = {n, mv.mean, mv.std()};
    });
    const MeanVar st = steady_moments(d, cfg);
    s.steady_mean = st.mean;
    s.steady_std = st.std();
    return s;
}

CovarianceSurface covariance_surface(const std::vector<Period>& periods, const dist::JointDensity& d,
                                     const QuadratureConfig& cfg, Exec exec) {
    if (periods.empty()) throw std::invalid_argument("covariance surface needs at least one period");
    CovarianceSurface s;
    s.periods = periods;
    const std::size_t m = periods.size();
    s.mean.resize(m);
    for_each_index(m, exec, [&](std::size_t i) { s.mean[i] = mean_at(periods[i], d, cfg); });

    std::vector<std::pair<std::size_t, std::size_t>> upper;
    for (std::size_t i = 0; i < m; ++i)
        for (std::size_t j = i; j < m; ++j) upper.emplace_back(i, j);
    std::vector<double> cov_upper(upper.size());
    for_each_index(upper.size(), exec, [&](std::size_t k) {
        const auto [i, j] = upper[k];
        double c = covariance_at(periods[i], s.mean[i], periods[j], s.mean[j], d, cfg);
        if (periods[i] == periods[j]) c = checked_variance(c, "X_" + std::to_string(periods[i]));
        cov_upper[k] = c;
    });

    s.cov.assign(m * m, 0.0);
    s.gamma.assign(m * m, 0.0);
    for (std::size_t k = 0; k < upper.size(); ++k) {
        const auto [i, j] = upper[k];
        const double c = cov_upper[k];
        const double g = c + s.mean[i] * s.mean[j];
        s.cov[i * m + j] = s.cov[j * m + i] = c;
        s.gamma[i * m + j] = s.gamma[j * m + i] = g;
    }
    return s;
}

}  // namespace bhrvt::stats
