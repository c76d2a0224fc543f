#include "bhrvt/validate.hpp"

#include <cmath>
#include <cstdio>
#include <ostream>

#include "bhrvt/rvt.hpp"
#include "bhrvt/stats.hpp"

namespace bhrvt::validate {

namespace {

std::string fmt(const char* f, double a, double b = 0.0, double c = 0.0) {
    char buf[160];
    std::snprintf(buf, sizeof buf, f, a, b, c);
    return buf;
}

double bin_probability(const quad::IntegralResult& r) {
    quad::require_converged(r, "bin probability");
    return r.value;
}

Check bins_check(const std::string& name, const BinComparison& b, const Options& o) {
    return {name, b.fraction() >= o.min_bin_fraction,
            std::to_string(b.within) + "/" + std::to_string(b.bins) + " bins within " + fmt("%g", o.n_se) +
                " SE, max |z| " + fmt("%.2f", b.max_abs_z)};
}

Check moment_check(const std::string& name, double analytic, double sample, double se, double n_se) {
    const double z = se > 0.0 ? (analytic - sample) / se : (analytic == sample ? 0.0 : INFINITY);
    return {name, std::abs(z) <= n_se, fmt("analytic %.8g, MC %.8g, z %.2f", analytic, sample, z)};
}

}  // namespace

bool Report::all_passed() const {
    for (const auto& c : checks)
        if (!c.passed) return false;
    return !checks.empty();
}

BinComparison compare_pdf1(Period n, const dist::JointDensity& d, const mc::EmpiricalDensity& h,
                           const quad::QuadratureConfig& cfg, double n_se, Exec exec) {
    return compare_histogram(
        h, [&](double lo, double hi) { return bin_probability(rvt::integrate_pdf1(n, d, {lo, hi}, cfg)); }, n_se,
        exec);
}

BinComparison compare_steady(const dist::JointDensity& d, const mc::EmpiricalDensity& h,
                             const quad::QuadratureConfig& cfg, double n_se, Exec exec) {
    return compare_histogram(
        h, [&](double lo, double hi) { return bin_probability(rvt::integrate_steady(d, {lo, hi}, cfg)); }, n_se,
        exec);
}

Report cross_validate(const dist::JointDensity& d, const quad::QuadratureConfig& cfg, const mc::McConfig& mcfg,
                      const Options& opts, Exec exec) {
    Report rep;
    rep.distribution = d.name();
    Period n_max = 0;
    for (Period n : opts.periods) n_max = std::max(n_max, n);
    const auto e = mc::simulate_paths(d, n_max, mcfg, opts.periods, exec);
    rep.checks.push_back({"iterate vs closed form", e.max_route_discrepancy <= opts.route_tolerance,
                          fmt("max relative gap %.3g", e.max_route_discrepancy)});

    for (Period n : e.periods) {
        const auto values = e.period(n);
        const std::string tag = "X_" + std::to_string(n);
        const auto h = mc::empirical_pdf(values, mcfg.n_bins);
        rep.checks.push_back(bins_check(tag + " density", compare_pdf1(n, d, h, cfg, opts.n_se, exec), opts));
        const auto mv = stats::mean_var_at(n, d, cfg);
        const auto m = mc::mc_moments(values);
        rep.checks.push_back(moment_check(tag + " mean", mv.mean, m.mean, m.mean_stderr, opts.n_se));
        rep.checks.push_back(moment_check(tag + " std", mv.std(), m.std, m.std_stderr, opts.n_se));
    }

    const auto steady = mc::steady_samples(d, mcfg, exec);
    const auto hs = mc::empirical_pdf(steady, mcfg.n_bins);
    rep.checks.push_back(bins_check("X_inf density", compare_steady(d, hs, cfg, opts.n_se, exec), opts));
    const auto sm = stats::steady_moments(d, cfg);
    const auto m = mc::mc_moments(steady);
    rep.checks.push_back(moment_check("X_inf mean", sm.mean, m.mean, m.mean_stderr, opts.n_se));
    rep.checks.push_back(moment_check("X_inf std", sm.std(), m.std, m.std_stderr, opts.n_se));
    return rep;
}

void print(std::ostream& os, const Report& r) {
    for (const auto& c : r.checks)
        os << (c.passed ? "PASS " : "FAIL ") << r.distribution << ": " << c.name << " (" << c.detail << ")\n";
    os << (r.all_passed() ? "all checks passed" : "some checks FAILED") << " for " << r.distribution << '\n';
}

}  // namespace bhrvt::validate
