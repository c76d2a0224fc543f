// Acceptance suite: one PASS/FAIL line per criterion, preceded by indented
// detail lines. Exit status is nonzero if any criterion fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "bhrvt/csv.hpp"
#include "bhrvt/dist.hpp"
#include "bhrvt/mc.hpp"
#include "bhrvt/model.hpp"
#include "bhrvt/rvt.hpp"
#include "bhrvt/stats.hpp"
#include "bhrvt/validate.hpp"

using namespace bhrvt;

namespace {

using Clock = std::chrono::steady_clock;

struct Ctx {
    std::vector<std::string> notes;
    bool ok = true;

    void note(const char* fmt, auto... args) {
        char buf[512];
        std::snprintf(buf, sizeof buf, fmt, args...);
        notes.emplace_back(buf);
    }
    // Records a sub-check; the criterion passes only if all of them do.
    void expect(bool cond, const char* fmt, auto... args) {
        ok = ok && cond;
        char buf[512];
        std::snprintf(buf, sizeof buf, fmt, args...);
        notes.push_back(std::string(cond ? "ok   " : "FAIL ") + buf);
    }
};

int failures = 0;

void criterion(int id, const char* title, const std::function<void(Ctx&)>& body) {
    Ctx ctx;
    const auto t0 = Clock::now();
    try {
        body(ctx);
    } catch (const std::exception& e) {
        ctx.expect(false, "exception: %s", e.what());
    }
    const double secs = std::chrono::duration<double>(Clock::now() - t0).count();
    for (const auto& n : ctx.notes) std::printf("    %s\n", n.c_str());
    std::printf("%s  criterion %d: %s (%.1f s)\n", ctx.ok ? "PASS" : "FAIL", id, title, secs);
    std::fflush(stdout);
    if (!ctx.ok) ++failures;
}

double since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

const dist::JointDensity& preset(int k) {
    static const auto d1 = dist::preset("example1");
    static const auto d2 = dist::preset("example2");
    return k == 1 ? d1 : d2;
}

std::vector<Period> range_periods(Period n_max) {
    std::vector<Period> p;
    for (Period n = 0; n <= n_max; ++n) p.push_back(n);
    return p;
}

void two_routes(Ctx& c) {
    std::mt19937_64 rng(20190101);
    std::uniform_real_distribution<double> uc(0.0, 1.0), ua(1.1, 2.0), ub(0.1, 1.0);
    const auto t0 = Clock::now();
    double worst = 0.0;
    for (int i = 0; i < 10000; ++i) {
        double cv = 0.0;
        while (cv == 0.0) cv = uc(rng);
        const double av = ua(rng), bv = ub(rng);
        for (Period n = 0; n <= 50; ++n) {
            const double it = model::iterate_map(cv, av, bv, n);
            const double cf = model::solution_closed_form(cv, av, bv, n);
            worst = std::max(worst, std::abs(it - cf) / std::abs(cf));
        }
    }
    const double secs = since(t0);
    c.expect(worst <= 1e-12, "max relative gap %.3g over 10^4 draws, n <= 50 (limit 1e-12)", worst);
    c.expect(secs < 1.0, "runtime %.3f s (limit 1 s)", secs);
}

void normalization(Ctx& c) {
    const auto t0 = Clock::now();
    for (int k : {1, 2}) {
        for (Period n : {0u, 1u, 2u, 3u, 5u, 10u, 20u}) {
            const double m = rvt::pdf1_total_mass(n, preset(k));
            c.expect(std::abs(m - 1.0) <= 1e-3, "example%d n=%-2u mass %.10f", k, n, m);
        }
    }
    const double secs = since(t0);
    c.expect(secs < 120.0, "runtime %.1f s (limit 120 s)", secs);
}

void n0_reduction(Ctx& c) {
    // example2: marginal of C by quadrature over (a, b), independent of the
    // transform code path.
    const auto& g = std::get<dist::TruncatedGaussianJoint>(preset(2).impl());
    const auto& box = g.integration_box();
    quad::QuadratureConfig qc;
    qc.rel_tol = 1e-10;
    qc.abs_tol = 1e-12;
    for (int k : {1, 2}) {
        const auto& d = preset(k);
        const Interval r = k == 1 ? Interval{0.0, 1.0} : box.c;
        double worst = 0.0;
        for (int i = 0; i < 50; ++i) {
            const double x = r.lo + (r.hi - r.lo) * (i + 0.5) / 50.0;
            double ref = 1.0;
            if (k == 2) {
                auto q = quad::integrate_2d([&](double a, double b) { return g(x, a, b); }, box.a, box.b, qc);
                quad::require_converged(q, "marginal of C");
                ref = q.value;
            }
            worst = std::max(worst, std::abs(rvt::pdf1_at(x, 0, d) - ref));
        }
        c.expect(worst <= 1e-6, "example%d max |f1(x,0) - f_C(x)| %.3g on 50 points (limit 1e-6)", k, worst);
    }
}

void steady_oracle(Ctx& c) {
    const auto& d = preset(1);
    double worst = 0.0;
    for (int i = 0; i < 100; ++i) {
        const double x = 0.1 + 9.9 * i / 99.0;
        const double ref = x <= 1.0 ? (1.0 - 0.01 / (x * x)) / 1.62 : (1.0 / (x * x) - 0.01) / 1.62;
        worst = std::max(worst, std::abs(rvt::pdf_steady_at(x, d) - ref));
    }
    c.expect(worst <= 1e-6, "max deviation from the piecewise form %.3g on 100 points (limit 1e-6)", worst);
    const double mean = stats::steady_moments(d).mean;
    const double ref = 0.55 * std::log(10.0) / 0.9;
    c.expect(std::abs(mean - ref) <= 1e-3, "steady mean %.10f vs 0.55 ln(10)/0.9 = %.10f", mean, ref);
}

void l1_convergence(Ctx& c) {
    struct Seq {
        int k;
        std::vector<Period> ns;
        Period last;
    };
    for (const Seq& s : {Seq{1, {1, 2, 3, 5, 10, 20}, 20}, Seq{2, {1, 2, 4, 8, 16}, 16}}) {
        double prev = INFINITY;
        bool mono = true;
        std::string trail;
        double at_last = 0.0;
        for (Period n : s.ns) {
            const double l1 = rvt::l1_distance_to_steady(n, preset(s.k));
            mono = mono && l1 <= prev;
            prev = l1;
            char buf[64];
            std::snprintf(buf, sizeof buf, " %u:%.4g", n, l1);
            trail += buf;
            if (n == s.last) at_last = l1;
        }
        c.expect(mono, "example%d L1 nonincreasing:%s", s.k, trail.c_str());
        c.expect(at_last < 0.05, "example%d L1 at n=%u is %.4g (limit 0.05)", s.k, s.last, at_last);
    }
}

void moment_convergence(Ctx& c) {
    for (auto [k, n] : {std::pair{1, Period{50}}, std::pair{2, Period{30}}}) {
        const auto mv = stats::mean_var_at(n, preset(k));
        const auto sm = stats::steady_moments(preset(k));
        const double dm = std::abs(mv.mean - sm.mean);
        const double ds = std::abs(mv.std() - sm.std());
        c.expect(dm < 1e-2, "example%d |E[X_%u] - E[X_inf]| = %.3g (mean %.8f vs %.8f)", k, n, dm, mv.mean,
                 sm.mean);
        c.expect(ds < 1e-2, "example%d |sd[X_%u] - sd[X_inf]| = %.3g (sd %.8f vs %.8f)", k, n, ds, mv.std(),
                 sm.std());
    }
}

void pdf2_structure(Ctx& c) {
    for (int k : {1, 2}) {
        const auto& d = preset(k);
        const Interval r1 = rvt::support_image(d, Period{1});
        const Interval r2 = rvt::support_image(d, Period{2});
        const Interval r{std::min(r1.lo, r2.lo), std::max(r1.hi, r2.hi)};
        const auto g = rvt::GridSpec::uniform_grid(r, 30);
        const auto s12 = rvt::pdf2_surface(1, 2, d, g);
        const auto s21 = rvt::pdf2_surface(2, 1, d, g);
        double asym = 0.0;
        bool nonneg = true;
        for (std::size_t i = 0; i < 30; ++i)
            for (std::size_t j = 0; j < 30; ++j) {
                asym = std::max(asym, std::abs(s12.at(i, j) - s21.at(j, i)));
                nonneg = nonneg && s12.at(i, j) >= 0.0;
            }
        c.expect(asym <= 1e-10 && nonneg, "example%d swap asymmetry %.3g on 30x30 (limit 1e-10)", k, asym);

        double worst = 0.0;
        for (int i = 0; i < 20; ++i) {
            const double x1 = r1.lo + r1.width() * (i + 0.5) / 20.0;
            worst = std::max(worst, std::abs(rvt::pdf2_marginal(x1, 1, 2, d) - rvt::pdf1_at(x1, 1, d)));
        }
        c.expect(worst <= 1e-3, "example%d max |int f2 dx2 - f1| %.3g on 20 points (limit 1e-3)", k, worst);
        const double mass = rvt::pdf2_total_mass(1, 2, d);
        c.expect(std::abs(mass - 1.0) <= 5e-3, "example%d double integral %.8f", k, mass);
    }
}

void covariance(Ctx& c) {
    const auto t0 = Clock::now();
    for (auto [k, n_max] : {std::pair{1, Period{20}}, std::pair{2, Period{16}}}) {
        const auto& d = preset(k);
        const auto s = stats::covariance_surface(range_periods(n_max), d);
        double asym = 0.0, diag = 0.0, cs = -INFINITY;
        for (std::size_t i = 0; i < s.size(); ++i) {
            // Variance from the 1-PDF itself: integral of (x - m)^2 f1(x, n).
            const auto lit = stats::mean_var_from_density(s.periods[i], d);
            diag = std::max(diag, std::abs(s.cov_at(i, i) - lit.variance));
            for (std::size_t j = 0; j < s.size(); ++j) {
                asym = std::max(asym, std::abs(s.cov_at(i, j) - s.cov_at(j, i)));
                cs = std::max(cs, std::abs(s.cov_at(i, j)) - std::sqrt(s.cov_at(i, i) * s.cov_at(j, j)));
            }
        }
        c.expect(asym <= 1e-8, "example%d [0,%u]^2 asymmetry %.3g (limit 1e-8)", k, n_max, asym);
        c.expect(diag <= 1e-6, "example%d diagonal vs 1-PDF variance %.3g (limit 1e-6)", k, diag);
        c.expect(cs <= 0.0, "example%d max |C| - sd sd = %.3g (must be <= 0)", k, cs);
    }
    const double secs = since(t0);
    c.expect(secs < 600.0, "runtime %.1f s (limit 600 s)", secs);
}

void mc_cross_validation(Ctx& c) {
    mc::McConfig mcfg;
    mcfg.n_samples = 1'000'000;
    for (int k : {1, 2}) {
        const auto rep = validate::cross_validate(preset(k), {}, mcfg);
        for (const auto& ch : rep.checks)
            c.expect(ch.passed, "example%d %s (%s)", k, ch.name.c_str(), ch.detail.c_str());
    }
}

std::string render(int k) {
    std::ostringstream os;
    const auto& d = preset(k);
    mc::McConfig mcfg;
    mcfg.n_samples = 200'000;
    const csv::RunInfo info{"determinism", d.name(), {}, {}};
    csv::write_curve(os, rvt::pdf1_curve(5, d, rvt::GridSpec::automatic_grid(60)), info);
    csv::write_curve(os, rvt::steady_curve(d, rvt::GridSpec::automatic_grid(60)), info);
    csv::write_moments(os, stats::moment_series(4, d), info);
    const auto e = mc::simulate_paths(d, 5, mcfg);
    std::vector<csv::LabeledHistogram> hs;
    for (std::size_t i = 0; i < e.periods.size(); ++i)
        hs.push_back({std::to_string(e.periods[i]), mc::empirical_pdf(e.at_period_index(i), 50)});
    hs.push_back({"steady", mc::empirical_steady(d, mcfg)});
    csv::write_histograms(os, hs, info);
    return os.str();
}

void determinism(Ctx& c) {
    for (int k : {1, 2}) {
        const std::string a = render(k);
        const std::string b = render(k);
        c.expect(a == b && !a.empty(), "example%d repeated CSV output identical (%zu bytes)", k, a.size());
    }
}

}  // namespace

int main() {
    criterion(1, "closed form equals iterated recurrence", two_routes);
    criterion(2, "1-PDF normalization", normalization);
    criterion(3, "n = 0 reduces to the marginal of C", n0_reduction);
    criterion(4, "steady-state analytic oracle (example1)", steady_oracle);
    criterion(5, "L1 convergence to the steady state", l1_convergence);
    criterion(6, "moment convergence", moment_convergence);
    criterion(7, "2-PDF symmetry, marginal and mass", pdf2_structure);
    criterion(8, "covariance surface", covariance);
    criterion(9, "Monte Carlo cross-validation", mc_cross_validation);
    criterion(10, "determinism of CSV output", determinism);
    std::printf("%s: %d of 10 criteria failed\n", failures ? "FAIL" : "PASS", failures);
    return failures ? 1 : 0;
}
