// Command-line front end: computes densities, moments and Monte Carlo
// histograms for a preset or a JSON-configured input distribution and writes
// them as CSV.

#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "bhrvt/config.hpp"
#include "bhrvt/csv.hpp"
#include "bhrvt/mc.hpp"
#include "bhrvt/rvt.hpp"
#include "bhrvt/stats.hpp"
#include "bhrvt/validate.hpp"

namespace {

using namespace bhrvt;

struct Flags {
    std::string preset;
    std::string config_path;
    std::string out;
    double rel_tol = 0.0;
    double abs_tol = 0.0;
    std::uint64_t seed = 0;
    std::uint64_t samples = 0;
    std::size_t points = 0;
    std::size_t bins = 0;
    bool serial = false;

    Period n = 0;
    Period n1 = 0;
    Period n2 = 0;
    Period n_max = 0;
    std::vector<Period> periods;
};

struct Run {
    config::RunConfig rc;
    std::string distribution_name;
    std::optional<dist::JointDensity> density;
    Exec exec = Exec::openmp;

    const dist::JointDensity& d() const { return *density; }
    rvt::GridSpec grid() const {
        rvt::GridSpec g = rc.grid.value_or(rvt::GridSpec::automatic_grid());
        g.seed = rc.mc.seed;
        return g;
    }
    csv::RunInfo info(const std::string& command) const { return {command, distribution_name, rc.quadrature, {}}; }
};

Run resolve(const Flags& f, const CLI::App& app) {
    Run run;
    if (!f.config_path.empty()) {
        run.rc = config::load_config(f.config_path);
    } else {
        run.rc.distribution = config::preset_spec(f.preset);
    }
    if (app.count("--rel-tol")) run.rc.quadrature.rel_tol = f.rel_tol;
    if (app.count("--abs-tol")) run.rc.quadrature.abs_tol = f.abs_tol;
    if (app.count("--seed")) run.rc.mc.seed = f.seed;
    if (app.count("--samples")) run.rc.mc.n_samples = f.samples;
    if (app.count("--bins")) run.rc.mc.n_bins = f.bins;
    if (app.count("--points")) {
        rvt::GridSpec g = run.rc.grid.value_or(rvt::GridSpec::automatic_grid());
        g.n_points = f.points;
        run.rc.grid = g;
    }
    if (app.count("--out")) run.rc.output_path = f.out;
    run.rc.quadrature.validate();
    run.rc.mc.validate();
    run.distribution_name = run.rc.distribution->name;
    run.density = config::make_distribution(*run.rc.distribution, run.rc.quadrature);
    run.exec = f.serial ? Exec::serial : Exec::openmp;
    return run;
}

// Writes to --out, or stdout when it is empty or "-".
template <class Fn>
void emit(const Run& run, Fn&& write) {
    const std::string& path = run.rc.output_path;
    if (path.empty() || path == "-") {
        write(std::cout);
        std::cout.flush();
        return;
    }
    std::ofstream os(path, std::ios::binary);
    if (!os) throw std::runtime_error("cannot open output file '" + path + "'");
    write(os);
    if (!os) throw std::runtime_error("failed writing '" + path + "'");
}

std::vector<Period> range_periods(Period n_max) {
    std::vector<Period> p(static_cast<std::size_t>(n_max) + 1);
    for (std::size_t i = 0; i < p.size(); ++i) p[i] = static_cast<Period>(i);
    return p;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Densities and moments of the randomized Beverton-Holt model"};
    app.require_subcommand(1);
    app.fallthrough();  // global flags may follow the subcommand
    Flags f;

    auto* preset = app.add_option("--preset", f.preset, "Built-in input distribution (example1, example2)")
                       ->check(CLI::IsMember({"example1", "example2"}));
    auto* cfg = app.add_option("--config", f.config_path, "JSON run or distribution config")->check(CLI::ExistingFile);
    preset->excludes(cfg);
    cfg->excludes(preset);
    app.add_option("--out", f.out, "Output CSV path (default stdout)");
    app.add_option("--rel-tol", f.rel_tol, "Relative quadrature tolerance")->check(CLI::PositiveNumber);
    app.add_option("--abs-tol", f.abs_tol, "Absolute quadrature tolerance")->check(CLI::PositiveNumber);
    app.add_option("--seed", f.seed, "Monte Carlo seed");
    app.add_option("--samples", f.samples, "Monte Carlo sample count");
    app.add_option("--points", f.points, "Grid points per axis")->check(CLI::Range(2, 100000));
    app.add_option("--bins", f.bins, "Histogram bins");
    app.add_flag("--serial", f.serial, "Run the serial reference path instead of OpenMP");

    auto* pdf1 = app.add_subcommand("pdf1", "1-PDF of X_n on a grid");
    pdf1->add_option("--n", f.n, "Period")->required();
    auto* pdf2 = app.add_subcommand("pdf2", "2-PDF of (X_n1, X_n2) on a grid");
    pdf2->add_option("--n1", f.n1, "First period")->required();
    pdf2->add_option("--n2", f.n2, "Second period")->required();
    auto* steady = app.add_subcommand("steady", "Density of the steady state (A - 1)/B on a grid");
    auto* moments = app.add_subcommand("moments", "Mean and standard deviation for n = 0..n_max and the steady state");
    moments->add_option("--n-max", f.n_max, "Last period")->required();
    auto* cov = app.add_subcommand("cov", "Correlation and covariance over [0, n_max]^2");
    cov->add_option("--n-max", f.n_max, "Last period")->required();
    auto* mc_cmd = app.add_subcommand("mc", "Monte Carlo histograms for n = 0..n_max and the steady state");
    mc_cmd->add_option("--n-max", f.n_max, "Last period")->required();
    auto* validate_cmd = app.add_subcommand("validate", "Cross-check densities and moments against Monte Carlo");
    validate_cmd->add_option("--periods", f.periods, "Periods to check (default 1 5 20)");

    CLI11_PARSE(app, argc, argv);

    try {
        if (f.preset.empty() && f.config_path.empty()) {
            throw CLI::RequiredError("one of --preset or --config");
        }
        if (*pdf2 && f.n1 == f.n2) {
            std::cerr << "error: pdf2 needs n1 != n2; the joint density of X_n with itself is degenerate.\n"
                         "       Use `pdf1 --n "
                      << f.n1 << "` for the density at a single period.\n";
            return 2;
        }
        const Run run = resolve(f, app);
        const auto& d = run.d();
        const auto& q = run.rc.quadrature;

        if (*pdf1) {
            const auto c = rvt::pdf1_curve(f.n, d, run.grid(), q, run.exec);
            emit(run, [&](std::ostream& os) { csv::write_curve(os, c, run.info("pdf1")); });
        } else if (*pdf2) {
            const auto s = rvt::pdf2_surface(f.n1, f.n2, d, run.grid(), q, run.exec);
            emit(run, [&](std::ostream& os) { csv::write_surface(os, s, run.info("pdf2")); });
        } else if (*steady) {
            const auto c = rvt::steady_curve(d, run.grid(), q, run.exec);
            emit(run, [&](std::ostream& os) { csv::write_curve(os, c, run.info("steady")); });
        } else if (*moments) {
            const auto m = stats::moment_series(f.n_max, d, q, run.exec);
            emit(run, [&](std::ostream& os) { csv::write_moments(os, m, run.info("moments")); });
        } else if (*cov) {
            const auto c = stats::covariance_surface(range_periods(f.n_max), d, q, run.exec);
            emit(run, [&](std::ostream& os) { csv::write_covariance(os, c, run.info("cov")); });
        } else if (*mc_cmd) {
            const auto e = mc::simulate_paths(d, f.n_max, run.rc.mc, std::nullopt, run.exec);
            std::vector<csv::LabeledHistogram> hs;
            for (std::size_t k = 0; k < e.periods.size(); ++k)
                hs.push_back({std::to_string(e.periods[k]), mc::empirical_pdf(e.at_period_index(k), run.rc.mc.n_bins)});
            hs.push_back({"steady", mc::empirical_steady(d, run.rc.mc, run.exec)});
            auto info = run.info("mc");
            info.add("samples", std::to_string(run.rc.mc.n_samples)).add("seed", std::to_string(run.rc.mc.seed));
            emit(run, [&](std::ostream& os) { csv::write_histograms(os, hs, info); });
        } else if (*validate_cmd) {
            validate::Options opts;
            if (!f.periods.empty()) opts.periods = f.periods;
            const auto rep = validate::cross_validate(d, q, run.rc.mc, opts, run.exec);
            emit(run, [&](std::ostream& os) { validate::print(os, rep); });
            return rep.all_passed() ? 0 : 1;
        }
    } catch (const CLI::Error& e) {
        return app.exit(e);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return 0;
}
