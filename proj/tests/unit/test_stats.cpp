#include <cmath>

#include "bhrvt/dist.hpp"
#include "bhrvt/mc.hpp"
#include "bhrvt/rvt.hpp"
#include "bhrvt/stats.hpp"
#include "doctest.h"

using namespace bhrvt;

namespace {

const dist::JointDensity& ex1() {
    static const auto d = dist::preset("example1");
    return d;
}

const double kSteadyMean = 0.55 * std::log(10.0) / 0.9;

}  // namespace

TEST_CASE("moments at n = 0 are those of U[0, 1]") {
    const auto mv = stats::mean_var_at(0, ex1());
    CHECK(std::abs(mv.mean - 0.5) < 1e-10);
    CHECK(std::abs(mv.variance - 1.0 / 12.0) < 1e-10);
}

TEST_CASE("moments match the triple integral of x_n (scipy)") {
    auto mv = stats::mean_var_at(1, ex1());
    CHECK(mv.mean == doctest::Approx(0.5819085489689907).epsilon(1e-8));
    CHECK(mv.variance == doctest::Approx(0.10633702320883093).epsilon(1e-7));
    mv = stats::mean_var_at(5, ex1());
    CHECK(mv.mean == doctest::Approx(1.0261406669930127).epsilon(1e-8));
    CHECK(mv.variance == doctest::Approx(0.7228394823115627).epsilon(1e-7));
    CHECK(stats::mean_at(5, ex1()) == mv.mean);
}

TEST_CASE("moments from the 1-PDF agree with the reordered integral") {
    for (Period n : {1u, 3u, 8u}) {
        CAPTURE(n);
        const auto a = stats::mean_var_at(n, ex1());
        const auto b = stats::mean_var_from_density(n, ex1());
        CHECK(std::abs(a.mean - b.mean) < 1e-6);
        CHECK(std::abs(a.variance - b.variance) < 1e-6);
    }
}

TEST_CASE("steady moments") {
    const auto sm = stats::steady_moments(ex1());
    CHECK(std::abs(sm.mean - kSteadyMean) < 1e-9);
    CHECK(sm.variance == doctest::Approx(1.7199701500991162).epsilon(1e-8));

    mc::McConfig big;
    big.n_samples = 10'000'000;
    const auto m = mc::mc_moments(mc::steady_samples(ex1(), big));
    CHECK(std::abs(m.mean - sm.mean) <= 3.0 * m.mean_stderr);

    auto b0 = ex1().support();
    b0.b.lo = 0.0;
    const dist::JointDensity reaches_zero(dist::IndependentUniformJoint(b0), "b0");
    CHECK_THROWS_AS(stats::steady_moments(reaches_zero), std::domain_error);
}

TEST_CASE("steady mean of a distribution concentrated at (a, b) = (2, 1)") {
    const dist::Vec3 mu{0.5, 2.0, 1.0};
    const dist::Mat3 sigma{{{1e-4, 0.0, 0.0}, {0.0, 1e-6, 0.0}, {0.0, 0.0, 1e-6}}};
    const dist::SupportBox box{{0.0, 1.0}, {1.9, 2.1}, {0.9, 1.1}};
    const dist::JointDensity d(dist::TruncatedGaussianJoint(mu, sigma, box), "narrow");
    CHECK(std::abs(stats::steady_moments(d).mean - 1.0) < 1e-5);
}

TEST_CASE("moments approach the steady state") {
    const auto sm = stats::steady_moments(ex1());
    const auto mv = stats::mean_var_at(50, ex1());
    CHECK(std::abs(mv.mean - sm.mean) < 1e-2);
    CHECK(std::abs(mv.std() - sm.std()) < 1e-2);
}

TEST_CASE("correlation matches the triple integral (scipy)") {
    CHECK(stats::correlation_at(1, 2, ex1()) == doctest::Approx(0.5302445168886248).epsilon(1e-8));
    CHECK(stats::correlation_at(3, 7, ex1()) == doctest::Approx(1.4746422362250446).epsilon(1e-8));
    CHECK(std::abs(stats::correlation_at(1, 2, ex1()) - stats::correlation_at(2, 1, ex1())) < 1e-6);
    CHECK_THROWS_AS(stats::correlation_at(4, 4, ex1()), std::invalid_argument);
}

TEST_CASE("correlation agrees with Monte Carlo") {
    const auto e = mc::simulate_paths(ex1(), 2, mc::McConfig{});
    const auto m = mc::mc_cross_moment(e, 1, 2);
    CHECK(std::abs(stats::correlation_at(1, 2, ex1()) - m.mean) <= 4.0 * m.mean_stderr);
}

TEST_CASE("diagonal second moment equals E[X_n^2] from the 1-PDF") {
    const Period n = 4;
    const double m = stats::mean_at(n, ex1());
    const double gamma = stats::covariance_at(n, m, n, m, ex1()) + m * m;
    const auto lit = stats::mean_var_from_density(n, ex1());
    CHECK(std::abs(gamma - (lit.variance + lit.mean * lit.mean)) < 1e-6);
}

TEST_CASE("covariance surface invariants") {
    const std::vector<Period> periods{0, 1, 2, 3, 5, 8};
    const auto s = stats::covariance_surface(periods, ex1());
    REQUIRE(s.size() == periods.size());
    for (std::size_t i = 0; i < s.size(); ++i) {
        const auto mv = stats::mean_var_at(periods[i], ex1());
        CHECK(s.mean[i] == mv.mean);
        CHECK(std::abs(s.cov_at(i, i) - mv.variance) < 1e-12);
        for (std::size_t j = 0; j < s.size(); ++j) {
            CHECK(std::isfinite(s.cov_at(i, j)));
            CHECK(s.cov_at(i, j) == s.cov_at(j, i));
            CHECK(s.gamma_at(i, j) == s.gamma_at(j, i));
            CHECK(std::abs(s.gamma_at(i, j) - s.cov_at(i, j) - s.mean[i] * s.mean[j]) < 1e-12);
            CHECK(std::abs(s.cov_at(i, j)) <= std::sqrt(s.cov_at(i, i) * s.cov_at(j, j)) + 1e-6);
        }
    }
    CHECK_THROWS_AS(stats::covariance_surface({}, ex1()), std::invalid_argument);
}

TEST_CASE("covariance flattens toward the steady variance") {
    const auto s = stats::covariance_surface({18, 20}, ex1());
    const double v = stats::steady_moments(ex1()).variance;
    CHECK(std::abs(s.cov_at(0, 1) - v) < 0.05 * v);
    CHECK(std::abs(s.cov_at(1, 1) - v) < 0.05 * v);
}

TEST_CASE("moment series") {
    const auto ms = stats::moment_series(6, ex1());
    REQUIRE(ms.entries.size() == 7);
    for (std::size_t i = 0; i < ms.entries.size(); ++i) {
        CHECK(ms.entries[i].n == i);
        CHECK(ms.entries[i].std >= 0.0);
    }
    CHECK(std::abs(ms.entries[0].std - std::sqrt(1.0 / 12.0)) < 1e-10);
    CHECK(std::abs(ms.steady_mean - kSteadyMean) < 1e-9);
}
