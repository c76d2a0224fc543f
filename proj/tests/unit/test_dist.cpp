#include <array>
#include <cmath>

#include "bhrvt/dist.hpp"
#include "bhrvt/mc.hpp"
#include "bhrvt/quad.hpp"
#include "doctest.h"

using namespace bhrvt;
using namespace bhrvt::dist;

namespace {

// Untruncated trivariate normal density at its mean, from scipy.
constexpr double kExample2Peak = 917.9829436399942;

const Vec3 kMu{0.5, 1.5, 0.5};
const Mat3 kSigma{{{1.0 / 500, 0.1 / 500, 0.2 / 500}, {0.1 / 500, 0.9 / 500, 0.3 / 500}, {0.2 / 500, 0.3 / 500, 0.8 / 500}}};
const SupportBox kBox{{0.0, 1.0}, {1.1, 2.0}, {0.0, 1.0}};

double box_integral(const JointDensity& d, const SupportBox& box, const quad::QuadratureConfig& cfg = {}) {
    return quad::integrate_3d([&](double c, double a, double b) { return eval_joint(d, {c, a, b}); }, box.c, box.a,
                              box.b, cfg)
        .value;
}

}  // namespace

TEST_CASE("example1 joint density values") {
    const auto d = preset("example1");
    CHECK(eval_joint(d, {0.5, 1.5, 0.5}) == doctest::Approx(1.0 / 0.81).epsilon(1e-15));
    CHECK(eval_joint(d, {0.5, 1.05, 0.5}) == 0.0);
    CHECK_THROWS_AS(eval_joint(d, {0.5, 1.05, 0.5}, false), std::domain_error);
    CHECK(d.name() == "example1");
    CHECK(std::isinf(d.resolution()));
}

TEST_CASE("example2 joint density at the mean") {
    const auto d = preset("example2");
    const auto& g = std::get<TruncatedGaussianJoint>(d.impl());
    CHECK(g.untruncated(0.5, 1.5, 0.5) == doctest::Approx(kExample2Peak).epsilon(1e-12));
    CHECK(eval_joint(d, {0.5, 1.5, 0.5}) == doctest::Approx(kExample2Peak / g.normalization()).epsilon(1e-14));
    CHECK(eval_joint(d, {0.5, 1.05, 0.5}) == 0.0);
    CHECK(d.resolution() == doctest::Approx(g.min_std()));
}

TEST_CASE("presets encode the two worked examples") {
    const auto d1 = preset("example1");
    CHECK(d1.support().c.lo == 0.0);
    CHECK(d1.support().c.hi == 1.0);
    CHECK(d1.support().a.lo == 1.1);
    CHECK(d1.support().a.hi == 2.0);
    CHECK(d1.support().b.lo == 0.1);
    CHECK(d1.support().b.hi == 1.0);

    const auto d2 = preset("example2");
    const auto& g = std::get<TruncatedGaussianJoint>(d2.impl());
    for (int i = 0; i < 3; ++i) {
        CHECK(g.mu()[i] == kMu[i]);
        for (int j = 0; j < 3; ++j) CHECK(g.sigma()[i][j] == kSigma[i][j]);
        CHECK(g.support().axis(i).lo == kBox.axis(i).lo);
        CHECK(g.support().axis(i).hi == kBox.axis(i).hi);
    }
    CHECK_THROWS_AS(preset("example3"), std::invalid_argument);
}

TEST_CASE("example2 normalization constant") {
    const double z = normalization_constant(kMu, kSigma, kBox);
    CHECK(std::abs(z - 1.0) < 1e-6);
    const auto mc = normalization_constant_mc(kMu, kSigma, kBox, 10'000'000, 42);
    CHECK(std::abs(mc.value - z) <= 4.0 * std::max(mc.standard_error, 1e-7));
    // Near-unit hit rate is the rejection sampler's acceptance rate.
    CHECK(mc.value > 0.999);
}

TEST_CASE("normalization over wide and half boxes") {
    SupportBox wide;
    for (int i = 0; i < 3; ++i) {
        const double s = std::sqrt(kSigma[i][i]);
        wide.axis(i) = {kMu[i] - 12.0 * s, kMu[i] + 12.0 * s};
    }
    wide.c.lo = std::max(wide.c.lo, 0.0);
    wide.a.lo = std::max(wide.a.lo, 1.0);
    CHECK(std::abs(normalization_constant(kMu, kSigma, wide) - 1.0) < 1e-9);

    SupportBox half = kBox;
    half.c = {0.5, 1.0};
    const double z = normalization_constant(kMu, kSigma, half);
    CHECK(std::abs(z - 0.5) < 1e-6);
    const auto mc = normalization_constant_mc(kMu, kSigma, half, 1'000'000, 5);
    CHECK(std::abs(mc.value - 0.5) <= 4.0 * mc.standard_error);
}

TEST_CASE("joint densities integrate to one") {
    CHECK(std::abs(box_integral(preset("example1"), preset("example1").support()) - 1.0) < 1e-10);
    const auto d2 = preset("example2");
    CHECK(std::abs(box_integral(d2, d2.integration_box()) - 1.0) < 1e-6);
}

TEST_CASE("shrinking the truncation box rescales the density by the ratio of z") {
    SupportBox small = kBox;
    small.c = {0.45, 0.6};
    small.a = {1.45, 1.6};
    const TruncatedGaussianJoint big(kMu, kSigma, kBox);
    const TruncatedGaussianJoint little(kMu, kSigma, small);
    const double expected = big.normalization() / little.normalization();
    for (double c : {0.46, 0.5, 0.58})
        for (double a : {1.47, 1.5, 1.59})
            for (double b : {0.3, 0.5, 0.7}) {
                CHECK(little(c, a, b) / big(c, a, b) == doctest::Approx(expected).epsilon(1e-12));
            }
    CHECK(little(0.3, 1.5, 0.5) == 0.0);
}

TEST_CASE("invalid parameters are rejected") {
    Mat3 asym = kSigma;
    asym[0][1] += 1e-3;
    CHECK_THROWS_AS(TruncatedGaussianJoint(kMu, asym, kBox), std::invalid_argument);
    Mat3 indefinite{{{1.0, 2.0, 0.0}, {2.0, 1.0, 0.0}, {0.0, 0.0, 1.0}}};
    CHECK_THROWS_AS(TruncatedGaussianJoint(kMu, indefinite, kBox), std::invalid_argument);

    SupportBox bad = kBox;
    bad.a = {0.9, 2.0};
    CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
    bad = kBox;
    bad.c = {1.0, 0.5};
    CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
    bad = kBox;
    bad.b = {-0.1, 1.0};
    CHECK_THROWS_AS((void)IndependentUniformJoint{bad}, std::invalid_argument);
}

TEST_CASE("rejection sampling gives up on pathological truncation") {
    SupportBox far = kBox;
    far.c = {0.5 + 4.0 * std::sqrt(kSigma[0][0]), 1.0};
    const TruncatedGaussianJoint g(kMu, kSigma, far);
    Rng rng(3);
    CHECK_THROWS_AS(
        [&] {
            for (int i = 0; i < 100; ++i) (void)g.sample(rng, 10);
        }(),
        SamplingError);
}

TEST_CASE("example1 sampling") {
    const auto d = preset("example1");
    const auto pts = mc::sample_params(d, 1'000'000, 99);
    double sum_a = 0.0;
    bool inside = true;
    for (const auto& p : pts) {
        sum_a += p.a;
        inside = inside && d.support().contains(p.c, p.a, p.b);
    }
    CHECK(inside);
    CHECK(std::abs(sum_a / pts.size() - 1.55) < 0.001);
}

TEST_CASE("example2 draws stay in the box") {
    const auto d = preset("example2");
    const auto pts = mc::sample_params(d, 200'000, 17);
    for (const auto& p : pts) REQUIRE(d.support().contains(p.c, p.a, p.b));
}

namespace {

// Fraction of cells of an n^3 grid over box whose sample count lies within
// 4 standard errors of the cell probability from quadrature.
double cell_agreement(const JointDensity& d, const SupportBox& box, int n, std::uint64_t samples) {
    const auto pts = mc::sample_params(d, samples, 2024);
    std::vector<double> count(static_cast<std::size_t>(n * n * n), 0.0);
    auto cell = [&](const Interval& iv, double v) {
        return std::min(n - 1, static_cast<int>((v - iv.lo) / iv.width() * n));
    };
    for (const auto& p : pts) {
        if (!box.contains(p.c, p.a, p.b)) continue;
        count[static_cast<std::size_t>((cell(box.c, p.c) * n + cell(box.a, p.a)) * n + cell(box.b, p.b))] += 1.0;
    }
    auto sub = [&](const Interval& iv, int k) {
        return Interval{iv.lo + iv.width() * k / n, iv.lo + iv.width() * (k + 1) / n};
    };
    quad::QuadratureConfig cfg;
    cfg.rel_tol = 1e-8;
    cfg.abs_tol = 1e-12;
    int ok = 0;
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            for (int k = 0; k < n; ++k) {
                const SupportBox cb{sub(box.c, i), sub(box.a, j), sub(box.b, k)};
                const double p = box_integral(d, cb, cfg);
                const double N = static_cast<double>(samples);
                const double se = std::sqrt(std::max(p, 1.0 / N) * (1.0 - p) / N);
                if (std::abs(count[static_cast<std::size_t>((i * n + j) * n + k)] / N - p) <= 4.0 * se) ++ok;
            }
    return static_cast<double>(ok) / (n * n * n);
}

}  // namespace

TEST_CASE("sample histograms match cell probabilities") {
    const auto d1 = preset("example1");
    CHECK(cell_agreement(d1, d1.support(), 10, 1'000'000) >= 0.99);

    const auto d2 = preset("example2");
    const auto& g = std::get<TruncatedGaussianJoint>(d2.impl());
    SupportBox core;
    for (int i = 0; i < 3; ++i) {
        const double s = std::sqrt(g.sigma()[i][i]);
        core.axis(i) = {g.mu()[i] - 2.5 * s, g.mu()[i] + 2.5 * s};
    }
    CHECK(cell_agreement(d2, core, 5, 1'000'000) >= 0.99);
}
