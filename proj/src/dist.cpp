#include "bhrvt/dist.hpp"

#include <cmath>
#include <limits>
#include <numbers>

#include <Eigen/Dense>

namespace bhrvt::dist {

namespace {

Eigen::Matrix3d to_eigen(const Mat3& m) {
    Eigen::Matrix3d e;
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) e(i, j) = m[i][j];
    return e;
}

Mat3 from_eigen(const Eigen::Matrix3d& e) {
    Mat3 m{};
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) m[i][j] = e(i, j);
    return m;
}

void validate_covariance(const Mat3& sigma) {
    double scale = 0.0;
    for (const auto& row : sigma)
        for (double v : row) {
            if (!std::isfinite(v)) throw std::invalid_argument("covariance has non-finite entries");
            scale = std::max(scale, std::abs(v));
        }
    for (int i = 0; i < 3; ++i)
        for (int j = i + 1; j < 3; ++j)
            if (std::abs(sigma[i][j] - sigma[j][i]) > 1e-12 * scale) {
                throw std::invalid_argument("covariance matrix is not symmetric");
            }
    const Eigen::Matrix3d s = to_eigen(sigma);
    const double m1 = s(0, 0);
    const double m2 = s.topLeftCorner<2, 2>().determinant();
    const double m3 = s.determinant();
    if (!(m1 > 0.0 && m2 > 0.0 && m3 > 0.0)) {
        throw std::invalid_argument("covariance matrix is not positive-definite");
    }
}

// Axis-aligned box holding all but a negligible part of N(mu, sigma), cut to box.
SupportBox truncate_to_bulk(const Vec3& mu, const Mat3& sigma, const SupportBox& box, double half_width) {
    SupportBox out = box;
    for (int i = 0; i < 3; ++i) {
        const double sd = std::sqrt(sigma[i][i]);
        out.axis(i) = box.axis(i).intersect({mu[i] - half_width * sd, mu[i] + half_width * sd});
        if (out.axis(i).empty()) {
            throw std::invalid_argument("truncation box carries negligible Gaussian mass");
        }
    }
    return out;
}

struct GaussianKernel {
    Vec3 mu;
    Mat3 precision;
    double log_norm;

    double operator()(double c, double a, double b) const {
        const double d[3] = {c - mu[0], a - mu[1], b - mu[2]};
        double q = 0.0;
        for (int i = 0; i < 3; ++i) {
            q += precision[i][i] * d[i] * d[i];
            for (int j = i + 1; j < 3; ++j) q += 2.0 * precision[i][j] * d[i] * d[j];
        }
        return std::exp(log_norm - 0.5 * q);
    }
};

GaussianKernel make_kernel(const Vec3& mu, const Mat3& sigma) {
    const Eigen::Matrix3d s = to_eigen(sigma);
    const double log_norm = -1.5 * std::log(2.0 * std::numbers::pi) - 0.5 * std::log(s.determinant());
    return {mu, from_eigen(s.inverse()), log_norm};
}

}  // namespace

void SupportBox::validate() const {
    for (int i = 0; i < 3; ++i) {
        const Interval& iv = axis(i);
        if (!std::isfinite(iv.lo) || !std::isfinite(iv.hi) || !(iv.lo < iv.hi)) {
            throw std::invalid_argument("support interval must satisfy lo < hi");
        }
    }
    if (a.lo < 1.0) throw std::invalid_argument("growth factor interval must lie in [1, inf)");
    if (c.lo < 0.0) throw std::invalid_argument("initial population interval must lie in [0, inf)");
    if (b.lo < 0.0) throw std::invalid_argument("crowding interval must lie in [0, inf)");
}

IndependentUniformJoint::IndependentUniformJoint(SupportBox support) : support_(support) {
    support_.validate();
    height_ = 1.0 / support_.volume();
}

ParamPoint IndependentUniformJoint::sample(Rng& rng) const {
    std::uniform_real_distribution<double> uc(support_.c.lo, support_.c.hi);
    std::uniform_real_distribution<double> ua(support_.a.lo, support_.a.hi);
    std::uniform_real_distribution<double> ub(support_.b.lo, support_.b.hi);
    const double c = uc(rng);
    const double a = ua(rng);
    const double b = ub(rng);
    return {c, a, b};
}

TruncatedGaussianJoint::TruncatedGaussianJoint(Vec3 mu, Mat3 sigma, SupportBox box,
                                               const quad::QuadratureConfig& cfg)
    : mu_(mu), sigma_(sigma), box_(box) {
    box_.validate();
    for (double m : mu_)
        if (!std::isfinite(m)) throw std::invalid_argument("mean has non-finite entries");
    validate_covariance(sigma_);
    integration_box_ = truncate_to_bulk(mu_, sigma_, box_, kIntegrationHalfWidth);

    const Eigen::Matrix3d s = to_eigen(sigma_);
    Eigen::LLT<Eigen::Matrix3d> llt(s);
    if (llt.info() != Eigen::Success) throw std::invalid_argument("covariance matrix is not positive-definite");
    chol_ = from_eigen(llt.matrixL());
    const auto kernel = make_kernel(mu_, sigma_);
    precision_ = kernel.precision;
    log_norm_ = kernel.log_norm;
    min_std_ = std::sqrt(Eigen::SelfAdjointEigenSolver<Eigen::Matrix3d>(s).eigenvalues().minCoeff());

    z_ = normalization_constant(mu_, sigma_, box_, cfg);
    if (!(z_ > std::numeric_limits<double>::min())) {
        throw std::invalid_argument("truncation box carries negligible Gaussian mass");
    }
}

double TruncatedGaussianJoint::untruncated(double c, double a, double b) const {
    return GaussianKernel{mu_, precision_, log_norm_}(c, a, b);
}

ParamPoint TruncatedGaussianJoint::sample(Rng& rng, long max_rejections) const {
    std::normal_distribution<double> normal;
    for (long attempt = 0; attempt < max_rejections; ++attempt) {
        const double z0 = normal(rng);
        const double z1 = normal(rng);
        const double z2 = normal(rng);
        const double c = mu_[0] + chol_[0][0] * z0;
        const double a = mu_[1] + chol_[1][0] * z0 + chol_[1][1] * z1;
        const double b = mu_[2] + chol_[2][0] * z0 + chol_[2][1] * z1 + chol_[2][2] * z2;
        if (box_.contains(c, a, b)) return {c, a, b};
    }
    throw SamplingError("truncated Gaussian rejection sampling exceeded " + std::to_string(max_rejections) +
                        " attempts");
}

double JointDensity::eval(const ParamPoint& p, bool allow_outside) const {
    if (!allow_outside && !support().contains(p.c, p.a, p.b)) {
        throw std::domain_error("point lies outside the density support");
    }
    return visit([&](const auto& d) { return d(p.c, p.a, p.b); });
}

const SupportBox& JointDensity::support() const {
    return visit([](const auto& d) -> const SupportBox& { return d.support(); });
}

const SupportBox& JointDensity::integration_box() const {
    return visit([](const auto& d) -> const SupportBox& { return d.integration_box(); });
}

double JointDensity::resolution() const {
    if (const auto* g = std::get_if<TruncatedGaussianJoint>(&impl_)) return g->min_std();
    return std::numeric_limits<double>::infinity();
}

ParamPoint JointDensity::sample(Rng& rng) const {
    return visit([&](const auto& d) { return d.sample(rng); });
}

double eval_joint(const JointDensity& d, const ParamPoint& p, bool allow_outside) {
    return d.eval(p, allow_outside);
}

ParamPoint sample(const JointDensity& d, Rng& rng) { return d.sample(rng); }

double normalization_constant(const Vec3& mu, const Mat3& sigma, const SupportBox& box,
                              const quad::QuadratureConfig& cfg) {
    box.validate();
    validate_covariance(sigma);
    cfg.validate();
    const SupportBox bulk =
        truncate_to_bulk(mu, sigma, box, TruncatedGaussianJoint::kIntegrationHalfWidth);
    const auto kernel = make_kernel(mu, sigma);
    // Eight panels per axis keep each initial panel within ~2.5 standard deviations.
    quad::QuadratureConfig zcfg = cfg.inner();
    zcfg.initial_panels = std::max(zcfg.initial_panels, 8);
    const auto r = quad::integrate_3d(kernel, bulk.c, bulk.a, bulk.b, zcfg);
    quad::require_converged(r, "truncated Gaussian normalization");
    return r.value;
}

McEstimate normalization_constant_mc(const Vec3& mu, const Mat3& sigma, const SupportBox& box,
                                     std::uint64_t samples, std::uint64_t seed) {
    validate_covariance(sigma);
    if (samples == 0) throw std::invalid_argument("need at least one sample");
    Eigen::LLT<Eigen::Matrix3d> llt(to_eigen(sigma));
    const Eigen::Matrix3d L = llt.matrixL();
    Rng rng(seed);
    std::normal_distribution<double> normal;
    std::uint64_t hits = 0;
    for (std::uint64_t i = 0; i < samples; ++i) {
        const Eigen::Vector3d z(normal(rng), normal(rng), normal(rng));
        const Eigen::Vector3d v = Eigen::Vector3d(mu[0], mu[1], mu[2]) + L * z;
        if (box.contains(v(0), v(1), v(2))) ++hits;
    }
    const double p = static_cast<double>(hits) / static_cast<double>(samples);
    return {p, std::sqrt(p * (1.0 - p) / static_cast<double>(samples))};
}

JointDensity preset(std::string_view name, const quad::QuadratureConfig& cfg) {
    if (name == "example1") {
        SupportBox box{{0.0, 1.0}, {1.1, 2.0}, {0.1, 1.0}};
        return JointDensity(IndependentUniformJoint(box), "example1");
    }
    if (name == "example2") {
        const Vec3 mu{0.5, 1.5, 0.5};
        Mat3 sigma{{{1.0, 0.1, 0.2}, {0.1, 0.9, 0.3}, {0.2, 0.3, 0.8}}};
        for (auto& row : sigma)
            for (double& v : row) v /= 500.0;
        SupportBox box{{0.0, 1.0}, {1.1, 2.0}, {0.0, 1.0}};
        return JointDensity(TruncatedGaussianJoint(mu, sigma, box, cfg), "example2");
    }
    throw std::invalid_argument("unknown preset '" + std::string(name) + "' (expected example1 or example2)");
}

}  // namespace bhrvt::dist
