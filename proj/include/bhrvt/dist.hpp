#pragma once
// Joint densities of the random inputs (C, A, B): evaluation, bounded
// support and exact sampling.

#include <array>
#include <cstdint>
#include <random>
#include <stdexcept>
#include <string>
#include <string_view>
#include <variant>

#include "bhrvt/quad.hpp"
#include "bhrvt/types.hpp"

namespace bhrvt::dist {

using Rng = std::mt19937_64;
using Vec3 = std::array<double, 3>;
using Mat3 = std::array<std::array<double, 3>, 3>;

class SamplingError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Closed intervals for c, a and b. Order (c, a, b) throughout.
struct SupportBox {
    Interval c;
    Interval a;
    Interval b;

    // Throws std::invalid_argument unless lo < hi on every axis,
    // a.lo >= 1, c.lo >= 0 and b.lo >= 0.
    void validate() const;

    bool contains(double cv, double av, double bv) const {
        return c.contains(cv) && a.contains(av) && b.contains(bv);
    }
    const Interval& axis(int i) const { return i == 0 ? c : (i == 1 ? a : b); }
    Interval& axis(int i) { return i == 0 ? c : (i == 1 ? a : b); }
    double volume() const { return c.width() * a.width() * b.width(); }
};

class IndependentUniformJoint {
public:
    explicit IndependentUniformJoint(SupportBox support);

    double operator()(double c, double a, double b) const {
        return support_.contains(c, a, b) ? height_ : 0.0;
    }
    const SupportBox& support() const { return support_; }
    const SupportBox& integration_box() const { return support_; }
    ParamPoint sample(Rng& rng) const;

private:
    SupportBox support_;
    double height_;
};

// Trivariate Gaussian N(mu, sigma) truncated to a box and renormalized.
class TruncatedGaussianJoint {
public:
    // Standard deviations per axis beyond which the density is dropped from
    // every integration domain (the discarded mass is below 1e-22).
    static constexpr double kIntegrationHalfWidth = 10.0;
    static constexpr long kDefaultMaxRejections = 1'000'000;

    // Validates sigma (symmetric positive-definite) and the box, then
    // computes the normalization constant by adaptive quadrature.
    TruncatedGaussianJoint(Vec3 mu, Mat3 sigma, SupportBox box, const quad::QuadratureConfig& cfg = {});

    double operator()(double c, double a, double b) const {
        return box_.contains(c, a, b) ? untruncated(c, a, b) / z_ : 0.0;
    }
    double untruncated(double c, double a, double b) const;

    const SupportBox& support() const { return box_; }
    // The box intersected with mu +/- kIntegrationHalfWidth standard deviations.
    const SupportBox& integration_box() const { return integration_box_; }
    const Vec3& mu() const { return mu_; }
    const Mat3& sigma() const { return sigma_; }
    double normalization() const { return z_; }
    // Square root of the smallest eigenvalue of sigma.
    double min_std() const { return min_std_; }

    // Rejection sampling from the untruncated Gaussian. Throws SamplingError
    // after max_rejections consecutive rejections.
    ParamPoint sample(Rng& rng, long max_rejections = kDefaultMaxRejections) const;

private:
    Vec3 mu_;
    Mat3 sigma_;
    SupportBox box_;
    SupportBox integration_box_;
    Mat3 chol_{};       // lower Cholesky factor of sigma
    Mat3 precision_{};  // inverse of sigma
    double log_norm_ = 0.0;
    double z_ = 1.0;
    double min_std_ = 0.0;
};

// Either concrete kind plus a display name.
class JointDensity {
public:
    using Impl = std::variant<IndependentUniformJoint, TruncatedGaussianJoint>;

    JointDensity(Impl impl, std::string name) : impl_(std::move(impl)), name_(std::move(name)) {}

    // f_{C,A,B}(p). Outside the support the value is 0, or, when
    // allow_outside is false, std::domain_error is thrown.
    double eval(const ParamPoint& p, bool allow_outside = true) const;

    const SupportBox& support() const;
    const SupportBox& integration_box() const;
    // Length scale of the finest density feature; infinity for the
    // piecewise-constant uniform kind.
    double resolution() const;
    const std::string& name() const { return name_; }
    const Impl& impl() const { return impl_; }

    ParamPoint sample(Rng& rng) const;

    template <class Fn>
    decltype(auto) visit(Fn&& fn) const {
        return std::visit(std::forward<Fn>(fn), impl_);
    }

private:
    Impl impl_;
    std::string name_;
};

double eval_joint(const JointDensity& d, const ParamPoint& p, bool allow_outside = true);
ParamPoint sample(const JointDensity& d, Rng& rng);

// z = integral over box of the N(mu, sigma) density. Throws
// quad::QuadratureError on non-convergence.
double normalization_constant(const Vec3& mu, const Mat3& sigma, const SupportBox& box,
                              const quad::QuadratureConfig& cfg = {});

struct McEstimate {
    double value = 0.0;
    double standard_error = 0.0;
};

// Hit-count estimate of z for cross-checking the quadrature value.
McEstimate normalization_constant_mc(const Vec3& mu, const Mat3& sigma, const SupportBox& box,
                                     std::uint64_t samples, std::uint64_t seed);

// "example1": C ~ U[0,1], A ~ U[1.1,2], B ~ U[0.1,1], independent.
// "example2": N_T(mu, sigma) with mu = (0.5, 1.5, 0.5),
//             sigma = [[1,.1,.2],[.1,.9,.3],[.2,.3,.8]] / 500 on [0,1]x[1.1,2]x[0,1].
// Throws std::invalid_argument for an unknown name.
JointDensity preset(std::string_view name, const quad::QuadratureConfig& cfg = {});

}  // namespace bhrvt::dist
