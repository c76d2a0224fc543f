#pragma once
// Densities of the solution process obtained by transforming the joint input
// density: the 1-PDF f_1(x, n), the 2-PDF f_2(x1, n1; x2, n2) and the
// steady-state density of X_inf = (A - 1)/B.
//
// Point evaluations throw quad::QuadratureError when an integral misses its
// tolerance. Curves and surfaces evaluate grid points in parallel and
// assemble them by index, so results do not depend on the worker count.

#include <cstdint>
#include <optional>
#include <vector>

#include "bhrvt/dist.hpp"
#include "bhrvt/parallel.hpp"
#include "bhrvt/quad.hpp"
#include "bhrvt/types.hpp"

namespace bhrvt::rvt {

struct GridSpec {
    enum class Kind { automatic, uniform, points };

    Kind kind = Kind::automatic;
    std::size_t n_points = 200;
    Interval range;              // uniform only
    std::vector<double> values;  // points only, strictly increasing
    // Pilot Monte Carlo run that locates the automatic range.
    std::uint64_t seed = 20190101;
    std::uint64_t pilot_samples = 100'000;

    static GridSpec automatic_grid(std::size_t n_points = 200);
    static GridSpec uniform_grid(Interval range, std::size_t n_points);
    static GridSpec explicit_grid(std::vector<double> values);
};

struct DensityCurve {
    std::vector<double> x;
    std::vector<double> f;
    std::optional<Period> period;  // empty for the steady state
    double mass = 0.0;             // trapezoid rule over the grid
};

struct DensitySurface {
    std::vector<double> x1;
    std::vector<double> x2;
    std::vector<double> values;  // row-major, x1 outer
    Period n1 = 0;
    Period n2 = 0;
    double mass = 0.0;  // double trapezoid rule

    double at(std::size_t i, std::size_t j) const { return values[i * x2.size() + j]; }
};

// Exact range of X_n (or X_inf when n is empty) over the integration box.
// The steady upper end is infinite when the box reaches b = 0.
Interval support_image(const dist::JointDensity& d, std::optional<Period> n);

// Points where f_1(., n) may have a kink: images of the box vertices.
std::vector<double> pdf1_breakpoints(const dist::JointDensity& d, Period n);
std::vector<double> steady_breakpoints(const dist::JointDensity& d);

// [q_0.0005, q_0.9995] of a pilot sample padded by 10% of its width on each
// side, clipped to support_image.
Interval auto_range(const dist::JointDensity& d, std::optional<Period> n, const GridSpec& spec);
std::vector<double> resolve_grid(const GridSpec& spec, const dist::JointDensity& d, std::optional<Period> n);

double trapezoid(const std::vector<double>& x, const std::vector<double>& f);

double pdf1_at(double x, Period n, const dist::JointDensity& d, const quad::QuadratureConfig& cfg = {});
// Same density integrated in the (a, b) variables with c recovered from x.
// Loses accuracy once a^n reaches ~1e8; kept as a cross-check.
double pdf1_at_over_ab(double x, Period n, const dist::JointDensity& d, const quad::QuadratureConfig& cfg = {});
DensityCurve pdf1_curve(Period n, const dist::JointDensity& d, const GridSpec& grid,
                        const quad::QuadratureConfig& cfg = {}, Exec exec = Exec::openmp);

// Throws std::invalid_argument when n1 == n2.
double pdf2_at(double x1, Period n1, double x2, Period n2, const dist::JointDensity& d,
               const quad::QuadratureConfig& cfg = {});
DensitySurface pdf2_surface(Period n1, Period n2, const dist::JointDensity& d, const GridSpec& grid1,
                            const GridSpec& grid2, const quad::QuadratureConfig& cfg = {}, Exec exec = Exec::openmp);
DensitySurface pdf2_surface(Period n1, Period n2, const dist::JointDensity& d, const GridSpec& grid,
                            const quad::QuadratureConfig& cfg = {}, Exec exec = Exec::openmp);
// Integral of f_2(x1, n1; ., n2) over the range of X_n2.
double pdf2_marginal(double x1, Period n1, Period n2, const dist::JointDensity& d,
                     const quad::QuadratureConfig& cfg = {});
// Double integral of f_2 over the ranges of X_n1 and X_n2.
double pdf2_total_mass(Period n1, Period n2, const dist::JointDensity& d, const quad::QuadratureConfig& cfg = {});

double pdf_steady_at(double x, const dist::JointDensity& d, const quad::QuadratureConfig& cfg = {});
DensityCurve steady_curve(const dist::JointDensity& d, const GridSpec& grid, const quad::QuadratureConfig& cfg = {},
                          Exec exec = Exec::openmp);

// Adaptive integrals of the densities over a range (breakpoints included).
quad::IntegralResult integrate_pdf1(Period n, const dist::JointDensity& d, Interval range,
                                    const quad::QuadratureConfig& cfg = {});
quad::IntegralResult integrate_steady(const dist::JointDensity& d, Interval range,
                                      const quad::QuadratureConfig& cfg = {});
// Integral of f_1(., n) over its full range.
double pdf1_total_mass(Period n, const dist::JointDensity& d, const quad::QuadratureConfig& cfg = {});
// Integral of |f_1(., n) - f_X_inf| over the union of both ranges.
double l1_distance_to_steady(Period n, const dist::JointDensity& d, const quad::QuadratureConfig& cfg = {});

// Extra bisection levels granted to integrals over x, whose integrands carry
// kinks that are not all known in advance.
inline constexpr int kExtraDepthOverX = 10;

}  // namespace bhrvt::rvt
