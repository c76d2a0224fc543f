#pragma once
// Deterministic Beverton-Holt dynamics x_{n+1} = a x_n / (1 + b x_n) and the
// inverse mappings with Jacobians used to push the input density forward.

#include <optional>

#include "bhrvt/types.hpp"

namespace bhrvt::model {

// Relative size below which a denominator is treated as vanishing.
inline constexpr double kDenominatorGuard = 1e-14;

// Result of an inverse mapping: the recovered input point and |J|.
// When valid is false the evaluation lies on a singular set or outside the
// admissible region and contributes nothing to an integral.
struct TransformEval {
    ParamPoint point;
    double jacobian_abs = 0.0;
    bool valid = false;
};

// base^n by repeated squaring.
double pow_int(double base, Period n);

// n applications of x -> a x / (1 + b x) starting from c.
// Requires c > 0, a >= 1, b >= 0.
double iterate_map(double c, double a, double b, Period n);

// Closed-form x_n, with the a == 1 branch 1 / (1/c + b n).
// Requires c > 0, a >= 1, b >= 0.
double solution_closed_form(double c, double a, double b, Period n);

// (a - 1) / b, or 0 when a == 1. Throws std::domain_error for a != 1, b == 0.
double steady_state_value(double a, double b);

// Inverse of c -> x_n at fixed (a, b): recovers c and |dc/dx|.
// Requires a > 1, b > 0.
TransformEval transform_1pdf(double x, Period n, double a, double b);

// Fixed-(x, a) slice of the 1-PDF map in the (a, c) parametrization:
// b(c) = k1 - k2 / c and the Jacobian weight is constant along the slice.
struct OverCSlice {
    double k1 = 0.0;
    double k2 = 0.0;
    double weight = 0.0;
    bool valid = false;

    double b(double c) const { return k1 - k2 / c; }
};

// Requires n >= 1, a > 1, x > 0 for a valid slice.
OverCSlice slice_1pdf_over_c(double x, Period n, double a);

// Same 1-PDF change of variables with c kept and b recovered:
// b = (a-1)/(a^n-1) (a^n/x - 1/c), |db/dx| = (a-1) a^n / (x^2 (a^n-1)).
// Well conditioned for large a^n, where recovering c from x is not.
// Requires n >= 1, a > 1.
TransformEval transform_1pdf_over_c(double x, Period n, double a, double c);

// Inverse of (c, b) -> (x_{n1}, x_{n2}) at fixed a. Throws
// std::invalid_argument when n1 == n2 (the Jacobian vanishes identically).
TransformEval transform_2pdf(double x1, double x2, Period n1, Period n2, double a);

// Inverse of a -> (a - 1)/b at fixed (c, b): a = x b + 1, |J| = |b|.
TransformEval transform_steady(double x, double c, double b);

// Unchecked closed form that also accepts c == 0 (returns 0); used for
// bounding images of support boxes.
double closed_form_bound(double c, double a, double b, Period n);

// Solves closed_form_bound(c, a, b, n) == x for a within a_range. x_n is
// increasing in a, so there is at most one root. Returns nullopt when x is
// not attained on a_range.
std::optional<double> solve_growth(double x, Period n, double c, double b, Interval a_range);

}  // namespace bhrvt::model
