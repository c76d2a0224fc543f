#include "bhrvt/model.hpp"

#include <cmath>
#include <stdexcept>

namespace bhrvt::model {

namespace {

bool guarded(double den, double scale) {
    return !(std::abs(den) > kDenominatorGuard * scale) || !std::isfinite(den);
}

void check_forward(double c, double a, double b) {
    if (!(c > 0.0) || !(a >= 1.0) || !(b >= 0.0)) {
        throw std::invalid_argument("Beverton-Holt map requires c > 0, a >= 1, b >= 0");
    }
}

}  // namespace

double pow_int(double base, Period n) {
    double result = 1.0;
    while (n > 0) {
        if (n & 1u) result *= base;
        base *= base;
        n >>= 1;
    }
    return result;
}

double iterate_map(double c, double a, double b, Period n) {
    check_forward(c, a, b);
    double x = c;
    for (Period i = 0; i < n; ++i) x = a * x / (1.0 + b * x);
    return x;
}

double closed_form_bound(double c, double a, double b, Period n) {
    if (c <= 0.0) return 0.0;
    if (n == 0) return c;
    if (a == 1.0) return 1.0 / (1.0 / c + b * n);
    const double an = pow_int(a, n);
    // a^n (a-1) / (b a^n + (a-1)/c - b), with b a^n - b grouped to keep all
    // terms of the denominator nonnegative.
    return an * (a - 1.0) / (b * (an - 1.0) + (a - 1.0) / c);
}

double solution_closed_form(double c, double a, double b, Period n) {
    check_forward(c, a, b);
    return closed_form_bound(c, a, b, n);
}

double steady_state_value(double a, double b) {
    if (!(a >= 1.0)) throw std::invalid_argument("steady state requires a >= 1");
    if (a == 1.0) return 0.0;
    if (!(b > 0.0)) throw std::domain_error("no finite steady state: a != 1 with b == 0");
    return (a - 1.0) / b;
}

TransformEval transform_1pdf(double x, Period n, double a, double b) {
    TransformEval out;
    out.point = {x, a, b};
    if (n == 0) {
        out.jacobian_abs = 1.0;
        out.valid = x > 0.0;
        return out;
    }
    const double an = pow_int(a, n);
    const double lead = an * (a - 1.0);
    const double crowd = b * x * (an - 1.0);
    const double den = lead - crowd;
    if (guarded(den, std::max(std::abs(lead), std::abs(crowd)))) return out;
    const double c = x * (a - 1.0) / den;
    out.point.c = c;
    out.jacobian_abs = std::abs((a - 1.0) * (a - 1.0) * an / (den * den));
    out.valid = c > 0.0 && std::isfinite(c) && std::isfinite(out.jacobian_abs);
    return out;
}

OverCSlice slice_1pdf_over_c(double x, Period n, double a) {
    OverCSlice s;
    if (n == 0 || !(x > 0.0) || !(a > 1.0)) return s;
    const double an = pow_int(a, n);
    const double anm1 = an - 1.0;
    if (guarded(anm1, an)) return s;
    s.k2 = (a - 1.0) / anm1;
    s.k1 = s.k2 * an / x;
    s.weight = s.k1 / x;
    s.valid = std::isfinite(s.k1) && std::isfinite(s.weight);
    return s;
}

TransformEval transform_1pdf_over_c(double x, Period n, double a, double c) {
    if (n == 0) throw std::invalid_argument("transform_1pdf_over_c requires n >= 1");
    TransformEval out;
    out.point = {c, a, 0.0};
    const OverCSlice s = slice_1pdf_over_c(x, n, a);
    if (!s.valid || !(c > 0.0)) return out;
    const double b = s.b(c);
    out.point.b = b;
    out.jacobian_abs = s.weight;
    out.valid = b > 0.0 && std::isfinite(b);
    return out;
}

TransformEval transform_2pdf(double x1, double x2, Period n1, Period n2, double a) {
    if (n1 == n2) {
        throw std::invalid_argument("2-PDF needs distinct periods (n1 == n2); use the 1-PDF instead");
    }
    TransformEval out;
    out.point = {0.0, a, 0.0};
    if (!(x1 > 0.0) || !(x2 > 0.0)) return out;
    const double a1 = pow_int(a, n1);
    const double a2 = pow_int(a, n2);

    const double t1 = x1 * a2 * (a1 - 1.0);
    const double t2 = x2 * a1 * (a2 - 1.0);
    const double den_c = t1 - t2;
    if (guarded(den_c, std::max(std::abs(t1), std::abs(t2)))) return out;

    const double da = a1 - a2;
    const double den_b = x1 * x2 * da;
    if (guarded(den_b, x1 * x2 * std::max(a1, a2))) return out;

    const double c = x1 * x2 * da / den_c;
    const double b = (a - 1.0) * (x2 * a1 - x1 * a2) / den_b;
    out.point.c = c;
    out.point.b = b;
    out.jacobian_abs = std::abs((a - 1.0) * a1 * a2 * da / (den_c * den_c));
    out.valid = c > 0.0 && b > 0.0 && std::isfinite(c) && std::isfinite(b) &&
                std::isfinite(out.jacobian_abs);
    return out;
}

TransformEval transform_steady(double x, double c, double b) {
    TransformEval out;
    out.point = {c, x * b + 1.0, b};
    out.jacobian_abs = std::abs(b);
    out.valid = true;
    return out;
}

std::optional<double> solve_growth(double x, Period n, double c, double b, Interval a_range) {
    if (n == 0 || a_range.empty()) return std::nullopt;
    double lo = a_range.lo;
    double hi = a_range.hi;
    const double f_lo = closed_form_bound(c, lo, b, n) - x;
    const double f_hi = closed_form_bound(c, hi, b, n) - x;
    if (f_lo > 0.0 || f_hi < 0.0) return std::nullopt;
    if (f_lo == 0.0) return lo;
    if (f_hi == 0.0) return hi;
    for (int it = 0; it < 200; ++it) {
        const double mid = 0.5 * (lo + hi);
        if (!(mid > lo && mid < hi)) break;
        if (closed_form_bound(c, mid, b, n) - x < 0.0) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    return 0.5 * (lo + hi);
}

}  // namespace bhrvt::model
