#pragma once

#include <algorithm>
#include <cstdint>

namespace bhrvt {

// Discrete time period of the population recurrence.
using Period = std::uint32_t;

struct Interval {
    double lo = 0.0;
    double hi = 0.0;

    double width() const { return hi - lo; }
    bool empty() const { return !(hi > lo); }
    bool contains(double x) const { return x >= lo && x <= hi; }
    double mid() const { return 0.5 * (lo + hi); }

    Interval intersect(const Interval& o) const {
        return {std::max(lo, o.lo), std::min(hi, o.hi)};
    }
};

// One realization (c, a, b) of the random inputs: initial population,
// growth factor and crowding coefficient.
struct ParamPoint {
    double c = 0.0;
    double a = 0.0;
    double b = 0.0;

    bool admissible() const { return c > 0.0 && a > 1.0 && b > 0.0; }
};

}  // namespace bhrvt
