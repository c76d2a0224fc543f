#include "bhrvt/quad.hpp"

namespace bhrvt::quad {

void QuadratureConfig::validate() const {
    if (!(rel_tol > 0.0)) throw std::invalid_argument("quadrature rel_tol must be positive");
    if (!(abs_tol > 0.0)) throw std::invalid_argument("quadrature abs_tol must be positive");
    if (max_depth < 1) throw std::invalid_argument("quadrature max_depth must be at least 1");
    if (initial_panels < 1) throw std::invalid_argument("quadrature initial_panels must be at least 1");
}

void require_converged(const IntegralResult& r, const char* what) {
    if (!r.converged) {
        throw QuadratureError(std::string(what) + ": quadrature did not converge", r.error_estimate);
    }
}

}  // namespace bhrvt::quad
