#pragma once

#include <cmath>
#include <functional>

#include "roughflow/errors.hpp"
#include "roughflow/linalg.hpp"

namespace roughflow {

// Classical fourth-order one-step method with fixed substeps (autonomous
// right-hand side). Throws blowup_error on non-finite or runaway states.
inline Vec rk4_integrate(const std::function<Vec(const Vec&)>& rhs, Vec y, double length,
                         int substeps, double blowup_cap = 1e8) {
    if (substeps <= 0) throw domain_error("substeps must be positive");
    const double h = length / substeps;
    for (int k = 0; k < substeps; ++k) {
        Vec k1 = rhs(y);
        Vec y2 = y;
        axpy(h / 2.0, k1, y2);
        Vec k2 = rhs(y2);
        Vec y3 = y;
        axpy(h / 2.0, k2, y3);
        Vec k3 = rhs(y3);
        Vec y4 = y;
        axpy(h, k3, y4);
        Vec k4 = rhs(y4);
        axpy(h / 6.0, k1, y);
        axpy(h / 3.0, k2, y);
        axpy(h / 3.0, k3, y);
        axpy(h / 6.0, k4, y);
        const double norm = inf_norm(y);
        if (!std::isfinite(norm) || norm > blowup_cap)
            throw blowup_error("ODE state left the admissible region");
    }
    return y;
}

} // namespace roughflow
