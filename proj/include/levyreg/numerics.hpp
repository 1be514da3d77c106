#pragma once

#include <functional>

namespace levyreg::numerics {

using RealFn = std::function<double(double)>;

// Adaptive Gauss-Kronrod (15 point) on [lo, hi].
double integrate(const RealFn& f, double lo, double hi, double tol = 1e-12);

// Root of a monotone function on an initial guess bracket that is expanded
// geometrically until the sign changes, then polished with safeguarded
// Newton. Throws std::runtime_error when no bracket is found.
double solve_monotone(const RealFn& f, const RealFn& df, double target, double guess,
                      double initial_width = 1.0);

}  // namespace levyreg::numerics
