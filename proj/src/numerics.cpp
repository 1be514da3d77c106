#include "levyreg/numerics.hpp"

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/tools/roots.hpp>

#include <cmath>
#include <cstdint>
#include <limits>
#include <stdexcept>
#include <string>

namespace levyreg::numerics {

double integrate(const RealFn& f, double lo, double hi, double tol) {
  if (lo == hi) {
    return 0.0;
  }
  if (!std::isfinite(lo) || !std::isfinite(hi)) {
    return std::numeric_limits<double>::quiet_NaN();
  }
  // Boost compares the error of the unscaled rule against a tolerance on the
  // scaled estimate, which never terminates on short intervals. Integrating
  // over [0, 1] with the Jacobian folded in keeps both on the same scale.
  const double width = hi - lo;
  auto g = [&](double u) { return width * f(lo + width * u); };
  return boost::math::quadrature::gauss_kronrod<double, 15>::integrate(g, 0.0, 1.0, 20, tol);
}

double solve_monotone(const RealFn& f, const RealFn& df, double target, double guess,
                      double initial_width) {
  auto g = [&](double x) { return f(x) - target; };
  const double g0 = g(guess);
  if (g0 == 0.0) {
    return guess;
  }
  if (!std::isfinite(g0)) {
    throw std::runtime_error("solve_monotone: non-finite value at initial guess");
  }
  // Walk outwards on both sides until the residual changes sign.
  double lo = guess;
  double hi = guess;
  double width = initial_width;
  bool bracketed = false;
  for (int i = 0; i < 200 && !bracketed; ++i) {
    const double left = guess - width;
    const double right = guess + width;
    const double gl = g(left);
    const double gr = g(right);
    if (std::isfinite(gr) && std::signbit(gr) != std::signbit(g0)) {
      lo = guess;
      hi = right;
      bracketed = true;
    } else if (std::isfinite(gl) && std::signbit(gl) != std::signbit(g0)) {
      lo = left;
      hi = guess;
      bracketed = true;
    }
    width *= 2.0;
  }
  if (!bracketed) {
    throw std::runtime_error("solve_monotone: no sign change found around " + std::to_string(guess));
  }
  std::uintmax_t max_iter = 200;
  auto fn = [&](double x) { return std::make_pair(g(x), df(x)); };
  return boost::math::tools::newton_raphson_iterate(fn, 0.5 * (lo + hi), lo, hi,
                                                    std::numeric_limits<double>::digits - 2, max_iter);
}

}  // namespace levyreg::numerics
