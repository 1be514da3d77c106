#include "levyreg/transforms.hpp"

#include "levyreg/marcus.hpp"
#include "levyreg/numerics.hpp"
#include "levyreg/trajectory.hpp"

#include <boost/math/tools/roots.hpp>

#include <cmath>
#include <limits>
#include <sstream>

namespace levyreg {
namespace {

void check_assumption_h(const DiffusionField& sigma, Interval range) {
  if (!sigma.min_abs) {
    throw AssumptionHViolation("diffusion field carries no min_abs witness for Assumption H");
  }
  check_field(sigma, range);
  const double sign = std::copysign(1.0, sigma(range.lo));
  for (double x : probe_grid(range)) {
    if (std::copysign(1.0, sigma(x)) != sign) {
      std::ostringstream msg;
      msg << "sigma changes sign on [" << range.lo << ", " << range.hi << "] near x=" << x;
      throw AssumptionHViolation(msg.str());
    }
  }
}

}  // namespace

Diffeomorphism::Diffeomorphism(DiffusionField sigma, double base_point, Interval range)
    : sigma_(std::move(sigma)), base_(base_point), range_(range) {
  image_lo_ = forward(range_.lo);
  image_hi_ = forward(range_.hi);
  if (image_lo_ > image_hi_) {
    std::swap(image_lo_, image_hi_);
  }
}

double Diffeomorphism::forward(double x) const {
  return numerics::integrate([this](double t) { return 1.0 / sigma_(t); }, base_, x, 1e-10);
}

double Diffeomorphism::inverse(double y) const {
  if (!(y >= image_lo_ && y <= image_hi_)) {
    std::ostringstream msg;
    msg << "inverse: " << y << " outside the image [" << image_lo_ << ", " << image_hi_ << "] of the range";
    throw std::domain_error(msg.str());
  }
  // Newton from the linearization at the base point, bracketed by the range.
  const double guess = std::clamp(base_ + y * sigma_(base_), range_.lo, range_.hi);
  std::uintmax_t iters = 100;
  auto fn = [&](double x) { return std::make_pair(forward(x) - y, forward_derivative(x)); };
  return boost::math::tools::newton_raphson_iterate(fn, guess, range_.lo, range_.hi,
                                                    std::numeric_limits<double>::digits - 4, iters);
}

Diffeomorphism unit_diffusion_transform(const DiffusionField& sigma, double base_point, Interval range) {
  if (!(range.lo < range.hi) || base_point < range.lo || base_point > range.hi) {
    throw std::domain_error("unit_diffusion_transform: base point must lie in a nonempty range");
  }
  check_assumption_h(sigma, range);
  return Diffeomorphism(sigma, base_point, range);
}

ScalarField reduced_drift(const ScalarField& a, const DiffusionField& sigma, const Diffeomorphism& diffeo) {
  auto value = [a, sigma, diffeo](double y) {
    const double x = diffeo.inverse(y);
    return a(x) / sigma(x);
  };
  auto derivative = [a, sigma, diffeo](double y) {
    const double x = diffeo.inverse(y);
    const double s = sigma(x);
    return (a.slope(x) * s - a(x) * sigma.slope(x)) / s;
  };
  return {value, derivative, std::nullopt, std::nullopt};
}

double proportional_solution(const DiffusionField& sigma, double k, double x0, const LevyPath& path) {
  return jump_flow_phi(sigma, x0, path.terminal() + k * path.horizon);
}

double phi_inverse_psi(const DiffusionField& sigma, double x, double t) {
  auto phi = [&](double u) {
    try {
      return jump_flow_phi(sigma, x, u);
    } catch (const FlowDivergence&) {
      return std::numeric_limits<double>::quiet_NaN();
    }
  };
  auto dphi = [&](double u) { return sigma(phi(u)); };
  const double s0 = sigma(x);
  if (s0 == 0.0) {
    throw AssumptionHViolation("sigma vanishes at the starting point of the flow");
  }
  return numerics::solve_monotone(phi, dphi, t, (t - x) / s0, 1.0);
}

double doss_sussman_drift(const ScalarField& a, const DiffusionField& sigma, double x, double y) {
  const auto flow = jump_flow_with_sensitivity(sigma, x, y);
  return a(flow.value) * std::exp(-flow.log_slope);
}

double doss_sussman_solve(const ScalarField& a, const DiffusionField& sigma, const LevyPath& path, double x0,
                          double step) {
  const auto segs = detail::segments(path, step);
  auto b = [&](double yv, double zv) { return doss_sussman_drift(a, sigma, yv, zv); };
  double y = x0;
  for (const auto& seg : segs) {
    const double h = (seg.t1 - seg.t0) / seg.substeps;
    for (int j = 0; j < seg.substeps; ++j) {
      const double ts = seg.t0 + h * j;
      const double te = j + 1 == seg.substeps ? seg.t1 : seg.t0 + h * (j + 1);
      const double hh = te - ts;
      const double z0 = detail::driver_on(path, seg, ts);
      const double zm = detail::driver_on(path, seg, ts + 0.5 * hh);
      const double z1 = detail::driver_on(path, seg, te);
      const double k1 = b(y, z0);
      const double k2 = b(y + 0.5 * hh * k1, zm);
      const double k3 = b(y + 0.5 * hh * k2, zm);
      const double k4 = b(y + hh * k3, z1);
      y += hh / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
      if (!std::isfinite(y)) {
        std::ostringstream msg;
        msg << "Doss-Sussman state became non-finite (last good time " << ts << ")";
        throw FlowDivergence(msg.str());
      }
    }
  }
  return jump_flow_phi(sigma, y, path.terminal());
}

}  // namespace levyreg
