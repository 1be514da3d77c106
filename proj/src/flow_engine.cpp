#include "levyreg/flow_engine.hpp"

#include <charconv>
#include <cmath>
#include <sstream>
#include <string>

namespace levyreg {
namespace {

void push_node(Trajectory& tr, double t, double x, double x_left, double z, bool jump) {
  tr.times.push_back(t);
  tr.x.push_back(x);
  tr.x_left.push_back(x_left);
  tr.z.push_back(z);
  tr.is_jump.push_back(jump ? 1 : 0);
  tr.dx.push_back(0.0);
  tr.dx_left.push_back(0.0);
}

[[noreturn]] void fail(const char* what, double t) {
  std::ostringstream msg;
  msg << what << " (last good time " << t << ")";
  throw NumericFailure(msg.str(), t);
}

std::string shortest(double v) {
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

}  // namespace

double default_step(double horizon) { return std::ldexp(horizon, -12); }

FlowSolution solve_random_ode(const ScalarField& a, const LevyPath& path, double x0, double step) {
  const auto segs = detail::segments(path, step);
  FlowSolution sol;
  sol.horizon = path.horizon;
  sol.smooth = !path.brownian.has_value();
  std::size_t nodes = 1;
  for (const auto& s : segs) {
    nodes += static_cast<std::size_t>(s.substeps);
  }
  sol.times.reserve(nodes);
  sol.x.reserve(nodes);
  sol.x_left.reserve(nodes);
  sol.z.reserve(nodes);
  sol.is_jump.reserve(nodes);
  sol.dx.reserve(nodes);
  sol.dx_left.reserve(nodes);
  sol.y.reserve(nodes);

  const double d = path.drift_rate;
  double y = x0;
  {
    const double z0 = detail::driver_on(path, segs.front(), 0.0);
    push_node(sol, 0.0, y + z0, y + z0, z0, false);
    sol.y.push_back(y);
  }
  for (const auto& seg : segs) {
    const double h = (seg.t1 - seg.t0) / seg.substeps;
    for (int j = 0; j < seg.substeps; ++j) {
      const double ts = seg.t0 + h * j;
      const double te = j + 1 == seg.substeps ? seg.t1 : seg.t0 + h * (j + 1);
      const double hh = te - ts;
      const double z0 = detail::driver_on(path, seg, ts);
      const double zm = detail::driver_on(path, seg, ts + 0.5 * hh);
      const double z1 = detail::driver_on(path, seg, te);
      const double k1 = a(y + z0);
      const double k2 = a(y + 0.5 * hh * k1 + zm);
      const double k3 = a(y + 0.5 * hh * k2 + zm);
      const double k4 = a(y + hh * k3 + z1);
      const std::size_t prev = sol.size() - 1;
      sol.dx[prev] = k1 + d;
      if (!sol.is_jump[prev]) {
        sol.dx_left[prev] = k1 + d;
      }
      y += hh / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
      if (!std::isfinite(y)) {
        fail("random ODE state became non-finite", ts);
      }
      if (j + 1 == seg.substeps && seg.jump_at_end) {
        const double z = d * te + (seg.jumps_before + seg.jump_size) +
                         (path.brownian ? path.brownian->at(te) : 0.0);
        push_node(sol, te, y + z, y + z1, z, true);
        sol.dx_left.back() = a(y + z1) + d;
      } else {
        push_node(sol, te, y + z1, y + z1, z1, false);
      }
      sol.y.push_back(y);
    }
  }
  const std::size_t last = sol.size() - 1;
  sol.dx[last] = a(sol.x[last]) + d;
  if (!sol.is_jump[last]) {
    sol.dx_left[last] = sol.dx[last];
  }
  sol.terminal = y;
  sol.flow_derivative = flow_derivative_exponential(a, sol);
  return sol;
}

double flow_derivative_exponential(const ScalarField& a, const Trajectory& solution) {
  return std::exp(solution.integrate(a.derivative));
}

double flow_derivative_variational(const ScalarField& a, const LevyPath& path, double x0, double step) {
  const auto segs = detail::segments(path, step);
  double y = x0;
  double u = 1.0;
  for (const auto& seg : segs) {
    const double h = (seg.t1 - seg.t0) / seg.substeps;
    for (int j = 0; j < seg.substeps; ++j) {
      const double ts = seg.t0 + h * j;
      const double te = j + 1 == seg.substeps ? seg.t1 : seg.t0 + h * (j + 1);
      const double hh = te - ts;
      const double z0 = detail::driver_on(path, seg, ts);
      const double zm = detail::driver_on(path, seg, ts + 0.5 * hh);
      const double z1 = detail::driver_on(path, seg, te);
      const double k1 = a(y + z0);
      const double l1 = a.slope(y + z0) * u;
      const double k2 = a(y + 0.5 * hh * k1 + zm);
      const double l2 = a.slope(y + 0.5 * hh * k1 + zm) * (u + 0.5 * hh * l1);
      const double k3 = a(y + 0.5 * hh * k2 + zm);
      const double l3 = a.slope(y + 0.5 * hh * k2 + zm) * (u + 0.5 * hh * l2);
      const double k4 = a(y + hh * k3 + z1);
      const double l4 = a.slope(y + hh * k3 + z1) * (u + hh * l3);
      y += hh / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
      u += hh / 6.0 * (l1 + 2.0 * l2 + 2.0 * l3 + l4);
      if (!std::isfinite(y) || !std::isfinite(u)) {
        fail("variational ODE state became non-finite", ts);
      }
    }
  }
  return u;
}

double jump_time_derivative(const ScalarField& a, const FlowSolution& solution,
                            const PathDecomposition& decomp, double eval_time) {
  if (eval_time != solution.horizon) {
    throw std::domain_error("jump_time_derivative is evaluated at the horizon only");
  }
  if (decomp.T > eval_time) {
    return 0.0;
  }
  if (decomp.T == eval_time) {
    throw NonDifferentiablePoint("jump time coincides with the evaluation time; one-sided derivatives differ");
  }
  const std::size_t k = solution.node_at(decomp.T);
  if (!solution.is_jump[k]) {
    throw std::domain_error("solution has no jump at the marked time");
  }
  const double gap = a(solution.x_left[k]) - a(solution.x[k]);
  return gap * std::exp(solution.integrate(a.derivative, k, solution.size() - 1));
}

std::optional<double> hitting_time_of_slope(const ScalarField& a, const Trajectory& solution, double c) {
  if (!(c > 0.0)) {
    throw std::domain_error("hitting_time_of_slope needs c > 0");
  }
  auto inside = [&](double xv) { return std::abs(a.slope(xv)) >= c; };
  if (inside(solution.x[0])) {
    return solution.times[0];
  }
  for (std::size_t k = 0; k + 1 < solution.size(); ++k) {
    if (inside(solution.x_left[k + 1])) {
      double lo = solution.times[k];
      double hi = solution.times[k + 1];
      for (int it = 0; it < 80 && hi - lo > 1e-15 * std::max(1.0, hi); ++it) {
        const double mid = 0.5 * (lo + hi);
        (inside(solution.interpolate(k, mid)) ? hi : lo) = mid;
      }
      return hi;
    }
    if (inside(solution.x[k + 1])) {
      return solution.times[k + 1];
    }
  }
  return std::nullopt;
}

void write_flow_csv(const FlowSolution& solution, std::ostream& os) {
  os << "time,Y,X,X_left\n";
  for (std::size_t k = 0; k < solution.size(); ++k) {
    os << shortest(solution.times[k]) << ',' << shortest(solution.y[k]) << ',' << shortest(solution.x[k])
       << ',' << shortest(solution.x_left[k]) << '\n';
  }
}

}  // namespace levyreg
