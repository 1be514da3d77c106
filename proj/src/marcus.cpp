#include "levyreg/marcus.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <sstream>
#include <string>

namespace levyreg {
namespace {

int flow_substeps(double u) { return std::max(8, static_cast<int>(std::ceil(std::abs(u) / 0.05))); }

double flow_rk4(const DiffusionField& sigma, double y, double u, int n) {
  const double h = 1.0 / n;
  double p = y;
  for (int i = 0; i < n; ++i) {
    const double k1 = u * sigma(p);
    const double k2 = u * sigma(p + 0.5 * h * k1);
    const double k3 = u * sigma(p + 0.5 * h * k2);
    const double k4 = u * sigma(p + h * k3);
    p += h / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    if (!std::isfinite(p)) {
      std::ostringstream msg;
      msg << "flow of sigma from " << y << " over jump " << u << " diverged before unit time";
      throw FlowDivergence(msg.str());
    }
  }
  return p;
}

std::string shortest(double v) {
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

void push_node(Trajectory& tr, double t, double x, double x_left, double z, bool jump) {
  tr.times.push_back(t);
  tr.x.push_back(x);
  tr.x_left.push_back(x_left);
  tr.z.push_back(z);
  tr.is_jump.push_back(jump ? 1 : 0);
  tr.dx.push_back(0.0);
  tr.dx_left.push_back(0.0);
}

}  // namespace

double jump_flow_phi(const DiffusionField& sigma, double y, double u, double tol) {
  if (!(tol > 0.0)) {
    throw std::domain_error("jump_flow_phi tolerance must be positive");
  }
  if (u == 0.0) {
    return y;
  }
  int n = flow_substeps(u);
  double coarse = flow_rk4(sigma, y, u, n);
  for (int refinements = 0; refinements < 12; ++refinements) {
    n *= 2;
    const double fine = flow_rk4(sigma, y, u, n);
    if (std::abs(fine - coarse) <= tol) {
      return fine;
    }
    coarse = fine;
  }
  return coarse;
}

FlowWithSensitivity jump_flow_with_sensitivity(const DiffusionField& sigma, double y, double u) {
  const int n = flow_substeps(u);
  const double h = 1.0 / n;
  double p = y;
  double l = 0.0;
  for (int i = 0; i < n; ++i) {
    const double k1 = u * sigma(p);
    const double m1 = u * sigma.slope(p);
    const double p2 = p + 0.5 * h * k1;
    const double k2 = u * sigma(p2);
    const double m2 = u * sigma.slope(p2);
    const double p3 = p + 0.5 * h * k2;
    const double k3 = u * sigma(p3);
    const double m3 = u * sigma.slope(p3);
    const double p4 = p + h * k3;
    const double k4 = u * sigma(p4);
    const double m4 = u * sigma.slope(p4);
    p += h / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    l += h / 6.0 * (m1 + 2.0 * m2 + 2.0 * m3 + m4);
    if (!std::isfinite(p) || !std::isfinite(l)) {
      throw FlowDivergence("flow of sigma diverged before unit time");
    }
  }
  return {p, l};
}

MarcusTrajectory marcus_solve(const ScalarField& a, const DiffusionField& sigma, const LevyPath& path,
                              double x0, double step, double jump_tol) {
  const auto segs = detail::segments(path, step);
  const double d = path.drift_rate;
  const bool brownian = path.brownian.has_value();
  auto velocity = [&](double xv) { return a(xv) + d * sigma(xv); };

  MarcusTrajectory tr;
  tr.horizon = path.horizon;
  tr.smooth = !brownian;
  double x = x0;
  push_node(tr, 0.0, x, x, detail::driver_on(path, segs.front(), 0.0), false);
  for (const auto& seg : segs) {
    const double h = (seg.t1 - seg.t0) / seg.substeps;
    for (int j = 0; j < seg.substeps; ++j) {
      const double ts = seg.t0 + h * j;
      const double te = j + 1 == seg.substeps ? seg.t1 : seg.t0 + h * (j + 1);
      const double hh = te - ts;
      const std::size_t prev = tr.size() - 1;
      if (!brownian) {
        const double k1 = velocity(x);
        const double k2 = velocity(x + 0.5 * hh * k1);
        const double k3 = velocity(x + 0.5 * hh * k2);
        const double k4 = velocity(x + hh * k3);
        tr.dx[prev] = k1;
        if (!tr.is_jump[prev]) {
          tr.dx_left[prev] = k1;
        }
        x += hh / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
      } else {
        const double dz = d * hh + (path.brownian->at(te) - path.brownian->at(ts));
        const double ax = a(x);
        const double sx = sigma(x);
        const double xp = x + ax * hh + sx * dz;
        x += 0.5 * (ax + a(xp)) * hh + 0.5 * (sx + sigma(xp)) * dz;
      }
      if (!std::isfinite(x)) {
        std::ostringstream msg;
        msg << "Marcus state became non-finite (last good time " << ts << ")";
        throw FlowDivergence(msg.str());
      }
      const double z1 = detail::driver_on(path, seg, te);
      if (j + 1 == seg.substeps && seg.jump_at_end) {
        const double pre = x;
        try {
          x = jump_flow_phi(sigma, pre, seg.jump_size, jump_tol);
        } catch (const FlowDivergence& e) {
          std::ostringstream msg;
          msg << e.what() << " at jump time " << te;
          throw FlowDivergence(msg.str());
        }
        tr.jump_log.push_back({te, pre, seg.jump_size, x});
        const double z = d * te + (seg.jumps_before + seg.jump_size) + (brownian ? path.brownian->at(te) : 0.0);
        push_node(tr, te, x, pre, z, true);
        if (!brownian) {
          tr.dx_left.back() = velocity(pre);
        }
      } else {
        push_node(tr, te, x, x, z1, false);
      }
    }
  }
  if (!brownian) {
    const std::size_t last = tr.size() - 1;
    tr.dx[last] = velocity(tr.x[last]);
    if (!tr.is_jump[last]) {
      tr.dx_left[last] = tr.dx[last];
    }
  }
  tr.terminal = x;
  return tr;
}

double marcus_remainder_rho(const DiffusionField& sigma, double y, double z) {
  return jump_flow_phi(sigma, y, z) - y - sigma(y) * z;
}

double fit_remainder_constant(const DiffusionField& sigma, Interval y_range, double z_max, int ny, int nz) {
  double k_hat = 0.0;
  for (double y : probe_grid(y_range, ny)) {
    for (double z : probe_grid({-z_max, z_max}, nz)) {
      if (z == 0.0) {
        continue;
      }
      k_hat = std::max(k_hat, std::abs(marcus_remainder_rho(sigma, y, z)) / (z * z));
    }
  }
  return k_hat;
}

double chain_rule_residual(const ScalarField& f, const ScalarField& a, const DiffusionField& sigma,
                           const MarcusTrajectory& traj, double k, const LevyPath& path) {
  if (traj.horizon != path.horizon) {
    throw std::invalid_argument("trajectory and path horizons differ");
  }
  const auto [lo_it, hi_it] = std::minmax_element(traj.x.begin(), traj.x.end());
  const auto [llo_it, lhi_it] = std::minmax_element(traj.x_left.begin(), traj.x_left.end());
  const Interval range{std::min(*lo_it, *llo_it), std::max(*hi_it, *lhi_it)};
  for (double xv : probe_grid(range)) {
    if (std::abs(f.slope(xv) * sigma(xv) - k) > 1e-8) {
      std::ostringstream msg;
      msg << "chain_rule_residual precondition: f' sigma = " << f.slope(xv) * sigma(xv) << " at x=" << xv
          << ", expected " << k;
      throw std::invalid_argument(msg.str());
    }
  }
  auto integrand = [&](double xv) { return f.slope(xv) * a(xv); };
  const double f0 = f(traj.x[0]);
  double integral = 0.0;
  double worst = std::abs(f(traj.x[0]) - f0 - k * traj.z[0]);
  for (std::size_t i = 0; i + 1 < traj.size(); ++i) {
    integral += traj.integrate(integrand, i, i + 1);
    worst = std::max(worst, std::abs(f(traj.x[i + 1]) - f0 - integral - k * traj.z[i + 1]));
  }
  return worst;
}

void write_jump_log_csv(const MarcusTrajectory& traj, std::ostream& os) {
  os << "time,pre,size,post\n";
  for (const auto& r : traj.jump_log) {
    os << shortest(r.time) << ',' << shortest(r.pre_state) << ',' << shortest(r.jump_size) << ','
       << shortest(r.post_state) << '\n';
  }
}

}  // namespace levyreg
