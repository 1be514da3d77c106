#include "levyreg/trajectory.hpp"

#include <algorithm>
#include <cmath>

namespace levyreg {

std::size_t Trajectory::node_at(double t) const {
  auto it = std::lower_bound(times.begin(), times.end(), t);
  if (it == times.end() || *it != t) {
    throw std::out_of_range("trajectory has no grid node at the requested time");
  }
  return static_cast<std::size_t>(it - times.begin());
}

double Trajectory::interpolate(std::size_t k, double s) const {
  const double h = times[k + 1] - times[k];
  const double x0 = x[k];
  const double x1 = x_left[k + 1];
  const double u = (s - times[k]) / h;
  if (!smooth) {
    return x0 + u * (x1 - x0);
  }
  const double h00 = (1 + 2 * u) * (1 - u) * (1 - u);
  const double h10 = u * (1 - u) * (1 - u);
  const double h01 = u * u * (3 - 2 * u);
  const double h11 = u * u * (u - 1);
  return h00 * x0 + h10 * h * dx[k] + h01 * x1 + h11 * h * dx_left[k + 1];
}

double Trajectory::integrate(const std::function<double(double)>& g, std::size_t from,
                             std::size_t to) const {
  double sum = 0.0;
  for (std::size_t k = from; k < to; ++k) {
    const double h = times[k + 1] - times[k];
    const double g0 = g(x[k]);
    const double g1 = g(x_left[k + 1]);
    if (smooth) {
      const double mid = 0.5 * (x[k] + x_left[k + 1]) + 0.125 * h * (dx[k] - dx_left[k + 1]);
      sum += h / 6.0 * (g0 + 4.0 * g(mid) + g1);
    } else {
      sum += 0.5 * h * (g0 + g1);
    }
  }
  return sum;
}

namespace detail {

std::vector<Segment> segments(const LevyPath& path, double step) {
  if (!(step > 0.0)) {
    throw std::domain_error("solver step must be positive");
  }
  std::vector<double> breaks;
  breaks.reserve(path.jumps.size() + 2);
  breaks.push_back(0.0);
  if (path.brownian) {
    const auto& w = *path.brownian;
    for (std::size_t k = 1; k + 1 < w.values.size(); ++k) {
      const double t = w.cell * static_cast<double>(k);
      if (t < path.horizon) {
        breaks.push_back(t);
      }
    }
  }
  for (const auto& j : path.jumps) {
    if (j.time < path.horizon) {
      breaks.push_back(j.time);
    }
  }
  breaks.push_back(path.horizon);
  std::sort(breaks.begin(), breaks.end());
  breaks.erase(std::unique(breaks.begin(), breaks.end()), breaks.end());

  std::vector<Segment> out;
  out.reserve(breaks.size());
  std::size_t next_jump = 0;
  double jumps_before = 0.0;
  for (std::size_t i = 0; i + 1 < breaks.size(); ++i) {
    Segment seg;
    seg.t0 = breaks[i];
    seg.t1 = breaks[i + 1];
    seg.substeps = std::max(1, static_cast<int>(std::ceil((seg.t1 - seg.t0) / step - 1e-9)));
    seg.jumps_before = jumps_before;
    if (next_jump < path.jumps.size() && path.jumps[next_jump].time == seg.t1) {
      seg.jump_at_end = true;
      seg.jump_size = path.jumps[next_jump].size;
      jumps_before += seg.jump_size;
      ++next_jump;
    }
    out.push_back(seg);
  }
  return out;
}

}  // namespace detail
}  // namespace levyreg
