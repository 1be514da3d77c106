#pragma once

#include "levyreg/path_sampler.hpp"

#include <cstddef>
#include <functional>
#include <ostream>
#include <stdexcept>
#include <vector>

namespace levyreg {

// Cadlag solution sampled on a grid that contains every jump time. At a jump
// node, x_left holds X_{t-} and x holds X_t; elsewhere they coincide.
struct Trajectory {
  double horizon = 1.0;
  std::vector<double> times;
  std::vector<double> x;
  std::vector<double> x_left;
  std::vector<double> z;  // driver value Z_t at each node
  std::vector<char> is_jump;
  // Velocity of the continuous part at x (right) and x_left (left). Only
  // meaningful when `smooth` (no Brownian skeleton).
  std::vector<double> dx;
  std::vector<double> dx_left;
  bool smooth = true;

  std::size_t size() const { return times.size(); }
  double terminal_x() const { return x.back(); }
  // Index of the node at exactly time t; throws std::out_of_range if absent.
  std::size_t node_at(double t) const;
  // Integral of g(X_s) over [times[from], times[to]]: Simpson's rule with
  // cubic-Hermite midpoints when smooth, trapezoid otherwise.
  double integrate(const std::function<double(double)>& g, std::size_t from, std::size_t to) const;
  double integrate(const std::function<double(double)>& g) const { return integrate(g, 0, size() - 1); }
  // X at time s inside cell [times[k], times[k+1]) from the Hermite interpolant.
  double interpolate(std::size_t k, double s) const;
};

class NumericFailure : public std::runtime_error {
public:
  NumericFailure(const std::string& what, double last_good_time)
      : std::runtime_error(what), last_good_time_(last_good_time) {}
  double last_good_time() const { return last_good_time_; }

private:
  double last_good_time_;
};

namespace detail {

// Interval between consecutive breakpoints (0, jump times, Brownian nodes,
// horizon), split into `substeps` equal RK steps.
struct Segment {
  double t0 = 0.0;
  double t1 = 0.0;
  int substeps = 1;
  double jumps_before = 0.0;  // sum of jump sizes at times <= t0
  bool jump_at_end = false;
  double jump_size = 0.0;
};

std::vector<Segment> segments(const LevyPath& path, double step);

// Driver value on a segment, with the jump at t1 (if any) excluded.
inline double driver_on(const LevyPath& path, const Segment& seg, double t) {
  return path.drift_rate * t + seg.jumps_before + (path.brownian ? path.brownian->at(t) : 0.0);
}

}  // namespace detail
}  // namespace levyreg
