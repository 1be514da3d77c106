#pragma once

#include "levyreg/levy_spec.hpp"
#include "levyreg/rng.hpp"

#include <cstddef>
#include <optional>
#include <ostream>
#include <stdexcept>
#include <vector>

namespace levyreg {

struct Jump {
  double time = 0.0;
  double size = 0.0;
};

// Piecewise-linear Brownian path: values[k] = W(k * cell), values[0] = 0.
struct BrownianSkeleton {
  double cell = 0.0;
  std::vector<double> values;

  double at(double t) const;
};

// Realized cadlag driver Z_t = drift_rate * t + sum_{t_i <= t} size_i (+ W_t).
struct LevyPath {
  double horizon = 1.0;
  double drift_rate = 0.0;
  std::vector<Jump> jumps;  // strictly increasing times in (0, horizon]
  std::optional<BrownianSkeleton> brownian;

  double value(double t) const;
  double left_limit(double t) const;
  double terminal() const { return value(horizon); }
  // Value with every jump at time <= t included, but without drift/Brownian part.
  double jump_sum(double t) const;
  void validate() const;
};

struct PathDecomposition {
  double eta = 0.0;
  double upper = 0.0;
  double T = 0.0;
  double T2 = 0.0;
  double marked_size = 0.0;
  LevyPath residual;  // path with the jump at T removed
};

class NotEnoughMarkedJumps : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

// Draws jump sizes from nu restricted to {|z| >= trunc}, normalized.
class PathSampler {
public:
  PathSampler(const LevyTriplet& triplet, double horizon, double trunc, bool compensate,
              int brownian_cells_per_unit = 4096);

  LevyPath sample(RngStream& rng) const;

  double jump_rate() const { return rate_; }
  double drift_rate() const { return drift_rate_; }

private:
  double draw_size(RngStream& rng) const;

  double horizon_;
  double brownian_sd_;
  int brownian_cells_;
  double rate_ = 0.0;
  double drift_rate_ = 0.0;
  // Discrete size distribution: cumulative weights over `sizes_`, and for
  // densities the cell edges to interpolate within.
  std::vector<double> cumulative_;
  std::vector<double> sizes_;
  std::vector<double> cell_lo_;
  std::vector<double> cell_hi_;
  bool continuous_sizes_ = false;
};

LevyPath sample_path(const LevyTriplet& triplet, double horizon, double trunc, bool compensate,
                     RngStream& rng);

PathDecomposition decompose_first_jump(const LevyPath& path, double eta, double upper);
LevyPath resample_first_jump_time(const PathDecomposition& decomp, RngStream& rng);
LevyPath shift_jump_time(const LevyPath& path, std::size_t jump_index, double h);
// Reinsert the marked jump at `time` in the residual path.
LevyPath place_marked_jump(const PathDecomposition& decomp, double time);

// kind,time,value rows: one drift row, one per jump, one per Brownian node.
void write_path_csv(const LevyPath& path, std::ostream& os);

}  // namespace levyreg
