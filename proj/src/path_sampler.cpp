#include "levyreg/path_sampler.hpp"

#include "levyreg/numerics.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <limits>
#include <string>

namespace levyreg {
namespace {

constexpr int kDensityCellsPerSide = 1024;

std::string shortest(double v) {
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

// Nudges ties so that times are strictly increasing.
void enforce_strict_order(std::vector<Jump>& jumps) {
  for (std::size_t i = 1; i < jumps.size(); ++i) {
    if (jumps[i].time <= jumps[i - 1].time) {
      jumps[i].time = std::nextafter(jumps[i - 1].time, std::numeric_limits<double>::infinity());
    }
  }
}

}  // namespace

double BrownianSkeleton::at(double t) const {
  if (values.empty() || t <= 0.0) {
    return 0.0;
  }
  const double pos = t / cell;
  const auto k = static_cast<std::size_t>(pos);
  if (k + 1 >= values.size()) {
    return values.back();
  }
  const double frac = pos - static_cast<double>(k);
  return values[k] + frac * (values[k + 1] - values[k]);
}

double LevyPath::jump_sum(double t) const {
  double sum = 0.0;
  for (const auto& j : jumps) {
    if (j.time > t) {
      break;
    }
    sum += j.size;
  }
  return sum;
}

double LevyPath::value(double t) const {
  return drift_rate * t + jump_sum(t) + (brownian ? brownian->at(t) : 0.0);
}

double LevyPath::left_limit(double t) const {
  double sum = 0.0;
  for (const auto& j : jumps) {
    if (j.time >= t) {
      break;
    }
    sum += j.size;
  }
  return drift_rate * t + sum + (brownian ? brownian->at(t) : 0.0);
}

void LevyPath::validate() const {
  if (!(horizon > 0.0)) {
    throw std::domain_error("path horizon must be positive");
  }
  double prev = 0.0;
  for (const auto& j : jumps) {
    if (!(j.time > prev) || j.time > horizon) {
      throw std::domain_error("jump times must be strictly increasing in (0, horizon]");
    }
    if (j.size == 0.0) {
      throw std::domain_error("jump sizes must be nonzero");
    }
    prev = j.time;
  }
}

PathSampler::PathSampler(const LevyTriplet& triplet, double horizon, double trunc, bool compensate,
                         int brownian_cells_per_unit)
    : horizon_(horizon),
      brownian_sd_(std::sqrt(triplet.brownian_variance)),
      brownian_cells_(brownian_cells_per_unit) {
  validate(triplet);
  if (!(horizon > 0.0) || !(trunc > 0.0)) {
    throw std::domain_error("sample_path needs horizon > 0 and trunc > 0");
  }
  if (triplet.brownian_variance > 0.0 && brownian_cells_per_unit < 1) {
    throw std::domain_error("Brownian skeleton needs at least one cell per unit time");
  }
  double acc = 0.0;
  if (const auto* density = std::get_if<DensityForm>(&triplet.jumps)) {
    continuous_sizes_ = true;
    auto add_side = [&](double extent, double sign) {
      if (!(extent > trunc)) {
        return;
      }
      const double log_span = std::log(extent / trunc);
      for (int i = 0; i < kDensityCellsPerSide; ++i) {
        const double lo = trunc * std::exp(log_span * i / kDensityCellsPerSide);
        const double hi = i + 1 == kDensityCellsPerSide
                              ? extent
                              : trunc * std::exp(log_span * (i + 1) / kDensityCellsPerSide);
        acc += numerics::integrate([&](double z) { return density->intensity(sign * z); }, lo, hi);
        cumulative_.push_back(acc);
        cell_lo_.push_back(sign * lo);
        cell_hi_.push_back(sign * hi);
      }
    };
    add_side(density->positive_extent, 1.0);
    add_side(density->negative_extent, -1.0);
  } else {
    for (const auto& a : atoms_above(triplet.jumps, trunc)) {
      acc += a.rate;
      cumulative_.push_back(acc);
      sizes_.push_back(a.size);
    }
  }
  rate_ = acc;
  if (!std::isfinite(rate_)) {
    throw std::domain_error("jump measure above the truncation level is not finite");
  }
  drift_rate_ = triplet.drift - (compensate ? small_jump_mean(triplet.jumps, trunc) : 0.0);
}

double PathSampler::draw_size(RngStream& rng) const {
  const double u = rng.uniform() * rate_;
  auto it = std::upper_bound(cumulative_.begin(), cumulative_.end(), u);
  auto idx = static_cast<std::size_t>(it - cumulative_.begin());
  idx = std::min(idx, cumulative_.size() - 1);
  if (!continuous_sizes_) {
    return sizes_[idx];
  }
  // Uniform within the (narrow, log-spaced) cell.
  return rng.uniform(cell_lo_[idx], cell_hi_[idx]);
}

LevyPath PathSampler::sample(RngStream& rng) const {
  LevyPath path;
  path.horizon = horizon_;
  path.drift_rate = drift_rate_;
  const auto count = rate_ > 0.0 ? rng.poisson(rate_ * horizon_) : 0;
  path.jumps.resize(count);
  for (auto& j : path.jumps) {
    j.time = horizon_ * rng.uniform();
    j.size = draw_size(rng);
  }
  std::sort(path.jumps.begin(), path.jumps.end(),
            [](const Jump& a, const Jump& b) { return a.time < b.time; });
  enforce_strict_order(path.jumps);
  if (brownian_sd_ > 0.0) {
    BrownianSkeleton w;
    const auto cells = static_cast<std::size_t>(std::ceil(horizon_ * brownian_cells_ - 1e-9));
    w.cell = horizon_ / static_cast<double>(cells);
    w.values.resize(cells + 1, 0.0);
    const double sd = brownian_sd_ * std::sqrt(w.cell);
    for (std::size_t k = 1; k <= cells; ++k) {
      w.values[k] = w.values[k - 1] + sd * rng.normal();
    }
    path.brownian = std::move(w);
  }
  return path;
}

LevyPath sample_path(const LevyTriplet& triplet, double horizon, double trunc, bool compensate,
                     RngStream& rng) {
  return PathSampler(triplet, horizon, trunc, compensate).sample(rng);
}

PathDecomposition decompose_first_jump(const LevyPath& path, double eta, double upper) {
  std::vector<std::size_t> marked;
  for (std::size_t i = 0; i < path.jumps.size() && marked.size() < 2; ++i) {
    const double s = path.jumps[i].size;
    if (s >= eta && s <= upper) {
      marked.push_back(i);
    }
  }
  if (marked.size() < 2) {
    throw NotEnoughMarkedJumps("fewer than two jumps with size in [" + std::to_string(eta) + ", " +
                               std::to_string(upper) + "]");
  }
  PathDecomposition d;
  d.eta = eta;
  d.upper = upper;
  d.T = path.jumps[marked[0]].time;
  d.T2 = path.jumps[marked[1]].time;
  d.marked_size = path.jumps[marked[0]].size;
  d.residual = path;
  d.residual.jumps.erase(d.residual.jumps.begin() + static_cast<std::ptrdiff_t>(marked[0]));
  return d;
}

LevyPath place_marked_jump(const PathDecomposition& decomp, double time) {
  LevyPath out = decomp.residual;
  auto it = std::upper_bound(out.jumps.begin(), out.jumps.end(), time,
                             [](double t, const Jump& j) { return t < j.time; });
  out.jumps.insert(it, Jump{time, decomp.marked_size});
  enforce_strict_order(out.jumps);
  return out;
}

LevyPath resample_first_jump_time(const PathDecomposition& decomp, RngStream& rng) {
  return place_marked_jump(decomp, decomp.T2 * rng.uniform());
}

LevyPath shift_jump_time(const LevyPath& path, std::size_t jump_index, double h) {
  if (jump_index >= path.jumps.size()) {
    throw std::domain_error("shift_jump_time: jump index out of range");
  }
  const double t = path.jumps[jump_index].time + h;
  const double before = jump_index == 0 ? 0.0 : path.jumps[jump_index - 1].time;
  const double after = jump_index + 1 < path.jumps.size() ? path.jumps[jump_index + 1].time : std::numeric_limits<double>::infinity();
  if (!(t > before) || !(t < after) || t > path.horizon) {
    throw std::domain_error("shift_jump_time: shifted time breaks ordering or leaves (0, horizon]");
  }
  LevyPath out = path;
  out.jumps[jump_index].time = t;
  return out;
}

void write_path_csv(const LevyPath& path, std::ostream& os) {
  os << "kind,time,value\n";
  os << "drift,0," << shortest(path.drift_rate) << '\n';
  for (const auto& j : path.jumps) {
    os << "jump," << shortest(j.time) << ',' << shortest(j.size) << '\n';
  }
  if (path.brownian) {
    for (std::size_t k = 0; k < path.brownian->values.size(); ++k) {
      os << "brown," << shortest(path.brownian->cell * static_cast<double>(k)) << ','
         << shortest(path.brownian->values[k]) << '\n';
    }
  }
}

}  // namespace levyreg
