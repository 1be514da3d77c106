#pragma once

#include "levyreg/fields.hpp"
#include "levyreg/trajectory.hpp"

#include <cstddef>
#include <cstdint>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

namespace levyreg {

// Sorted terminal values of a Monte Carlo run.
struct SampleBatch {
  std::vector<double> values;
  std::size_t count = 0;
  std::string label;
  std::uint64_t seed = 0;

  static SampleBatch from(std::vector<double> values, std::string label = {}, std::uint64_t seed = 0);
  double range() const { return values.empty() ? 0.0 : values.back() - values.front(); }
};

struct AtomCandidate {
  double location;
  double mass;
  double window;
};

struct AtomReport {
  std::vector<AtomCandidate> candidates;  // by mass, descending
  bool atoms_present = false;
  double threshold = 0.0;
  double window = 0.0;
};

struct KsResult {
  double statistic = 0.0;
  double critical_1pct = 0.0;
  bool below_critical() const { return statistic < critical_1pct; }
};

struct DensityCurve {
  std::vector<double> x;
  std::vector<double> density;
  double bandwidth = 0.0;
  bool degenerate = false;
};

// Solution of x' = a(x) + d at time t (RK4, t / 2^12 steps by default).
double deterministic_skeleton(const ScalarField& a, double d, double x0, double t, int steps = 4096);

// 1e-6 * sample range
double default_atom_window(const SampleBatch& batch);
// 3 sqrt(log n / n)
double default_atom_threshold(std::size_t n);

AtomReport detect_atoms(const SampleBatch& batch, double window, double threshold);
AtomReport detect_atoms(const SampleBatch& batch);

// Largest fraction of the sample within `halfwidth` of some translate of
// spacing * Z, maximized exactly over the offset.
double lattice_concentration(const SampleBatch& batch, double spacing, double halfwidth);
// Same fraction for the fixed lattice offset + spacing * Z.
double lattice_concentration_at(const SampleBatch& batch, double spacing, double halfwidth, double offset);

constexpr double kKsCoefficient1pct = 1.628;
KsResult two_sample_ks(const SampleBatch& first, const SampleBatch& second);

// Silverman bandwidth 0.9 min(sd, IQR / 1.34) n^(-1/5).
double silverman_bandwidth(const SampleBatch& batch);
DensityCurve kde(const SampleBatch& batch, std::optional<double> bandwidth = std::nullopt, int points = 512);
void write_density_csv(const DensityCurve& curve, std::ostream& os);

// Jump times with |a(X_t) - a(X_{t-})| >= eta.
std::vector<double> drift_jump_events(const ScalarField& a, const Trajectory& traj, double eta);

}  // namespace levyreg
