#include "levyreg/diagnostics.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace levyreg {
namespace {

constexpr std::size_t kMinBatch = 1000;

void require_batch(const SampleBatch& batch, const char* op) {
  if (batch.count < kMinBatch) {
    throw std::domain_error(std::string(op) + " needs at least 1000 samples");
  }
}

double quantile_sorted(const std::vector<double>& v, double q) {
  const double pos = q * static_cast<double>(v.size() - 1);
  const auto i = static_cast<std::size_t>(pos);
  const double frac = pos - static_cast<double>(i);
  return i + 1 < v.size() ? v[i] + frac * (v[i + 1] - v[i]) : v[i];
}

std::string shortest(double v) {
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

}  // namespace

SampleBatch SampleBatch::from(std::vector<double> values, std::string label, std::uint64_t seed) {
  std::sort(values.begin(), values.end());
  SampleBatch b;
  b.count = values.size();
  b.values = std::move(values);
  b.label = std::move(label);
  b.seed = seed;
  return b;
}

double deterministic_skeleton(const ScalarField& a, double d, double x0, double t, int steps) {
  if (!(t > 0.0)) {
    throw std::domain_error("deterministic_skeleton needs t > 0");
  }
  const double h = t / steps;
  double x = x0;
  for (int i = 0; i < steps; ++i) {
    const double k1 = a(x) + d;
    const double k2 = a(x + 0.5 * h * k1) + d;
    const double k3 = a(x + 0.5 * h * k2) + d;
    const double k4 = a(x + h * k3) + d;
    x += h / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
  }
  return x;
}

double default_atom_window(const SampleBatch& batch) { return 1e-6 * batch.range(); }

double default_atom_threshold(std::size_t n) {
  const auto nn = static_cast<double>(n);
  return 3.0 * std::sqrt(std::log(nn) / nn);
}

AtomReport detect_atoms(const SampleBatch& batch, double window, double threshold) {
  require_batch(batch, "detect_atoms");
  if (!(window > 0.0)) {
    throw std::domain_error("detect_atoms window must be positive");
  }
  AtomReport report;
  report.threshold = threshold;
  report.window = window;
  const auto& v = batch.values;
  const auto n = static_cast<double>(batch.count);
  const auto needed = static_cast<std::size_t>(std::ceil(threshold * n));

  std::size_t j = 0;
  bool in_cluster = false;
  double cluster_end = 0.0;
  AtomCandidate best{};
  std::size_t best_count = 0;
  auto close_cluster = [&] {
    if (in_cluster) {
      report.candidates.push_back(best);
    }
    in_cluster = false;
    best_count = 0;
  };
  for (std::size_t i = 0; i < v.size(); ++i) {
    j = std::max(j, i);
    while (j + 1 < v.size() && v[j + 1] - v[i] <= window) {
      ++j;
    }
    const std::size_t count = j - i + 1;
    if (count < needed) {
      if (in_cluster && v[i] > cluster_end) {
        close_cluster();
      }
      continue;
    }
    if (in_cluster && v[i] > cluster_end) {
      close_cluster();
    }
    in_cluster = true;
    cluster_end = std::max(cluster_end, v[j]);
    if (count > best_count) {
      best_count = count;
      best = {0.5 * (v[i] + v[j]), static_cast<double>(count) / n, window};
    }
  }
  close_cluster();
  std::stable_sort(report.candidates.begin(), report.candidates.end(),
                   [](const AtomCandidate& a, const AtomCandidate& b) { return a.mass > b.mass; });
  report.atoms_present = !report.candidates.empty();
  return report;
}

AtomReport detect_atoms(const SampleBatch& batch) {
  require_batch(batch, "detect_atoms");
  double window = default_atom_window(batch);
  if (window == 0.0) {
    window = 1e-12 * std::max(1.0, std::abs(batch.values.front()));
  }
  return detect_atoms(batch, window, default_atom_threshold(batch.count));
}

double lattice_concentration(const SampleBatch& batch, double spacing, double halfwidth) {
  if (!(spacing > 0.0) || !(halfwidth > 0.0) || !(halfwidth < 0.5 * spacing)) {
    throw std::domain_error("lattice_concentration needs 0 < halfwidth < spacing / 2");
  }
  if (batch.count == 0) {
    return 0.0;
  }
  std::vector<double> r;
  r.reserve(2 * batch.count);
  for (double x : batch.values) {
    double m = x - spacing * std::floor(x / spacing);
    if (m >= spacing) {
      m -= spacing;
    }
    r.push_back(m);
  }
  std::sort(r.begin(), r.end());
  const std::size_t n = r.size();
  for (std::size_t i = 0; i < n; ++i) {
    r.push_back(r[i] + spacing);
  }
  std::size_t best = 0;
  std::size_t j = 0;
  for (std::size_t i = 0; i < n; ++i) {
    j = std::max(j, i);
    while (j + 1 < r.size() && r[j + 1] - r[i] <= 2.0 * halfwidth) {
      ++j;
    }
    best = std::max(best, j - i + 1);
  }
  return static_cast<double>(std::min(best, n)) / static_cast<double>(n);
}

double lattice_concentration_at(const SampleBatch& batch, double spacing, double halfwidth, double offset) {
  if (!(spacing > 0.0) || !(halfwidth > 0.0) || !(halfwidth < 0.5 * spacing)) {
    throw std::domain_error("lattice_concentration needs 0 < halfwidth < spacing / 2");
  }
  if (batch.count == 0) {
    return 0.0;
  }
  std::size_t hits = 0;
  for (double x : batch.values) {
    const double u = x - offset;
    const double dist = std::abs(u - spacing * std::nearbyint(u / spacing));
    hits += dist <= halfwidth ? 1 : 0;
  }
  return static_cast<double>(hits) / static_cast<double>(batch.count);
}

KsResult two_sample_ks(const SampleBatch& first, const SampleBatch& second) {
  require_batch(first, "two_sample_ks");
  require_batch(second, "two_sample_ks");
  const auto& a = first.values;
  const auto& b = second.values;
  const auto n = static_cast<double>(a.size());
  const auto m = static_cast<double>(b.size());
  std::size_t i = 0;
  std::size_t j = 0;
  double d = 0.0;
  while (i < a.size() && j < b.size()) {
    const double t = std::min(a[i], b[j]);
    while (i < a.size() && a[i] == t) {
      ++i;
    }
    while (j < b.size() && b[j] == t) {
      ++j;
    }
    d = std::max(d, std::abs(static_cast<double>(i) / n - static_cast<double>(j) / m));
  }
  return {d, kKsCoefficient1pct * std::sqrt((n + m) / (n * m))};
}

double silverman_bandwidth(const SampleBatch& batch) {
  const auto& v = batch.values;
  const auto n = static_cast<double>(v.size());
  double mean = 0.0;
  for (double x : v) {
    mean += x;
  }
  mean /= n;
  double ss = 0.0;
  for (double x : v) {
    ss += (x - mean) * (x - mean);
  }
  const double sd = std::sqrt(ss / (n - 1.0));
  const double iqr = quantile_sorted(v, 0.75) - quantile_sorted(v, 0.25);
  double spread = std::min(sd, iqr / 1.34);
  if (!(spread > 0.0)) {
    spread = sd;
  }
  return 0.9 * spread * std::pow(n, -0.2);
}

DensityCurve kde(const SampleBatch& batch, std::optional<double> bandwidth, int points) {
  require_batch(batch, "kde");
  DensityCurve curve;
  if (batch.range() == 0.0) {
    curve.degenerate = true;
    return curve;
  }
  const double h = bandwidth.value_or(silverman_bandwidth(batch));
  if (!(h > 0.0)) {
    throw std::domain_error("kde bandwidth must be positive");
  }
  curve.bandwidth = h;
  const auto& v = batch.values;
  const double lo = v.front() - 3.0 * h;
  const double hi = v.back() + 3.0 * h;
  const double norm = 1.0 / (static_cast<double>(v.size()) * h * std::sqrt(2.0 * std::numbers::pi));
  for (int k = 0; k < points; ++k) {
    const double x = lo + (hi - lo) * k / (points - 1);
    auto first = std::lower_bound(v.begin(), v.end(), x - 8.0 * h);
    auto last = std::upper_bound(first, v.end(), x + 8.0 * h);
    double sum = 0.0;
    for (auto it = first; it != last; ++it) {
      const double u = (x - *it) / h;
      sum += std::exp(-0.5 * u * u);
    }
    curve.x.push_back(x);
    curve.density.push_back(norm * sum);
  }
  return curve;
}

void write_density_csv(const DensityCurve& curve, std::ostream& os) {
  os << "x,density\n";
  for (std::size_t k = 0; k < curve.x.size(); ++k) {
    os << shortest(curve.x[k]) << ',' << shortest(curve.density[k]) << '\n';
  }
}

std::vector<double> drift_jump_events(const ScalarField& a, const Trajectory& traj, double eta) {
  if (!(eta > 0.0)) {
    throw std::domain_error("drift_jump_events needs eta > 0");
  }
  std::vector<double> times;
  for (std::size_t k = 0; k < traj.size(); ++k) {
    if (traj.is_jump[k] && std::abs(a(traj.x[k]) - a(traj.x_left[k])) >= eta) {
      times.push_back(traj.times[k]);
    }
  }
  return times;
}

}  // namespace levyreg
