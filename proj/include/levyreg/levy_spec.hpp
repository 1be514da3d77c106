#pragma once

#include <functional>
#include <string>
#include <variant>
#include <vector>

namespace levyreg {

struct Atom {
  double size = 0.0;  // nonzero
  double rate = 0.0;  // jumps per unit time
  bool operator==(const Atom&) const = default;
};

struct FiniteAtomic {
  std::vector<Atom> atoms;
};

// Levels n = 1..levels of a family whose idealized limit (levels -> infinity)
// may carry infinite mass. Sizes shrink strictly towards zero with n.
struct TruncatedAtomicFamily {
  std::function<double(int)> size_of_level;
  std::function<double(int)> rate_of_level;
  int levels = 1;
  bool idealized_infinite = false;

  std::vector<Atom> atoms() const;
};

// Intensity nu(dz) = intensity(z) dz on [-negative_extent, 0) u (0, positive_extent].
struct DensityForm {
  std::function<double(double)> intensity;
  double negative_extent = 0.0;
  double positive_extent = 0.0;
};

using JumpMeasureSpec = std::variant<FiniteAtomic, TruncatedAtomicFamily, DensityForm>;

struct LevyTriplet {
  double drift = 0.0;
  double brownian_variance = 0.0;
  JumpMeasureSpec jumps = FiniteAtomic{};
};

struct KallenbergProfile {
  struct Entry {
    double epsilon;
    double ratio;
  };
  std::vector<Entry> grid;
  // Ratios strictly increasing as epsilon decreases.
  bool diverging = false;
  // Convolution-power condition; never evaluated numerically.
  std::string condition_a = "not evaluated";
};

// Validating constructors. Throw std::invalid_argument on broken invariants.
JumpMeasureSpec make_finite_atomic(std::vector<Atom> atoms);
JumpMeasureSpec make_family(std::function<double(int)> size_of_level,
                            std::function<double(int)> rate_of_level, int levels,
                            bool idealized_infinite);
// sizes size_scale * size_ratio^n, rates rate_scale * rate_ratio^n.
JumpMeasureSpec make_geometric_family(double size_scale, double size_ratio, double rate_scale,
                                      double rate_ratio, int levels, bool idealized_infinite);
// sizes 2^-n with rates 2^n, n = 1..levels.
JumpMeasureSpec make_dyadic_family(int levels);
JumpMeasureSpec make_density(std::function<double(double)> intensity, double negative_extent,
                             double positive_extent);
// scale * |z|^-exponent on both sides up to `extent`.
JumpMeasureSpec make_power_density(double scale, double exponent, double extent,
                                   bool two_sided = true);

void validate(const LevyTriplet& triplet);

double total_rate(const JumpMeasureSpec& spec, double cutoff);
bool is_infinite(const JumpMeasureSpec& spec);
double mu_measure(const JumpMeasureSpec& spec, double epsilon);
KallenbergProfile kallenberg_b_profile(const JumpMeasureSpec& spec, const std::vector<double>& eps_grid);
bool doblin_predicts_atoms(const JumpMeasureSpec& spec);

// eps_i = 10^(-i/2), i = 2..12
std::vector<double> default_epsilon_grid();

// Integral of z nu(dz) over cutoff <= |z| <= 1.
double small_jump_mean(const JumpMeasureSpec& spec, double cutoff);

// Atoms of an atomic spec with |size| >= cutoff (empty for DensityForm).
std::vector<Atom> atoms_above(const JumpMeasureSpec& spec, double cutoff);

}  // namespace levyreg
