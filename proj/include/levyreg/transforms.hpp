#pragma once

#include "levyreg/fields.hpp"
#include "levyreg/path_sampler.hpp"

namespace levyreg {

// x -> int_{base}^{x} dt / sigma(t) on `range`, with its numeric inverse.
class Diffeomorphism {
public:
  Diffeomorphism(DiffusionField sigma, double base_point, Interval range);

  double forward(double x) const;
  double forward_derivative(double x) const { return 1.0 / sigma_(x); }
  double inverse(double y) const;
  double base_point() const { return base_; }
  Interval range() const { return range_; }

private:
  DiffusionField sigma_;
  double base_;
  Interval range_;
  double image_lo_;
  double image_hi_;
};

// Throws AssumptionHViolation when sigma vanishes (or changes sign) on range.
Diffeomorphism unit_diffusion_transform(const DiffusionField& sigma, double base_point, Interval range);

// y -> (a / sigma)(f^{-1}(y)), derivative by the chain rule.
ScalarField reduced_drift(const ScalarField& a, const DiffusionField& sigma, const Diffeomorphism& diffeo);

// Terminal value phi(x0, Z_horizon + k horizon) of the equation with a = k sigma.
double proportional_solution(const DiffusionField& sigma, double k, double x0, const LevyPath& path);

// psi(x, t): the u with phi(x, u) = t.
double phi_inverse_psi(const DiffusionField& sigma, double x, double t);

// Doss-Sussman drift a(phi(x, y)) / (d phi / dx)(x, y).
double doss_sussman_drift(const ScalarField& a, const DiffusionField& sigma, double x, double y);

// Solves Y' = doss_sussman_drift(Y, Z_s) by RK4 on the path grid and returns
// phi(Y_horizon, Z_horizon).
double doss_sussman_solve(const ScalarField& a, const DiffusionField& sigma, const LevyPath& path, double x0,
                          double step);

}  // namespace levyreg
