#pragma once

#include "levyreg/fields.hpp"
#include "levyreg/path_sampler.hpp"
#include "levyreg/trajectory.hpp"

#include <optional>
#include <ostream>
#include <stdexcept>

namespace levyreg {

// Solution of Y_t = x0 + int_0^t a(Y_s + Z_s) ds together with X = Y + Z.
struct FlowSolution : Trajectory {
  std::vector<double> y;
  double terminal = 0.0;         // Y at the horizon
  double flow_derivative = 1.0;  // d X_horizon / d x0
};

class NonDifferentiablePoint : public std::domain_error {
public:
  using std::domain_error::domain_error;
};

// Default solver step: horizon / 2^12.
double default_step(double horizon);

// Classical RK4 between consecutive breakpoints with substeps <= step.
FlowSolution solve_random_ode(const ScalarField& a, const LevyPath& path, double x0, double step);

// exp(int_0^horizon a'(X_s) ds) along the stored grid.
double flow_derivative_exponential(const ScalarField& a, const Trajectory& solution);

// Same quantity through the variational equation u' = a'(X) u, u_0 = 1,
// integrated jointly with Y by RK4 on the solver grid.
double flow_derivative_variational(const ScalarField& a, const LevyPath& path, double x0, double step);

// d Y_horizon / dT for the marked jump of `decomp`, read off `solution`
// (solved on the path carrying the marked jump at decomp.T):
// (a(X_{T-}) - a(X_T)) exp(int_T^horizon a'(X_s) ds), or 0 when T > eval_time.
double jump_time_derivative(const ScalarField& a, const FlowSolution& solution,
                            const PathDecomposition& decomp, double eval_time);

// First time X enters {x : |a'(x)| >= c}.
std::optional<double> hitting_time_of_slope(const ScalarField& a, const Trajectory& solution, double c);

// time,Y,X,X_left
void write_flow_csv(const FlowSolution& solution, std::ostream& os);

}  // namespace levyreg
