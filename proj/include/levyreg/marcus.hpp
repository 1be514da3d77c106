#pragma once

#include "levyreg/fields.hpp"
#include "levyreg/path_sampler.hpp"
#include "levyreg/trajectory.hpp"

#include <ostream>
#include <stdexcept>
#include <vector>

namespace levyreg {

class FlowDivergence : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

struct JumpRecord {
  double time;
  double pre_state;
  double jump_size;
  double post_state;
};

struct MarcusTrajectory : Trajectory {
  double terminal = 0.0;
  std::vector<JumpRecord> jump_log;
};

constexpr double kDefaultJumpTol = 1e-10;

// Time-u flow of sigma started at y: d phi/ds = sigma(phi) u on [0, 1].
// RK4 with max(8, ceil(|u|/0.05)) substeps, doubled until two successive
// refinements agree within tol.
double jump_flow_phi(const DiffusionField& sigma, double y, double u, double tol = kDefaultJumpTol);

struct FlowWithSensitivity {
  double value;         // phi(y, u)
  double log_slope;     // int_0^u sigma'(phi(y, v)) dv, so d phi / d y = exp(log_slope)
};

// Fixed-substep RK4 on (phi, log_slope) jointly.
FlowWithSensitivity jump_flow_with_sensitivity(const DiffusionField& sigma, double y, double u);

// Continuous part dX = a(X) dt + sigma(X) o dZ^c between jumps (RK4 without a
// Brownian skeleton, Stratonovich-Heun against it); X_t = phi(X_{t-}, dZ_t) at jumps.
MarcusTrajectory marcus_solve(const ScalarField& a, const DiffusionField& sigma, const LevyPath& path,
                              double x0, double step, double jump_tol = kDefaultJumpTol);

// rho(y, z) = phi(y, z) - y - sigma(y) z
double marcus_remainder_rho(const DiffusionField& sigma, double y, double z);

// max |rho(y, z)| / z^2 over a ny x nz grid on [y_lo, y_hi] x [-z_max, z_max] (z != 0).
double fit_remainder_constant(const DiffusionField& sigma, Interval y_range, double z_max, int ny, int nz);

// sup over the grid of |f(X_t) - f(x0) - int_0^t f'(X_s) a(X_s) ds - k Z_t|.
// Requires f' sigma == k within 1e-8 on a probe grid over the visited range.
double chain_rule_residual(const ScalarField& f, const ScalarField& a, const DiffusionField& sigma,
                           const MarcusTrajectory& traj, double k, const LevyPath& path);

// time,pre,size,post
void write_jump_log_csv(const MarcusTrajectory& traj, std::ostream& os);

}  // namespace levyreg
