#include "levyreg/flow_engine.hpp"
#include "levyreg/marcus.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <sstream>

using namespace levyreg;

namespace {

LevyPath make_path(std::vector<Jump> jumps, double drift = 0.0) {
  LevyPath p;
  p.drift_rate = drift;
  p.jumps = std::move(jumps);
  p.validate();
  return p;
}

DiffusionField identity_sigma() { return make_catalogue_diffusion("linear", {{"slope", 1.0}}); }
DiffusionField constant_sigma(double c) { return make_catalogue_diffusion("constant", {{"c", c}}, std::abs(c)); }
DiffusionField arctan_sigma(double s) { return make_catalogue_diffusion("arctan-diffusion", {{"scale", s}}, s); }

ScalarField log_field() {
  return {[](double x) { return std::log(x); }, [](double x) { return 1.0 / x; }, std::nullopt, std::nullopt};
}

}  // namespace

TEST(JumpFlowPhi, ClosedForms) {
  EXPECT_NEAR(jump_flow_phi(constant_sigma(0.7), 0.2, -1.5), 0.2 - 1.05, 1e-14);
  EXPECT_NEAR(jump_flow_phi(identity_sigma(), 2.0, 0.5), 2.0 * std::exp(0.5), 1e-10);
  EXPECT_NEAR(jump_flow_phi(arctan_sigma(1.0), 0.0, 0.3), std::tan(0.3), 1e-10);
  EXPECT_EQ(jump_flow_phi(identity_sigma(), 3.0, 0.0), 3.0);
  EXPECT_THROW(jump_flow_phi(identity_sigma(), 1.0, 0.1, 0.0), std::domain_error);
}

TEST(JumpFlowPhi, GroupProperty) {
  const auto sigma = make_catalogue_diffusion("sine", {{"offset", 1.0}, {"amplitude", 0.5}}, 0.5);
  for (double y : {-1.0, 0.3, 2.0}) {
    for (double u : {-0.7, 0.2, 1.1}) {
      const double v = 0.45;
      EXPECT_NEAR(jump_flow_phi(sigma, jump_flow_phi(sigma, y, u), v), jump_flow_phi(sigma, y, u + v), 1e-9);
      EXPECT_NEAR(jump_flow_phi(sigma, jump_flow_phi(sigma, y, u), -u), y, 1e-9);
    }
  }
}

TEST(JumpFlowPhi, DivergenceIsReported) {
  // y' = y^2 u from 1 explodes at u = 1.
  DiffusionField square{[](double x) { return x * x; }, [](double x) { return 2.0 * x; }, std::nullopt};
  EXPECT_THROW(jump_flow_phi(square, 1.0, 2.0), FlowDivergence);
  const auto path = make_path({{0.5, 2.0}});
  try {
    marcus_solve(make_catalogue_field("constant", {{"c", 0.0}}), square, path, 1.0, 0.01);
    FAIL();
  } catch (const FlowDivergence& e) {
    EXPECT_NE(std::string(e.what()).find("0.5"), std::string::npos);
  }
}

TEST(JumpFlowSensitivity, LinearSigma) {
  const auto r = jump_flow_with_sensitivity(identity_sigma(), 1.5, 0.8);
  // fixed 16 RK4 substeps: relative error of order (0.05)^4 / 120 per unit
  EXPECT_NEAR(r.value / (1.5 * std::exp(0.8)), 1.0, 1e-7);
  EXPECT_NEAR(r.log_slope, 0.8, 1e-14);
}

TEST(Remainder, Examples) {
  EXPECT_NEAR(marcus_remainder_rho(constant_sigma(2.0), 0.4, 0.3), 0.0, 1e-15);
  EXPECT_NEAR(marcus_remainder_rho(identity_sigma(), 1.0, 0.1), std::exp(0.1) - 1.1, 1e-10);
  EXPECT_NEAR(marcus_remainder_rho(identity_sigma(), 1.0, 0.1), 0.0051709, 1e-7);
}

TEST(Remainder, FittedConstant) {
  // sigma(x) = x: rho / z^2 = y (e^z - 1 - z) / z^2, largest at y = 1, z = 1/2.
  const double k = fit_remainder_constant(identity_sigma(), {0.0, 1.0}, 0.5, 11, 21);
  EXPECT_NEAR(k, (std::exp(0.5) - 1.5) / 0.25, 1e-8);
  EXPECT_NEAR(fit_remainder_constant(constant_sigma(1.0), {-1.0, 1.0}, 1.0, 5, 5), 0.0, 1e-13);
}

TEST(MarcusSolve, GeometricDriver) {
  // a = 0, sigma(x) = x: X_t = x0 exp(Z_t).
  const auto path = make_path({{0.2, 0.4}, {0.6, -0.7}, {0.9, 0.25}}, 0.3);
  const auto zero = make_catalogue_field("constant", {{"c", 0.0}});
  const auto tr = marcus_solve(zero, identity_sigma(), path, 1.2, 1.0 / 256);
  EXPECT_NEAR(tr.terminal, 1.2 * std::exp(path.terminal()), 1e-10);
  for (std::size_t k = 0; k < tr.size(); ++k) {
    ASSERT_NEAR(tr.x[k], 1.2 * std::exp(tr.z[k]), 1e-10);
  }
}

TEST(MarcusSolve, JumpRuleIsApplied) {
  const auto sigma = arctan_sigma(0.5);
  const auto a = make_catalogue_field("sine", {{"amplitude", 0.3}});
  const auto path = make_path({{0.25, 0.3}, {0.5, -0.6}, {0.75, 0.1}}, 0.1);
  const auto tr = marcus_solve(a, sigma, path, 0.2, 1.0 / 512);
  ASSERT_EQ(tr.jump_log.size(), 3u);
  for (const auto& r : tr.jump_log) {
    EXPECT_EQ(r.post_state, jump_flow_phi(sigma, r.pre_state, r.jump_size));
    const auto k = tr.node_at(r.time);
    EXPECT_EQ(tr.x_left[k], r.pre_state);
    EXPECT_EQ(tr.x[k], r.post_state);
  }
  std::ostringstream os;
  write_jump_log_csv(tr, os);
  EXPECT_EQ(os.str().rfind("time,pre,size,post\n0.25,", 0), 0u);
}

TEST(MarcusSolve, UnitDiffusionReducesToRandomOde) {
  const auto a = make_catalogue_field("logistic", {{"slope", 2.0}});
  const auto path = make_path({{0.1, 0.5}, {0.4, -0.3}, {0.77, 0.9}}, -0.2);
  const double step = default_step(1.0);
  for (double x0 : {-1.0, 0.5}) {
    EXPECT_NEAR(marcus_solve(a, constant_sigma(1.0), path, x0, step).terminal,
                solve_random_ode(a, path, x0, step).terminal_x(), 1e-10);
  }
}

TEST(ChainRule, ArctanCase) {
  // sigma = 0.5 (1 + x^2), f = 2 arctan: f' sigma = 1.
  const auto sigma = arctan_sigma(0.5);
  ScalarField f{[](double x) { return 2.0 * std::atan(x); }, [](double x) { return 2.0 / (1.0 + x * x); },
                std::nullopt, std::nullopt};
  ScalarField a{[](double x) { return 0.2 * (1 + x * x) * std::sin(x); },
                [](double x) { return 0.2 * (2 * x * std::sin(x) + (1 + x * x) * std::cos(x)); }, std::nullopt,
                std::nullopt};
  const auto path = make_path({{0.2, 0.3}, {0.45, -0.5}, {0.8, 0.2}}, 0.1);
  const auto tr = marcus_solve(a, sigma, path, 0.1, 1.0 / 1024);
  EXPECT_LT(chain_rule_residual(f, a, sigma, tr, 1.0, path), 1e-8);
}

TEST(ChainRule, LogCase) {
  // sigma = x, f = log: f' sigma = 1; a = 0.2 x sin x keeps X positive.
  const auto sigma = identity_sigma();
  ScalarField a{[](double x) { return 0.2 * x * std::sin(x); },
                [](double x) { return 0.2 * (std::sin(x) + x * std::cos(x)); }, std::nullopt, std::nullopt};
  const auto path = make_path({{0.3, 0.6}, {0.6, -0.4}}, 0.2);
  const auto tr = marcus_solve(a, sigma, path, 1.5, 1.0 / 1024);
  EXPECT_LT(chain_rule_residual(log_field(), a, sigma, tr, 1.0, path), 1e-8);
}

TEST(ChainRule, PreconditionChecked) {
  const auto path = make_path({{0.5, 0.2}});
  const auto a = make_catalogue_field("constant", {{"c", 0.1}});
  const auto tr = marcus_solve(a, identity_sigma(), path, 1.0, 0.01);
  EXPECT_THROW(chain_rule_residual(log_field(), a, identity_sigma(), tr, 2.0, path), std::invalid_argument);
  LevyPath other = path;
  other.horizon = 2.0;
  EXPECT_THROW(chain_rule_residual(log_field(), a, identity_sigma(), tr, 1.0, other), std::invalid_argument);
}
