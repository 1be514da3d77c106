#include "levyreg/numerics.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

using namespace levyreg::numerics;

TEST(Integrate, ClosedForms) {
  EXPECT_NEAR(integrate([](double x) { return std::sin(x); }, 0.0, std::numbers::pi), 2.0, 1e-12);
  EXPECT_NEAR(integrate([](double x) { return 1.0 / (1.0 + x * x); }, 0.0, 1.0), std::numbers::pi / 4, 1e-13);
  EXPECT_EQ(integrate([](double) { return 1.0; }, 0.3, 0.3), 0.0);
  // Reversed limits flip the sign.
  EXPECT_NEAR(integrate([](double x) { return x; }, 1.0, 0.0), -0.5, 1e-14);
}

TEST(Integrate, ShortIntervalsTerminate) {
  // Regression: tiny intervals at tight tolerance used to recurse to full depth.
  for (double width : {1e-6, 1e-9, 1e-12}) {
    const double hi = -0.1 + width;
    const double v = integrate([](double t) { return 2.0 / (1.0 + t * t); }, -0.1, hi, 1e-10);
    EXPECT_NEAR(v / (hi + 0.1), 2.0 / 1.01, 1e-6);
  }
}

TEST(Integrate, NonFiniteBoundsGiveNaN) {
  EXPECT_TRUE(std::isnan(integrate([](double) { return 1.0; }, 0.0, NAN)));
}

TEST(SolveMonotone, FindsRootFromFarGuess) {
  auto f = [](double x) { return x * x * x; };
  auto df = [](double x) { return 3.0 * x * x; };
  EXPECT_NEAR(solve_monotone(f, df, 8.0, 0.0), 2.0, 1e-12);
  EXPECT_NEAR(solve_monotone(f, df, -1000.0, 3.0), -10.0, 1e-11);
}

TEST(SolveMonotone, DecreasingFunction) {
  auto f = [](double x) { return std::exp(-x); };
  auto df = [](double x) { return -std::exp(-x); };
  EXPECT_NEAR(solve_monotone(f, df, 0.25, 0.0), std::log(4.0), 1e-12);
}

TEST(SolveMonotone, ThrowsWithoutSignChange) {
  auto f = [](double x) { return std::atan(x); };
  auto df = [](double x) { return 1.0 / (1.0 + x * x); };
  EXPECT_THROW(solve_monotone(f, df, 5.0, 0.0), std::runtime_error);
}
