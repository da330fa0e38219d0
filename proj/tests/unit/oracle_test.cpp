#include "gtest_precision.hpp"
#include "param_sets.hpp"

#include <charexp/oracle.hpp>

#include <cmath>

using namespace charexp;
using charexp::testing::params_from;

namespace {

EquationParams regular_params() {
  EquationParams p = params_from({}, 0, {1, -0.5, 2, 0, 0.7, 9});
  p.L = Real("0.3");
  return p;
}

const EquationParams kRegular = regular_params();

}  // namespace

TEST(OdeOracle, RegularOriginTrace) {
  const auto s = monodromy_trace_ode(kRegular, Real(1), Real(1e-20));
  EXPECT_LT(abs(s.trace * Real("0.5") - Complex(cos(Real("0.6") * pi()))), Real(1e-18));
  EXPECT_LT(s.det_error, Real(1e-18));
  EXPECT_LE(s.error_estimate, Real(1e-20));
}

TEST(OdeOracle, RadiusInvariance) {
  const auto p = charexp::testing::box_sets(83, 1).front();
  const auto a = monodromy_trace_ode(p, Real("0.5"), Real(1e-20));
  const auto b = monodromy_trace_ode(p, Real(1), Real(1e-20));
  const auto c = monodromy_trace_ode(p, Real(2), Real(1e-20));
  EXPECT_LE(abs(a.trace - b.trace), a.error_estimate + b.error_estimate + Real(1e-30));
  EXPECT_LE(abs(c.trace - b.trace), c.error_estimate + b.error_estimate + Real(1e-30));
}

TEST(OdeOracle, DirectionReversal) {
  const auto p = charexp::testing::box_sets(89, 1).front();
  OdeOptions forward, backward;
  backward.direction = Direction::positive;
  const auto a = monodromy_trace_ode(p, Real(1), Real(1e-20), forward);
  const auto b = monodromy_trace_ode(p, Real(1), Real(1e-20), backward);
  EXPECT_LE(abs(a.trace - b.trace), a.error_estimate + b.error_estimate + Real(1e-30));
}

TEST(OdeOracle, ConvergenceOrder) {
  // The error of an order-p Taylor step falls by about 2^p when the step halves.
  const int order = 8;
  const Complex exact(2 * cos(Real("0.6") * pi()));
  const auto err = [&](int steps) {
    const Matrix2 Y = monodromy_matrix(kRegular, Real(1), steps, order);
    return static_cast<double>(abs(Y[0][0] + Y[1][1] - exact));
  };
  const double rate = std::log2(err(128) / err(256));
  EXPECT_GT(rate, order - 1.0);
  EXPECT_LT(rate, order + 2.0);
}

TEST(OdeOracle, StepCapReported) {
  const auto p = charexp::testing::box_sets(89, 1).front();
  OdeOptions tight;
  tight.initial_steps = 4;
  tight.max_steps = 8;
  try {
    monodromy_trace_ode(p, Real(1), Real(1e-40), tight);
    FAIL();
  } catch (const OracleAccuracyError& e) {
    EXPECT_EQ(e.kind(), ErrorKind::accuracy_not_reached);
    EXPECT_EQ(e.best().steps, 8);
  }
}

TEST(HillOracle, RegularOriginExponent) {
  const auto r = hill_residual(kRegular, {0.3, 0.0}, 60);
  EXPECT_LT(r.value, 1e-10);
  EXPECT_GT(hill_residual(kRegular, {0.35, 0.0}, 60).value, 1e-4);
}

TEST(HillOracle, DipAtOdeExponent) {
  const auto p = charexp::testing::box_sets(97, 1).front();
  const auto s = monodromy_trace_ode(p, Real(1), Real(1e-20));
  const double c = static_cast<double>(s.trace.real()) / 2;
  std::complex<double> omega;
  if (c > 1) omega = {0, std::acosh(c) / (2 * M_PI)};
  else if (c < -1) omega = {0.5, std::acosh(-c) / (2 * M_PI)};
  else omega = std::acos(c) / (2 * M_PI);
  const auto at = hill_residual_checked(p, omega);
  const double off = std::min(hill_residual(p, omega + 0.05).value, hill_residual(p, omega - 0.05).value);
  EXPECT_GE(off, 1e3 * at.coarse.value);
  EXPECT_EQ(at.fine.N, 2 * kHillDefaultN);
}

TEST(HillOracle, GenericPointStaysAway) {
  const auto p = charexp::testing::box_sets(97, 1).front();
  const double r1 = hill_residual(p, {0.123, 0.0}, 40).value;
  const double r2 = hill_residual(p, {0.123, 0.0}, 80).value;
  EXPECT_GT(r2, 1e-6);
  EXPECT_NEAR(r1, r2, 0.5 * r1);
  EXPECT_THROW(hill_residual(p, {0.1, 0.0}, 10), Error);
}
