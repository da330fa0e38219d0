#include "gtest_precision.hpp"
#include "param_sets.hpp"

#include <charexp/asymptotics.hpp>
#include <charexp/coeffs.hpp>

using namespace charexp;

namespace {

LateTermModel flat_model(Kappa kappa, const char* s0) {
  LateTermModel m;
  m.kappa = kappa;
  m.s0 = parse_real(s0);
  m.t10 = 0;
  m.t20 = 0;
  m.tau_self = Real("1.5");
  m.tau_other = Real("1.5");
  m.sigma = {Complex(1), Complex(0), Complex(0)};
  return m;
}

Real gamma(const Real& x) {
  const SignedLog g = log_gamma(x);
  return g.sign * exp(g.log_abs);
}

}  // namespace

TEST(Late, ExponentialsTrivialWithoutLowerTerms) {
  const auto model = flat_model(Kappa::minus, "0.8");
  for (int n : {1, 5, 60}) {
    for (const auto& e : ex_terms(model, n)) EXPECT_LT(abs(e - Complex(1)), Real(1e-70));
  }
}

TEST(Late, SingleMultiplierPrediction) {
  const auto model = flat_model(Kappa::plus, "0.5");
  for (int n : {1, 2, 3, 10, 31}) {
    const Complex p = late_coeff_prediction(model, n);
    const Real expected = -gamma(Real(n) / 3) / (3 * pi());
    EXPECT_LT(abs(p - Complex(expected)), Real(1e-60) * abs(expected)) << n;
  }
}

TEST(Late, PhasePatternModThree) {
  auto model = flat_model(Kappa::plus, "0.5");
  model.sigma = {Complex(Real("0.4")), Complex(Real("0.3")), Complex(Real("-0.2"))};
  const Complex e2 = pow(eta(), 2), e4 = pow(eta(), 4);
  for (int n = 3; n <= 5; ++n) {
    const Complex bracket = late_coeff_prediction(model, n) * Real(-3) * pi() / Complex(gamma(Real(n) / 3));
    Complex expected;
    switch (n % 3) {
      case 0: expected = model.sigma[0] + model.sigma[1] + model.sigma[2]; break;
      case 1: expected = model.sigma[0] + e2 * model.sigma[1] + e4 * model.sigma[2]; break;
      default: expected = model.sigma[0] + e4 * model.sigma[1] + e2 * model.sigma[2]; break;
    }
    EXPECT_LT(abs(bracket - expected), Real(1e-60)) << n;
  }
}

TEST(Late, NegativeSignPower) {
  const Complex z = signed_power(Real(2), Kappa::minus, Real(1));
  EXPECT_LT(abs(z - Complex(Real("-0.25"))), Real(1e-70));
  EXPECT_LT(abs(signed_power(Real(2), Kappa::plus, Real(2)) - Complex(Real("0.0625"))), Real(1e-70));
}

TEST(Late, CombinationIdentity) {
  const auto p = charexp::testing::box_sets(71, 1).front();
  const Frame f = derive_frame(p, choose_lambda(p));
  const StokesSet none = stokes_from_sums(f, {Real(1), Real(0), Real(0)}, {Real(1), Real(0), Real(0)});
  const auto model = late_term_model(f, Kappa::minus, none);
  const auto ex = ex_terms(model, 40);
  const auto l = l_terms(model, 40);
  EXPECT_LT(abs(l[0] + l[1] + l[2] - ex[0]), Real(1e-65) * abs(ex[0]));
}

TEST(Late, TrendOfExactSeriesIsZero) {
  const auto model = flat_model(Kappa::plus, "0.5");
  std::vector<Real> a(40);
  for (int n = 1; n < 40; ++n) a[static_cast<std::size_t>(n)] = late_coeff_prediction(model, n).real();
  const auto trend = late_ratio_trend(model, a, 10, 30, 4);
  EXPECT_LT(trend.final_deviation, Real(1e-60));
  EXPECT_EQ(trend.n.front(), 10);
  EXPECT_EQ(trend.n.back(), 30);
  EXPECT_THROW(late_ratio_trend(model, a, 2, 30, 4), Error);
}

TEST(Late, RejectsIndexZero) { EXPECT_THROW(late_coeff_prediction(flat_model(Kappa::plus, "1"), 0), Error); }
