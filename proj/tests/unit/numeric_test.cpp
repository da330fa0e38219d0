#include "gtest_precision.hpp"
#include "param_sets.hpp"

#include <charexp/numeric.hpp>
#include <charexp/stokes.hpp>

using namespace charexp;

TEST(Numeric, PrecisionGuardRestores) {
  const unsigned before = WorkingPrecision::bits();
  {
    WorkingPrecision p(512);
    EXPECT_GE(WorkingPrecision::bits(), 512u);
  }
  EXPECT_EQ(WorkingPrecision::bits(), before);
  EXPECT_GE(before, 256u);
}

TEST(Numeric, DecimalRoundTrip) {
  const Real x = parse_real("0.1");
  EXPECT_EQ(parse_real(to_decimal(x)), x);
  EXPECT_THROW(parse_real("1.5x"), Error);
  EXPECT_THROW(parse_real(""), Error);
}

TEST(Numeric, PochhammerAndFactorial) {
  EXPECT_EQ(pochhammer(Real(3), 0), 1);
  EXPECT_EQ(pochhammer(Real(3), 4), 3 * 4 * 5 * 6);
  EXPECT_EQ(pochhammer(Real(-2), 3), 0);
  EXPECT_EQ(factorial(10), 3628800);
}

TEST(Numeric, LogGammaTracksSign) {
  const SignedLog half = log_gamma(Real("0.5"));
  EXPECT_EQ(half.sign, 1);
  EXPECT_LT(abs(exp(2 * half.log_abs) - pi()), Real(1e-70));
  const SignedLog neg = log_gamma(Real("-0.5"));
  EXPECT_EQ(neg.sign, -1);
  EXPECT_LT(abs(exp(neg.log_abs) - 2 * sqrt(pi())), Real(1e-70));
  EXPECT_THROW(log_gamma(Real(-2)), Error);
}

TEST(Numeric, ComplexArithmetic) {
  const Complex a(Real(1), Real(2)), b(Real(-3), Real("0.5"));
  const Complex q = a / b;
  EXPECT_LT(abs(q * b - a), Real(1e-70));
  EXPECT_LT(abs(exp(log(a)) - a), Real(1e-70));
  EXPECT_LT(abs(sqrt(b) * sqrt(b) - b), Real(1e-70));
  EXPECT_LT(abs(pow(a, -3) * pow(a, 3) - Complex(1)), Real(1e-70));
  EXPECT_EQ(conj(a).imag(), -2);
}

TEST(Numeric, ArccosineBranches) {
  EXPECT_LT(abs(acos(Complex(Real(0))).real() - pi() / 2), Real(1e-70));
  for (const char* v : {"3", "-3", "1.0000001"}) {
    const Complex z(parse_real(v));
    const Complex w = acos(z);
    const Complex back = (exp(imag_unit() * w) + exp(-(imag_unit() * w))) * Real("0.5");
    EXPECT_LT(abs(back - z), Real(1e-65)) << v;
  }
}

TEST(Numeric, PhaseIdentities) {
  const Complex e = eta();
  EXPECT_LT(abs(pow(e, 6) - Complex(1)), Real(1e-70));
  EXPECT_LT(abs(Complex(1) + pow(e, 2) + pow(e, 4)), Real(1e-70));
  EXPECT_LT(abs(exp_i_pi(Real(1) / 3) - e), Real(1e-70));
}

TEST(Numeric, DistanceToInteger) {
  EXPECT_EQ(distance_to_integer(Real(3)), 0);
  EXPECT_LT(abs(distance_to_integer(Real("2.75")) - Real("0.25")), Real(1e-70));
  EXPECT_LT(abs(distance_to_integer(Real("-0.1")) - Real("0.1")), Real(1e-70));
}
