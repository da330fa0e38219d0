#include "gtest_precision.hpp"
#include "param_sets.hpp"

#include <charexp/monodromy.hpp>

#include <complex>
#include <random>

using namespace charexp;
using charexp::testing::params_from;
using cd = std::complex<double>;

namespace {

struct HandSigma {
  cd p[3], m[3];  // sigma_n(+1), sigma_n(-1)
};

StokesSet to_stokes(const HandSigma& h) {
  StokesSet s;
  for (std::size_t n = 0; n < 3; ++n) {
    s.sigma[0][n] = Complex(Real(h.p[n].real()), Real(h.p[n].imag()));
    s.sigma[1][n] = Complex(Real(h.m[n].real()), Real(h.m[n].imag()));
  }
  return s;
}

cd to_cd(const Complex& z) { return {static_cast<double>(z.real()), static_cast<double>(z.imag())}; }

// Written out term by term from the circuit relations, independently of the
// table encoding.
struct Hand {
  double tp, tm;
  const HandSigma& s;
  cd E(double thirds, double tau) const { return std::exp(cd(0, thirds / 3 * M_PI * tau)); }

  cd t12() const {
    const cd I(0, 1);
    auto& P = s.p;
    auto& N = s.m;
    return 2. * I * E(2, tm) * P[2] + 2. * I * E(2, tp) * P[1] + 2. * I * E(6, tm) * P[0] +
           8. * I * E(4, tm) * N[2] * P[2] * P[0] + 8. * I * N[2] * P[1] * P[0] +
           8. * I * E(4, tm) * N[1] * P[1] * P[0] + 8. * I * P[2] * N[1] * P[1] +
           32. * I * E(2, tm) * N[2] * P[2] * N[1] * P[1] * P[0];
  }
  cd t21() const {
    const cd I(0, 1);
    auto& P = s.p;
    auto& N = s.m;
    return -2. * I * E(4, tm) * N[0] - 2. * I * E(4, tp) * N[2] - 2. * I * N[1] -
           8. * I * E(2, tp) * N[2] * P[2] * N[1] - 8. * I * E(2, tm) * N[2] * P[2] * N[0] -
           8. * I * E(2, tm) * N[1] * P[1] * N[0] - 8. * I * E(2, tp) * N[2] * P[1] * N[0] -
           32. * I * N[2] * P[2] * N[1] * P[1] * N[0];
  }
  cd t22() const {
    auto& P = s.p;
    auto& N = s.m;
    return E(6, tm) + 4. * E(4, tm) * N[2] * P[2] + 4. * E(4, tm) * N[1] * P[1] + 4. * N[2] * P[1] +
           16. * E(2, tm) * N[2] * P[2] * N[1] * P[1];
  }
  cd x() const {
    auto& P = s.p;
    auto& N = s.m;
    return 2. * E(4, tm) * N[0] * P[0] + 2. * E(4, tp) * P[1] * N[0] + 2. * P[2] * N[0] +
           2. * E(4, tp) * P[2] * N[1] + 2. * E(4, tp) * N[2] * P[0] + 2. * N[1] * P[0] +
           2. * E(4, tm) * N[2] * P[2] + 2. * E(4, tm) * N[1] * P[1] + 2. * N[2] * P[1] +
           8. * E(2, tm) * N[2] * P[2] * N[1] * P[1] + 8. * E(2, tp) * N[2] * P[2] * N[1] * P[0] +
           8. * E(2, tp) * N[2] * P[1] * N[0] * P[0] + 8. * E(2, tp) * P[2] * N[1] * P[1] * N[0] +
           8. * E(2, tm) * N[2] * P[2] * N[0] * P[0] + 8. * E(2, tm) * N[1] * P[1] * N[0] * P[0] +
           32. * N[2] * P[2] * N[1] * P[1] * N[0] * P[0];
  }
};

HandSigma random_sigma(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(-1, 1);
  HandSigma h;
  for (int n = 0; n < 3; ++n) {
    h.p[n] = {u(rng), u(rng)};
    h.m[n] = {u(rng), u(rng)};
  }
  return h;
}

}  // namespace

TEST(TermTables, Sizes) {
  EXPECT_EQ(t11_terms().size(), 13u);
  EXPECT_EQ(t12_terms().size(), 8u);
  EXPECT_EQ(t21_terms().size(), 8u);
  EXPECT_EQ(t22_terms().size(), 5u);
  EXPECT_EQ(x_terms().size(), 16u);
}

TEST(TermTables, MatchHandExpansion) {
  std::mt19937_64 rng(4);
  for (const auto& p : charexp::testing::box_sets(43, 4)) {
    const Frame f = derive_frame(p, choose_lambda(p));
    const HandSigma h = random_sigma(rng);
    const StokesSet s = to_stokes(h);
    const Hand hand{static_cast<double>(f.tau_plus), static_cast<double>(f.tau_minus), h};
    EXPECT_LT(std::abs(to_cd(evaluate_terms(t12_terms(), f, s)) - hand.t12()), 1e-12);
    EXPECT_LT(std::abs(to_cd(evaluate_terms(t21_terms(), f, s)) - hand.t21()), 1e-12);
    EXPECT_LT(std::abs(to_cd(evaluate_terms(t22_terms(), f, s)) - hand.t22()), 1e-12);
    EXPECT_LT(std::abs(to_cd(evaluate_terms(x_terms(), f, s)) - hand.x()), 1e-12);
  }
}

TEST(TermTables, XIsHalfTraceMinusLeadingCosine) {
  std::mt19937_64 rng(8);
  for (const auto& p : charexp::testing::box_sets(47, 4)) {
    const Frame f = derive_frame(p, choose_lambda(p));
    const StokesSet s = to_stokes(random_sigma(rng));
    const Complex X = evaluate_terms(x_terms(), f, s);
    const Complex half =
        (evaluate_terms(t11_terms(), f, s) + evaluate_terms(t22_terms(), f, s)) * Real("0.5");
    EXPECT_LT(abs(half - Complex(cos(2 * pi() * f.tau_plus)) - X), Real(1e-60));
  }
}

TEST(Circuit, VanishingMultipliers) {
  const auto p = charexp::testing::box_sets(53, 1).front();
  const Frame f = derive_frame(p, choose_lambda(p));
  const StokesSet zero = to_stokes(HandSigma{});
  const CircuitMatrix T = circuit_matrix(f, zero);
  EXPECT_LT(abs(T.t11 - exp_i_pi(2 * f.tau_plus)), Real(1e-70));
  EXPECT_LT(abs(T.t22 - exp_i_pi(2 * f.tau_minus)), Real(1e-70));
  EXPECT_EQ(abs(T.t12), 0);
  EXPECT_EQ(abs(T.t21), 0);
  EXPECT_LT(abs(T.det() - Complex(1)), Real(1e-70));

  const FloquetResult r = characteristic_exponent(f, zero);
  EXPECT_LT(abs(r.cos_two_pi_omega - Complex(cos(2 * pi() * f.tau_plus))), Real(1e-70));
  // Lower-row pairs reduce to (exp(2 pi i tau(-1)) - p, 0).
  EXPECT_LT(abs(r.solutions.first.alpha - (exp_i_pi(2 * f.tau_minus) - r.p1)), Real(1e-70));
  EXPECT_EQ(abs(r.solutions.first.beta), 0);
}

TEST(Circuit, ComplexCosineRejected) {
  const auto p = charexp::testing::box_sets(53, 1).front();
  const Frame f = derive_frame(p, choose_lambda(p));
  HandSigma h{};
  h.p[0] = {0, 0.3};
  h.m[0] = {0.2, 0};
  try {
    characteristic_exponent(f, to_stokes(h));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::inconsistency);
  }
}

TEST(Solutions, SatisfyLowerRow) {
  std::mt19937_64 rng(12);
  const auto p = charexp::testing::box_sets(61, 1).front();
  const Frame f = derive_frame(p, choose_lambda(p));
  const CircuitMatrix T = circuit_matrix(f, to_stokes(random_sigma(rng)));
  const Complex p1(Real("0.3"), Real("0.1")), p2(Real("-1.2"), Real("0.4"));
  const auto sol = multiplicative_solutions(T, p1, p2);
  EXPECT_FALSE(sol.degenerate);
  for (const auto& [pair, root] : {std::pair{sol.first, p1}, std::pair{sol.second, p2}}) {
    EXPECT_LT(abs(T.t12 * pair.alpha + (T.t22 - root) * pair.beta), Real(1e-60));
  }
  const auto swapped = multiplicative_solutions(T, p2, p1);
  EXPECT_EQ(abs(swapped.first.alpha - sol.second.alpha), 0);
  EXPECT_EQ(abs(swapped.second.beta - sol.first.beta), 0);
}

TEST(Solutions, DegenerateFlag) {
  CircuitMatrix T;
  T.t11 = Complex(Real(2));
  T.t22 = Complex(Real("0.5"));
  const auto sol = multiplicative_solutions(T, Complex(Real("0.5")), Complex(Real(2)));
  EXPECT_TRUE(sol.degenerate);
  const auto same = multiplicative_solutions(T, Complex(Real(1)), Complex(Real(1)));
  EXPECT_TRUE(same.degenerate);
}

TEST(Omega, Branches) {
  EXPECT_LT(abs(omega_from_cos(Real(1))), Real(1e-70));
  EXPECT_LT(abs(omega_from_cos(Real(-1)) - Complex(Real("0.5"))), Real(1e-70));
  for (const char* v : {"0.3", "-0.8", "4", "-2.5"}) {
    const Real c = parse_real(v);
    const Complex w = omega_from_cos(c);
    const Complex phase = Complex(Real(0), 2 * pi()) * w;
    const Complex back = (exp(phase) + exp(-phase)) * Real("0.5");
    EXPECT_LT(abs(back - Complex(c)), Real(1e-65)) << v;
    EXPECT_GE(w.imag(), 0);
    EXPECT_GE(w.real(), 0);
    EXPECT_LE(w.real(), Real("0.5"));
  }
}

TEST(Pipeline, PureSexticGivesXTwo) {
  const Frame f = derive_frame(params_from({}, 0, {0, 0, 0, 0, 0, 9}), Real(0));
  StokesOptions opt;
  opt.lmax = 24;
  const auto analysis = analyse(f, compute_stokes(f, opt));
  EXPECT_LT(abs(analysis.result.X - Complex(2)), Real(1e-8));
  EXPECT_LT(abs(analysis.result.cos_two_pi_omega - Complex(1)), Real(1e-8));
}

TEST(Pipeline, RegularOriginReduction) {
  auto p = params_from({}, 0, {1.5, -2, 0.5, 3, -1, 9});
  p.L = Real("0.3");
  const Frame f = derive_frame(p, choose_lambda(p));
  const auto analysis = analyse(f, compute_stokes(f, {}));
  EXPECT_LT(abs(analysis.result.cos_two_pi_omega - Complex(cos(Real("0.6") * pi()))), Real(1e-8));
  EXPECT_LT(analysis.result.det_error, Real(1e-8));
  EXPECT_TRUE(analysis.converged);
}
