#include "charexp/monodromy.hpp"

#include <algorithm>
#include <string>

namespace charexp {

namespace {

constexpr const char* kModule = "monodromy";

constexpr Kappa P = Kappa::plus;
constexpr Kappa M = Kappa::minus;

// sigma_n(kappa) shorthands.
const std::pair<int, Kappa> s0p{0, P}, s1p{1, P}, s2p{2, P};
const std::pair<int, Kappa> s0m{0, M}, s1m{1, M}, s2m{2, M};

const std::vector<SigmaTerm> kT11 = {
    {1, 0, 6, P, {}},
    {4, 0, 4, M, {s0m, s0p}},
    {4, 0, 4, P, {s1p, s0m}},
    {4, 0, 0, P, {s2p, s0m}},
    {4, 0, 4, P, {s2p, s1m}},
    {4, 0, 4, P, {s2m, s0p}},
    {4, 0, 0, P, {s1m, s0p}},
    {16, 0, 2, P, {s2m, s2p, s1m, s0p}},
    {16, 0, 2, P, {s2m, s1p, s0m, s0p}},
    {16, 0, 2, P, {s2p, s1m, s1p, s0m}},
    {16, 0, 2, M, {s2m, s2p, s0m, s0p}},
    {16, 0, 2, M, {s1m, s1p, s0m, s0p}},
    {64, 0, 0, P, {s2m, s2p, s1m, s1p, s0m, s0p}},
};

const std::vector<SigmaTerm> kT12 = {
    {2, 1, 2, M, {s2p}},
    {2, 1, 2, P, {s1p}},
    {2, 1, 6, M, {s0p}},
    {8, 1, 4, M, {s2m, s2p, s0p}},
    {8, 1, 0, P, {s2m, s1p, s0p}},
    {8, 1, 4, M, {s1m, s1p, s0p}},
    {8, 1, 0, P, {s2p, s1m, s1p}},
    {32, 1, 2, M, {s2m, s2p, s1m, s1p, s0p}},
};

const std::vector<SigmaTerm> kT21 = {
    {-2, 1, 4, M, {s0m}},
    {-2, 1, 4, P, {s2m}},
    {-2, 1, 0, P, {s1m}},
    {-8, 1, 2, P, {s2m, s2p, s1m}},
    {-8, 1, 2, M, {s2m, s2p, s0m}},
    {-8, 1, 2, M, {s1m, s1p, s0m}},
    {-8, 1, 2, P, {s2m, s1p, s0m}},
    {-32, 1, 0, P, {s2m, s2p, s1m, s1p, s0m}},
};

const std::vector<SigmaTerm> kT22 = {
    {1, 0, 6, M, {}},
    {4, 0, 4, M, {s2m, s2p}},
    {4, 0, 4, M, {s1m, s1p}},
    {4, 0, 0, P, {s2m, s1p}},
    {16, 0, 2, M, {s2m, s2p, s1m, s1p}},
};

const std::vector<SigmaTerm> kX = {
    {2, 0, 4, M, {s0m, s0p}},
    {2, 0, 4, P, {s1p, s0m}},
    {2, 0, 0, P, {s2p, s0m}},
    {2, 0, 4, P, {s2p, s1m}},
    {2, 0, 4, P, {s2m, s0p}},
    {2, 0, 0, P, {s1m, s0p}},
    {2, 0, 4, M, {s2m, s2p}},
    {2, 0, 4, M, {s1m, s1p}},
    {2, 0, 0, P, {s2m, s1p}},
    {8, 0, 2, M, {s2m, s2p, s1m, s1p}},
    {8, 0, 2, P, {s2m, s2p, s1m, s0p}},
    {8, 0, 2, P, {s2m, s1p, s0m, s0p}},
    {8, 0, 2, P, {s2p, s1m, s1p, s0m}},
    {8, 0, 2, M, {s2m, s2p, s0m, s0p}},
    {8, 0, 2, M, {s1m, s1p, s0m, s0p}},
    {32, 0, 0, P, {s2m, s2p, s1m, s1p, s0m, s0p}},
};

Complex i_power(int k) {
  switch (((k % 4) + 4) % 4) {
    case 0: return Complex(1);
    case 1: return imag_unit();
    case 2: return Complex(-1);
    default: return -imag_unit();
  }
}

}  // namespace

std::span<const SigmaTerm> t11_terms() { return kT11; }
std::span<const SigmaTerm> t12_terms() { return kT12; }
std::span<const SigmaTerm> t21_terms() { return kT21; }
std::span<const SigmaTerm> t22_terms() { return kT22; }
std::span<const SigmaTerm> x_terms() { return kX; }

Complex evaluate_terms(std::span<const SigmaTerm> terms, const Frame& frame, const StokesSet& sigma) {
  Complex sum;
  for (const auto& term : terms) {
    Complex t = Complex(term.coeff) * i_power(term.imag_power);
    if (term.phase_thirds != 0) t *= exp_i_pi(Real(term.phase_thirds) / 3 * frame.tau(term.phase_kappa));
    for (const auto& [n, k] : term.factors) t *= sigma.sigma_n(n, k);
    sum += t;
  }
  return sum;
}

CircuitMatrix circuit_matrix(const Frame& frame, const StokesSet& sigma) {
  const Real shift = pow(2 * frame.s0, (frame.tau_plus - frame.tau_minus) / 3);
  CircuitMatrix T;
  T.t11 = evaluate_terms(kT11, frame, sigma);
  T.t12 = evaluate_terms(kT12, frame, sigma) * shift;
  T.t21 = evaluate_terms(kT21, frame, sigma) / Complex(shift);
  T.t22 = evaluate_terms(kT22, frame, sigma);
  return T;
}

Complex omega_from_cos(const Real& c) {
  const Real two_pi = 2 * pi();
  if (c > 1) return Complex(Real(0), Real(acosh(c) / two_pi));
  if (c < -1) return Complex(Real(0.5), Real(acosh(Real(-c)) / two_pi));
  return Complex(acos(c) / two_pi);
}

MultiplicativeSolutions multiplicative_solutions(const CircuitMatrix& T, const Complex& p1,
                                                 const Complex& p2) {
  MultiplicativeSolutions out;
  out.first = {T.t22 - p1, -T.t12};
  out.second = {T.t22 - p2, -T.t12};
  const Real threshold(kDegeneracyThreshold);
  if (abs(p1 - p2) < threshold) {
    out.degenerate = true;
    out.second = out.first;
  }
  const auto vanishes = [&](const SolutionPair& s) {
    return abs(s.alpha) < threshold && abs(s.beta) < threshold;
  };
  if (vanishes(out.first) || vanishes(out.second)) out.degenerate = true;
  return out;
}

FloquetResult characteristic_exponent(const Frame& frame, const StokesSet& sigma,
                                      double imag_tolerance) {
  FloquetResult r;
  r.T = circuit_matrix(frame, sigma);
  r.X = evaluate_terms(kX, frame, sigma);
  r.cos_two_pi_omega = Complex(cos(2 * pi() * frame.tau_plus)) + r.X;
  if (abs(r.cos_two_pi_omega.imag()) > Real(imag_tolerance)) {
    throw Error(ErrorKind::inconsistency, kModule,
                "cos(2 pi omega) has imaginary part " + to_decimal(r.cos_two_pi_omega.imag(), 6));
  }
  r.omega = omega_from_cos(r.cos_two_pi_omega.real());
  const Complex phase = Complex(Real(0), 2 * pi()) * r.omega;
  r.p1 = exp(-phase);
  r.p2 = exp(phase);
  r.solutions = multiplicative_solutions(r.T, r.p1, r.p2);
  r.det_error = abs(r.T.det() - Complex(1));
  r.trace_consistency = abs(r.T.trace() * Real(0.5) - r.cos_two_pi_omega);
  return r;
}

FloquetAnalysis analyse(const Frame& frame, const StokesComputation& computation,
                        double imag_tolerance) {
  FloquetAnalysis out;
  out.warnings = computation.warnings;
  out.error_estimate = 0;
  const Complex main = evaluate_terms(kX, frame, computation.main);
  for (const StokesSet* variant : {&computation.lower_K, &computation.lower_m, &computation.truncated}) {
    out.error_estimate = std::max<Real>(out.error_estimate, abs(evaluate_terms(kX, frame, *variant) - main));
  }
  const double tolerance = std::max(imag_tolerance, 10 * static_cast<double>(out.error_estimate));
  out.result = characteristic_exponent(frame, computation.main, tolerance);
  out.converged = computation.main.converged();
  if (out.result.det_error > Real(1e-8)) {
    out.warnings.push_back("|det T - 1| = " + to_decimal(out.result.det_error, 3));
  }
  if (out.result.solutions.degenerate) {
    out.warnings.push_back("multiplicative solutions degenerate (2 omega near an integer)");
  }
  return out;
}

}  // namespace charexp
