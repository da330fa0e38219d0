#pragma once

#include "charexp/frame.hpp"
#include "charexp/numeric.hpp"
#include "charexp/stokes.hpp"

#include <array>
#include <span>
#include <string>
#include <vector>

namespace charexp {

/// One monomial of a circuit-matrix entry or of X:
///   coeff * i^imag_power * exp((phase_thirds/3) * pi * i * tau(phase_kappa)) * prod sigma.
struct SigmaTerm {
  int coeff = 1;
  int imag_power = 0;
  int phase_thirds = 0;  ///< 0, 2, 4 or 6
  Kappa phase_kappa = Kappa::plus;
  /// Factors sigma_n(kappa) as (n, kappa).
  std::vector<std::pair<int, Kappa>> factors;
};

/// Term lists of the four circuit-matrix entries and of X, without the
/// (2 s0)^(+-(tau(1)-tau(-1))/3) prefactors carried by T12 and T21.
std::span<const SigmaTerm> t11_terms();
std::span<const SigmaTerm> t12_terms();
std::span<const SigmaTerm> t21_terms();
std::span<const SigmaTerm> t22_terms();
std::span<const SigmaTerm> x_terms();

/// Sum of a term list at the given multipliers.
Complex evaluate_terms(std::span<const SigmaTerm> terms, const Frame& frame, const StokesSet& sigma);

/// Matrix of one negative-sense circuit about the origin in the basis of the
/// two solutions at infinity.
struct CircuitMatrix {
  Complex t11, t12, t21, t22;
  Complex det() const { return t11 * t22 - t12 * t21; }
  Complex trace() const { return t11 + t22; }
};

CircuitMatrix circuit_matrix(const Frame& frame, const StokesSet& sigma);

/// Coefficients (alpha, beta) of a multiplicative solution
/// alpha f_inf1 + beta f_inf2.
struct SolutionPair {
  Complex alpha;
  Complex beta;
};

struct MultiplicativeSolutions {
  SolutionPair first;   ///< multiplier p1
  SolutionPair second;  ///< multiplier p2
  bool degenerate = false;
};

inline constexpr double kDegeneracyThreshold = 1e-8;

struct FloquetResult {
  Complex cos_two_pi_omega;  ///< cos(2 pi tau(1)) + X
  /// Re omega in [0, 1/2] when the cosine is real and inside [-1, 1]; otherwise
  /// the branch with Re omega in {0, 1/2} and Im omega >= 0.
  Complex omega;
  Complex X;
  Complex p1;  ///< exp(-2 pi i omega)
  Complex p2;  ///< exp(+2 pi i omega)
  MultiplicativeSolutions solutions;
  CircuitMatrix T;
  Real det_error;          ///< |det T - 1|
  Real trace_consistency;  ///< |(T11 + T22)/2 - cos(2 pi omega)|
};

/// Omega on the documented branch from a real cosine value.
Complex omega_from_cos(const Real& c);

/// Assembles T and X. Throws `inconsistency` when |Im cos(2 pi omega)|
/// exceeds `imag_tolerance`.
FloquetResult characteristic_exponent(const Frame& frame, const StokesSet& sigma,
                                      double imag_tolerance = 1e-8);

/// Pairs from the lower row of the circuit relation: (T22 - p, -T12).
MultiplicativeSolutions multiplicative_solutions(const CircuitMatrix& T, const Complex& p1,
                                                 const Complex& p2);

/// Result of the pipeline together with its spread over the truncation
/// variants of the Stokes computation.
struct FloquetAnalysis {
  FloquetResult result;
  Real error_estimate;  ///< max |cos(2 pi omega) - variant|
  bool converged = false;
  std::vector<std::string> warnings;
};

FloquetAnalysis analyse(const Frame& frame, const StokesComputation& computation,
                        double imag_tolerance = 1e-8);

}  // namespace charexp
