#pragma once

#include "charexp/numeric.hpp"

#include <array>

namespace charexp {

/// Coefficients of z^2 f'' + z f' - [sum D_m z^-m + L^2 + sum B_m z^m] f = 0.
/// Index 0 of `D` and `B` holds D_1 and B_1.
struct EquationParams {
  std::array<Real, 6> D;
  Real L;
  std::array<Real, 6> B;

  const Real& d(int m) const { return D.at(static_cast<std::size_t>(m - 1)); }
  const Real& b(int m) const { return B.at(static_cast<std::size_t>(m - 1)); }

  bool all_d_zero() const;
};

/// Throws invalid_parameters unless B_6 > 0 and L >= 0.
void validate(const EquationParams& params);

/// Distance below which mu(kappa) is treated as an integer.
inline constexpr double kMuIntegerGuard = 1e-6;

/// Exponential-factor bookkeeping shared by every downstream module.
///
/// P(z) = p3 z^3 + p2 z^2 + p1 z is the exponent of the formal solutions at
/// infinity, z^-tau(kappa) their power factor. The integral representation
/// places its singular points at kappa (s0, t10, t20) = kappa (p3, p2, p1), and
/// the free exponent lambda fixes mu(kappa) through 3 mu = lambda + tau - 3.
struct Frame {
  EquationParams params;
  Real p1, p2, p3;
  Real s0, t10, t20;
  Real tau_plus, tau_minus;
  Real lambda;
  Real mu_plus, mu_minus;

  const Real& tau(Kappa k) const { return k == Kappa::plus ? tau_plus : tau_minus; }
  const Real& mu(Kappa k) const { return k == Kappa::plus ? mu_plus : mu_minus; }
  const Real& L() const { return params.L; }
};

/// Throws invalid_parameters for invalid params and lambda_degenerate when
/// mu(+1) or mu(-1) lies within kMuIntegerGuard of an integer.
Frame derive_frame(const EquationParams& params, const Real& lambda);

/// lambda = L unless that makes mu integral, otherwise L + k/pi for the
/// smallest k = 1, 2, ... that clears the guard.
Real choose_lambda(const EquationParams& params);

}  // namespace charexp
