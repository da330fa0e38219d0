#pragma once

#include "charexp/frame.hpp"
#include "charexp/numeric.hpp"
#include "charexp/stokes.hpp"

#include <array>
#include <vector>

namespace charexp {

/// Inputs of the leading-order prediction for late formal-series coefficients.
struct LateTermModel {
  Kappa kappa = Kappa::plus;
  Real s0;
  Real t10;
  Real t20;
  Real tau_self;   ///< tau(kappa)
  Real tau_other;  ///< tau(-kappa)
  std::array<Complex, 3> sigma;  ///< sigma_0..2(kappa)
};

LateTermModel late_term_model(const Frame& frame, Kappa kappa, const StokesSet& stokes);

/// (2 kappa s0)^(-x), using (-1)^(-x) = exp(i pi x) for kappa = -1.
Complex signed_power(const Real& s0, Kappa kappa, const Real& x);

/// EX_0(n), EX_1(n), EX_2(n): exponentials in (n/3)^(2/3) and (n/3)^(1/3)
/// rotated by the three cube roots.
std::array<Complex, 3> ex_terms(const LateTermModel& model, int n);

/// L_0, L_1, L_2: combinations of the EX_j with exactly one of the constant
/// and two linear identifying terms surviving.
std::array<Complex, 3> l_terms(const LateTermModel& model, int n);

/// Leading asymptotic value of a_n(kappa). Throws precision_exhausted when the
/// gamma factor or the exponentials overflow.
Complex late_coeff_prediction(const LateTermModel& model, int n);

/// Comparison of recurrence coefficients with the prediction over a window.
struct LateRatioTrend {
  std::vector<int> n;
  std::vector<Real> deviation;  ///< smoothed |a_n / prediction - 1|
  std::vector<Real> imag_ratio;  ///< |Im prediction| / |prediction|
  Real final_deviation;
  bool decreasing = false;  ///< least-squares slope of deviation over n is negative
};

/// Deviation at n measured as sum |a_k - P_k| / sum |P_k| over k in
/// [n - window, n + window]. The default window spans three full periods of
/// the mod-3 phase pattern and tolerates isolated near-zeros of the prediction.
LateRatioTrend late_ratio_trend(const LateTermModel& model, const std::vector<Real>& a, int n_lo,
                                int n_hi, int window = 4);

}  // namespace charexp
