#include "charexp/frame.hpp"

namespace charexp {

namespace {

constexpr const char* kModule = "frame";

struct Exponents {
  Real p1, p2, p3;
  Real tau_plus, tau_minus;
};

Exponents exponents(const EquationParams& params) {
  Exponents e;
  e.p3 = sqrt(params.b(6)) / 3;
  e.p2 = params.b(5) / (12 * e.p3);
  e.p1 = (params.b(4) - 4 * e.p2 * e.p2) / (6 * e.p3);
  // tau(kappa) = 3/2 + odd(kappa); the kappa-odd part flips sign.
  Real odd = (-params.b(3) / 6 + 2 * e.p1 * e.p2 / 3) / e.p3;
  e.tau_plus = Real(3) / 2 + odd;
  e.tau_minus = Real(3) / 2 - odd;
  return e;
}

bool mu_degenerate(const Real& lambda, const Exponents& e) {
  const Real guard(kMuIntegerGuard);
  return distance_to_integer((lambda + e.tau_plus - 3) / 3) < guard ||
         distance_to_integer((lambda + e.tau_minus - 3) / 3) < guard;
}

}  // namespace

bool EquationParams::all_d_zero() const {
  for (const auto& d : D) {
    if (d != 0) return false;
  }
  return true;
}

void validate(const EquationParams& params) {
  if (!(params.b(6) > 0)) {
    throw Error(ErrorKind::invalid_parameters, kModule, "B6 must be positive");
  }
  if (!(params.L >= 0)) {
    throw Error(ErrorKind::invalid_parameters, kModule, "L must not be negative");
  }
  for (int m = 1; m <= 6; ++m) {
    if (!isfinite(params.d(m)) || !isfinite(params.b(m))) {
      throw Error(ErrorKind::invalid_parameters, kModule, "parameters must be finite");
    }
  }
}

Frame derive_frame(const EquationParams& params, const Real& lambda) {
  validate(params);
  if (!isfinite(lambda)) {
    throw Error(ErrorKind::invalid_parameters, kModule, "lambda must be finite");
  }
  Exponents e = exponents(params);
  if (mu_degenerate(lambda, e)) {
    throw Error(ErrorKind::lambda_degenerate, kModule,
                "mu is integral for lambda = " + to_decimal(lambda, 20));
  }
  Frame f;
  f.params = params;
  f.p1 = e.p1;
  f.p2 = e.p2;
  f.p3 = e.p3;
  f.s0 = e.p3;
  f.t10 = e.p2;
  f.t20 = e.p1;
  f.tau_plus = e.tau_plus;
  f.tau_minus = e.tau_minus;
  f.lambda = lambda;
  f.mu_plus = (lambda + e.tau_plus - 3) / 3;
  f.mu_minus = (lambda + e.tau_minus - 3) / 3;
  return f;
}

Real choose_lambda(const EquationParams& params) {
  validate(params);
  Exponents e = exponents(params);
  Real lambda = params.L;
  const Real offset = 1 / pi();
  for (int k = 1; mu_degenerate(lambda, e); ++k) {
    lambda = params.L + k * offset;
  }
  return lambda;
}

}  // namespace charexp
