#include "charexp/asymptotics.hpp"

#include <string>

namespace charexp {

namespace {

constexpr const char* kModule = "asymptotics";

void require_finite(const Complex& z, const char* what) {
  if (!isfinite(z.real()) || !isfinite(z.imag())) {
    throw Error(ErrorKind::precision_exhausted, kModule, std::string(what) + " overflowed");
  }
}

}  // namespace

LateTermModel late_term_model(const Frame& frame, Kappa kappa, const StokesSet& stokes) {
  LateTermModel m;
  m.kappa = kappa;
  m.s0 = frame.s0;
  m.t10 = frame.t10;
  m.t20 = frame.t20;
  m.tau_self = frame.tau(kappa);
  m.tau_other = frame.tau(opposite(kappa));
  for (int n = 0; n < 3; ++n) m.sigma[static_cast<std::size_t>(n)] = stokes.sigma_n(n, kappa);
  return m;
}

Complex signed_power(const Real& s0, Kappa kappa, const Real& x) {
  const Real magnitude = pow(2 * s0, -x);
  if (kappa == Kappa::plus) return Complex(magnitude);
  return exp_i_pi(x) * magnitude;
}

std::array<Complex, 3> ex_terms(const LateTermModel& model, int n) {
  const int k = value(model.kappa);
  const Real third = Real(n) / 3;
  const Complex x1 = signed_power(model.s0, model.kappa, Real(2) / 3) *
                     (pow(third, Real(2) / 3) * (-2 * k * model.t10));
  const Complex x2 = signed_power(model.s0, model.kappa, Real(1) / 3) *
                     (pow(third, Real(1) / 3) * (-2 * k * model.t20));
  const Complex e2 = pow(eta(), 2);
  const Complex e4 = pow(eta(), 4);
  std::array<Complex, 3> out = {exp(x1 + x2), exp(e4 * x1 + e2 * x2), exp(e2 * x1 + e4 * x2)};
  for (const auto& z : out) require_finite(z, "EX term");
  return out;
}

std::array<Complex, 3> l_terms(const LateTermModel& model, int n) {
  const auto ex = ex_terms(model, n);
  const Complex e2 = pow(eta(), 2);
  const Complex e4 = pow(eta(), 4);
  const Real third = Real(1) / 3;
  return {(ex[0] + ex[1] + ex[2]) * third, (ex[0] + e2 * ex[1] + e4 * ex[2]) * third,
          (ex[0] + e4 * ex[1] + e2 * ex[2]) * third};
}

Complex late_coeff_prediction(const LateTermModel& model, int n) {
  if (n < 1) throw Error(ErrorKind::precondition, kModule, "prediction needs n >= 1");
  const auto ex = ex_terms(model, n);
  const Complex bracket = model.sigma[0] * ex[0] + pow(eta(), 2 * n) * model.sigma[1] * ex[1] +
                          pow(eta(), 4 * n) * model.sigma[2] * ex[2];
  const SignedLog g = log_gamma((model.tau_self - model.tau_other + n) / 3);
  const Real gamma = g.sign < 0 ? Real(-exp(g.log_abs)) : exp(g.log_abs);
  Complex out = signed_power(model.s0, model.kappa, Real(n) / 3) * bracket * (-gamma / (3 * pi()));
  require_finite(out, "late-coefficient prediction");
  return out;
}

LateRatioTrend late_ratio_trend(const LateTermModel& model, const std::vector<Real>& a, int n_lo,
                                int n_hi, int window) {
  if (n_lo - window < 1 || n_hi + window >= static_cast<int>(a.size()) || n_lo > n_hi) {
    throw Error(ErrorKind::precondition, kModule, "coefficient window outside the supplied range");
  }
  std::vector<Complex> prediction(a.size());
  for (int n = n_lo - window; n <= n_hi + window; ++n) {
    prediction[static_cast<std::size_t>(n)] = late_coeff_prediction(model, n);
  }

  LateRatioTrend out;
  for (int n = n_lo; n <= n_hi; ++n) {
    Real diff(0), scale(0);
    for (int k = n - window; k <= n + window; ++k) {
      const auto& p = prediction[static_cast<std::size_t>(k)];
      diff += abs(Complex(a[static_cast<std::size_t>(k)]) - p);
      scale += abs(p);
    }
    const auto& p = prediction[static_cast<std::size_t>(n)];
    out.n.push_back(n);
    out.deviation.push_back(scale == 0 ? Real(0) : Real(diff / scale));
    out.imag_ratio.push_back(abs(p) == 0 ? Real(0) : Real(abs(p.imag()) / abs(p)));
  }
  out.final_deviation = out.deviation.back();

  Real sx(0), sy(0), sxx(0), sxy(0);
  const Real count(static_cast<int>(out.n.size()));
  for (std::size_t i = 0; i < out.n.size(); ++i) {
    const Real x(out.n[i]);
    sx += x;
    sy += out.deviation[i];
    sxx += x * x;
    sxy += x * out.deviation[i];
  }
  const Real denom = count * sxx - sx * sx;
  out.decreasing = denom != 0 && (count * sxy - sx * sy) / denom < 0;
  return out;
}

}  // namespace charexp
