#include "charexp/numeric.hpp"

#include <mpfr.h>

#include <cmath>
#include <string>

namespace charexp {

namespace bmp = boost::multiprecision;

std::string_view to_string(ErrorKind kind) noexcept {
  switch (kind) {
    case ErrorKind::invalid_parameters: return "invalid-parameters";
    case ErrorKind::lambda_degenerate: return "lambda-degenerate";
    case ErrorKind::incomplete_table: return "incomplete-table";
    case ErrorKind::precondition: return "precondition-violation";
    case ErrorKind::degenerate_mu: return "degenerate-mu";
    case ErrorKind::ill_conditioned: return "ill-conditioned-solve";
    case ErrorKind::precision_exhausted: return "precision-exhausted";
    case ErrorKind::accuracy_not_reached: return "accuracy-not-reached";
    case ErrorKind::inconsistency: return "inconsistency";
  }
  return "unknown";
}

Error::Error(ErrorKind kind, std::string module, const std::string& message)
    : std::runtime_error(std::string(to_string(kind)) + " [" + module + "]: " + message),
      kind_(kind),
      module_(std::move(module)) {}

namespace {

unsigned bits_to_digits10(unsigned bits) {
  return static_cast<unsigned>(std::ceil(bits * 0.30102999566398119521));
}

}  // namespace

WorkingPrecision::WorkingPrecision(unsigned bits) : saved_digits10_(Real::default_precision()) {
  Real::default_precision(bits_to_digits10(bits));
}

WorkingPrecision::~WorkingPrecision() { Real::default_precision(saved_digits10_); }

unsigned WorkingPrecision::bits() {
  Real probe;
  return static_cast<unsigned>(mpfr_get_prec(probe.backend().data()));
}

Real epsilon() {
  return ldexp(Real(1), 1 - static_cast<int>(WorkingPrecision::bits()));
}

Real pi() {
  Real r;
  mpfr_const_pi(r.backend().data(), MPFR_RNDN);
  return r;
}

int decimal_digits(unsigned bits) { return static_cast<int>(bits * 0.30102999566398119521); }

std::string to_decimal(const Real& x, int digits) {
  return x.str(static_cast<std::streamsize>(digits), std::ios_base::scientific);
}

std::string to_decimal(const Real& x) { return to_decimal(x, decimal_digits(WorkingPrecision::bits())); }

Real parse_real(std::string_view text) {
  std::string s(text);
  Real r;
  char* end = nullptr;
  mpfr_strtofr(r.backend().data(), s.c_str(), &end, 10, MPFR_RNDN);
  if (s.empty() || end == s.c_str() || *end != '\0') {
    throw Error(ErrorKind::invalid_parameters, "numeric", "not a decimal number: '" + s + "'");
  }
  return r;
}

SignedLog log_gamma(const Real& x) {
  SignedLog out;
  mpfr_lgamma(out.log_abs.backend().data(), &out.sign, x.backend().data(), MPFR_RNDN);
  if (!isfinite(out.log_abs)) {
    throw Error(ErrorKind::degenerate_mu, "numeric", "gamma pole at " + to_decimal(x, 20));
  }
  return out;
}

Real pochhammer(const Real& x, int n) {
  Real r(1);
  for (int i = 0; i < n; ++i) r *= x + i;
  return r;
}

Real factorial(int n) {
  Real r(1);
  for (int i = 2; i <= n; ++i) r *= i;
  return r;
}

Real distance_to_integer(const Real& x) { return abs(x - round(x)); }

Complex& Complex::operator+=(const Complex& o) {
  re_ += o.re_;
  im_ += o.im_;
  return *this;
}

Complex& Complex::operator-=(const Complex& o) {
  re_ -= o.re_;
  im_ -= o.im_;
  return *this;
}

Complex& Complex::operator*=(const Complex& o) {
  Real re = re_ * o.re_ - im_ * o.im_;
  im_ = re_ * o.im_ + im_ * o.re_;
  re_ = std::move(re);
  return *this;
}

Complex& Complex::operator/=(const Complex& o) {
  // Smith's algorithm keeps the intermediate magnitudes bounded.
  if (abs(o.re_) >= abs(o.im_)) {
    Real r = o.im_ / o.re_;
    Real d = o.re_ + r * o.im_;
    Real re = (re_ + im_ * r) / d;
    im_ = (im_ - re_ * r) / d;
    re_ = std::move(re);
  } else {
    Real r = o.re_ / o.im_;
    Real d = o.im_ + r * o.re_;
    Real re = (re_ * r + im_) / d;
    im_ = (im_ * r - re_) / d;
    re_ = std::move(re);
  }
  return *this;
}

Complex& Complex::operator*=(const Real& s) {
  re_ *= s;
  im_ *= s;
  return *this;
}

Complex conj(const Complex& z) { return {z.real(), -z.imag()}; }

Real abs(const Complex& z) { return hypot(z.real(), z.imag()); }

Real norm(const Complex& z) { return z.real() * z.real() + z.imag() * z.imag(); }

Complex exp(const Complex& z) {
  Real m = exp(z.real());
  return {m * cos(z.imag()), m * sin(z.imag())};
}

Complex log(const Complex& z) { return {log(abs(z)), atan2(z.imag(), z.real())}; }

Complex sqrt(const Complex& z) {
  // Principal branch, numerically stable form.
  Real r = abs(z);
  if (r == 0) return {};
  Real t = sqrt((r + abs(z.real())) / 2);
  if (z.real() >= 0) return {t, z.imag() / (2 * t)};
  Real im = z.imag() >= 0 ? t : Real(-t);
  return {abs(z.imag()) / (2 * t), im};
}

Complex acos(const Complex& z) {
  // acos z = -i log(z + i sqrt(1 - z^2)), principal branch.
  if (z.imag() == 0 && abs(z.real()) <= 1) return {acos(z.real()), Real(0)};
  Complex w = z + imag_unit() * sqrt(Complex(1) - z * z);
  Complex l = log(w);
  return {l.imag(), -l.real()};
}

Complex exp_i_pi(const Real& x) {
  Real px = pi() * x;
  return {cos(px), sin(px)};
}

Complex pow(const Complex& z, int n) {
  Complex base = n >= 0 ? z : Complex(1) / z;
  unsigned e = static_cast<unsigned>(n >= 0 ? n : -n);
  Complex r(1);
  while (e) {
    if (e & 1u) r *= base;
    base *= base;
    e >>= 1u;
  }
  return r;
}

}  // namespace charexp
