#pragma once

#include <boost/multiprecision/mpfr.hpp>

#include <stdexcept>
#include <string>
#include <string_view>

namespace charexp {

/// Extended-precision real. Precision is the process-wide default set through
/// WorkingPrecision; expression templates are disabled so `auto` is safe.
using Real = boost::multiprecision::number<boost::multiprecision::mpfr_float_backend<0>,
                                           boost::multiprecision::et_off>;

enum class ErrorKind {
  invalid_parameters,
  lambda_degenerate,
  incomplete_table,
  precondition,
  degenerate_mu,
  ill_conditioned,
  precision_exhausted,
  accuracy_not_reached,
  inconsistency,
};

std::string_view to_string(ErrorKind kind) noexcept;

/// Numerical failure tagged with the module that raised it.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, std::string module, const std::string& message);

  ErrorKind kind() const noexcept { return kind_; }
  const std::string& module() const noexcept { return module_; }

 private:
  ErrorKind kind_;
  std::string module_;
};

/// Selects one of the two formal solutions at infinity, exp(+P) or exp(-P).
enum class Kappa : int { plus = 1, minus = -1 };

constexpr int value(Kappa k) noexcept { return static_cast<int>(k); }
constexpr Kappa opposite(Kappa k) noexcept { return k == Kappa::plus ? Kappa::minus : Kappa::plus; }

/// Scoped override of the working precision (in bits). Not thread-safe:
/// set it before spawning workers that share the same precision.
class WorkingPrecision {
 public:
  explicit WorkingPrecision(unsigned bits);
  ~WorkingPrecision();
  WorkingPrecision(const WorkingPrecision&) = delete;
  WorkingPrecision& operator=(const WorkingPrecision&) = delete;

  /// Current precision in bits.
  static unsigned bits();

 private:
  unsigned saved_digits10_;
};

/// Unit roundoff at the current precision, 2^(1-bits).
Real epsilon();
Real pi();

/// Decimal digits that faithfully represent `bits` of binary precision.
int decimal_digits(unsigned bits);

/// Scientific-notation decimal string with `digits` significant digits.
std::string to_decimal(const Real& x, int digits);
std::string to_decimal(const Real& x);

/// Parses a decimal literal directly at working precision.
Real parse_real(std::string_view text);

struct SignedLog {
  Real log_abs;
  int sign = 1;
};

/// log|Gamma(x)| and the sign of Gamma(x). Throws degenerate_mu at poles.
SignedLog log_gamma(const Real& x);

/// Rising factorial (x)_n = x (x+1) ... (x+n-1); (x)_0 = 1.
Real pochhammer(const Real& x, int n);
Real factorial(int n);

/// Distance from x to the nearest integer.
Real distance_to_integer(const Real& x);

class Complex {
 public:
  Complex() : re_(0), im_(0) {}
  Complex(Real re) : re_(std::move(re)), im_(0) {}  // NOLINT
  Complex(Real re, Real im) : re_(std::move(re)), im_(std::move(im)) {}
  Complex(int re) : re_(re), im_(0) {}  // NOLINT

  const Real& real() const noexcept { return re_; }
  const Real& imag() const noexcept { return im_; }

  Complex& operator+=(const Complex& o);
  Complex& operator-=(const Complex& o);
  Complex& operator*=(const Complex& o);
  Complex& operator/=(const Complex& o);
  Complex& operator*=(const Real& s);

  Complex operator-() const { return {-re_, -im_}; }

 private:
  Real re_;
  Real im_;
};

inline Complex operator+(Complex a, const Complex& b) { return a += b; }
inline Complex operator-(Complex a, const Complex& b) { return a -= b; }
inline Complex operator*(Complex a, const Complex& b) { return a *= b; }
inline Complex operator/(Complex a, const Complex& b) { return a /= b; }
inline Complex operator*(Complex a, const Real& s) { return a *= s; }
inline Complex operator*(const Real& s, Complex a) { return a *= s; }
inline Complex operator*(int s, Complex a) { return a *= Real(s); }

/// The imaginary unit at the current working precision.
inline Complex imag_unit() { return {Real(0), Real(1)}; }

Complex conj(const Complex& z);
Real abs(const Complex& z);
Real norm(const Complex& z);
Complex exp(const Complex& z);
Complex log(const Complex& z);
Complex sqrt(const Complex& z);
/// Principal arccosine.
Complex acos(const Complex& z);
/// exp(i pi x) for real x.
Complex exp_i_pi(const Real& x);
Complex pow(const Complex& z, int n);

}  // namespace charexp
