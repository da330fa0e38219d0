#include "charexp/oracle.hpp"

#include <Eigen/Dense>
#include <Eigen/SVD>

#include <cmath>
#include <string>
#include <utility>
#include <vector>

namespace charexp {

namespace {

constexpr const char* kModule = "oracle";

/// Taylor coefficients in t of Q(e^t) = sum B_m e^(mt) + L^2 + sum D_m e^(-mt) at t0.
std::vector<Complex> potential_series(const EquationParams& params, const Complex& exp_t0, int order) {
  std::array<Complex, 7> up, down;
  up[0] = Complex(1);
  down[0] = Complex(1);
  const Complex inv = Complex(1) / exp_t0;
  for (std::size_t m = 1; m <= 6; ++m) {
    up[m] = up[m - 1] * exp_t0;
    down[m] = down[m - 1] * inv;
  }
  std::vector<Complex> q(static_cast<std::size_t>(order) + 1);
  Real factorial_k(1);
  std::array<Real, 7> mk;
  mk.fill(Real(1));
  for (int k = 0; k <= order; ++k) {
    if (k > 0) factorial_k *= k;
    Complex sum;
    for (int m = 1; m <= 6; ++m) {
      const auto mi = static_cast<std::size_t>(m);
      Complex term = up[mi] * params.b(m);
      Complex back = down[mi] * params.d(m);
      if (k % 2 == 1) back = -back;
      term += back;
      sum += term * mk[mi];
      mk[mi] *= m;
    }
    if (k == 0) sum += Complex(params.L * params.L);
    q[static_cast<std::size_t>(k)] = sum / Complex(factorial_k);
  }
  return q;
}

}  // namespace

OracleAccuracyError::OracleAccuracyError(const std::string& message, MonodromySample best)
    : Error(ErrorKind::accuracy_not_reached, kModule, message), best_(std::move(best)) {}

Matrix2 monodromy_matrix(const EquationParams& params, const Real& radius, int steps, int order,
                         Direction direction) {
  if (radius <= 0 || steps < 1 || order < 2) {
    throw Error(ErrorKind::precondition, kModule, "radius, steps and order must be positive");
  }
  // Y' = [[0, 1], [Q, 0]] Y in t = log z; the columns start at the identity.
  const Real sense = direction == Direction::negative ? Real(-1) : Real(1);
  const Complex h(Real(0), sense * 2 * pi() / steps);
  const Complex step_factor = exp(h);
  Complex exp_t(radius);

  Matrix2 Y{{{Complex(1), Complex(0)}, {Complex(0), Complex(1)}}};
  std::vector<Complex> f(static_cast<std::size_t>(order) + 1);
  for (int s = 0; s < steps; ++s) {
    const auto q = potential_series(params, exp_t, order);
    for (std::size_t col = 0; col < 2; ++col) {
      f[0] = Y[0][col];
      f[1] = Y[1][col];
      for (int k = 0; k + 2 <= order; ++k) {
        Complex acc;
        for (int i = 0; i <= k; ++i) acc += q[static_cast<std::size_t>(i)] * f[static_cast<std::size_t>(k - i)];
        f[static_cast<std::size_t>(k + 2)] = acc / Complex((k + 2) * (k + 1));
      }
      Complex value = f[static_cast<std::size_t>(order)];
      Complex slope = f[static_cast<std::size_t>(order)] * Real(order);
      for (int k = order - 1; k >= 1; --k) {
        value = value * h + f[static_cast<std::size_t>(k)];
        slope = slope * h + f[static_cast<std::size_t>(k)] * Real(k);
      }
      value = value * h + f[0];
      Y[0][col] = value;
      Y[1][col] = slope;
    }
    exp_t *= step_factor;
  }
  return Y;
}

MonodromySample monodromy_trace_ode(const EquationParams& params, const Real& radius,
                                    const Real& target_err, const OdeOptions& options) {
  validate(params);
  if (options.initial_steps < 1 || options.max_steps < options.initial_steps) {
    throw Error(ErrorKind::precondition, kModule, "invalid step bounds");
  }
  const auto sample_at = [&](int steps, const Matrix2& Y, const Complex& previous_trace) {
    MonodromySample s;
    s.radius = radius;
    s.steps = steps;
    s.order = options.order;
    s.fundamental = Y;
    s.trace = Y[0][0] + Y[1][1];
    s.error_estimate = abs(s.trace - previous_trace);
    s.det_error = abs(Y[0][0] * Y[1][1] - Y[0][1] * Y[1][0] - Complex(1));
    return s;
  };

  int steps = options.initial_steps;
  Matrix2 Y = monodromy_matrix(params, radius, steps, options.order, options.direction);
  Complex trace = Y[0][0] + Y[1][1];
  MonodromySample best;
  while (true) {
    const int next = 2 * steps;
    if (next > options.max_steps) {
      throw OracleAccuracyError("step-halving estimate " + to_decimal(best.error_estimate, 3) +
                                    " above target after " + std::to_string(steps) + " steps",
                                best);
    }
    Y = monodromy_matrix(params, radius, next, options.order, options.direction);
    best = sample_at(next, Y, trace);
    if (best.error_estimate <= target_err) return best;
    trace = best.trace;
    steps = next;
  }
}

HillResidual hill_residual(const EquationParams& params, std::complex<double> omega, int N) {
  if (N < 20) throw Error(ErrorKind::precondition, kModule, "hill_residual needs N >= 20");
  using Mat = Eigen::MatrixXcd;
  const int dim = 2 * N + 1;
  const double L = static_cast<double>(params.L);
  std::array<double, 6> B{}, D{};
  for (int m = 1; m <= 6; ++m) {
    B[static_cast<std::size_t>(m - 1)] = static_cast<double>(params.b(m));
    D[static_cast<std::size_t>(m - 1)] = static_cast<double>(params.d(m));
  }

  HillResidual out;
  out.N = N;
  Mat A = Mat::Zero(dim, dim);
  for (int n = -N; n <= N; ++n) {
    const int row = n + N;
    const std::complex<double> diag = (omega + double(n) - L) * (omega + double(n) + L);
    std::complex<double> norm = diag;
    if (std::abs(diag) < 1e-8) {
      norm = 1.0 + double(n) * double(n);
      out.shifted = true;
    }
    A(row, row) = diag / norm;
    for (int m = 1; m <= 6; ++m) {
      if (row - m >= 0) A(row, row - m) = -B[static_cast<std::size_t>(m - 1)] / norm;
      if (row + m < dim) A(row, row + m) = -D[static_cast<std::size_t>(m - 1)] / norm;
    }
  }
  Eigen::BDCSVD<Mat> svd(A);
  out.value = svd.singularValues()(dim - 1);
  return out;
}

HillCheck hill_residual_checked(const EquationParams& params, std::complex<double> omega, int N) {
  return {hill_residual(params, omega, N), hill_residual(params, omega, 2 * N)};
}

}  // namespace charexp
