#pragma once

#include "charexp/frame.hpp"
#include "charexp/numeric.hpp"

#include <array>
#include <complex>

namespace charexp {

/// Sense of the circuit z = r exp(-+ i theta).
enum class Direction { negative, positive };

struct OdeOptions {
  int order = 30;  ///< Taylor order per step
  int initial_steps = 32;
  int max_steps = 16384;
  Direction direction = Direction::negative;
};

using Matrix2 = std::array<std::array<Complex, 2>, 2>;

/// Monodromy of the system for (f, z f') after one circuit of |z| = radius,
/// starting from the identity.
struct MonodromySample {
  Real radius;
  int steps = 0;
  int order = 0;
  Complex trace;
  Matrix2 fundamental;
  Real error_estimate;  ///< |trace(steps) - trace(steps / 2)|
  Real det_error;       ///< |det - 1|
};

/// Raised when the step cap is hit; carries the best sample obtained.
class OracleAccuracyError : public Error {
 public:
  OracleAccuracyError(const std::string& message, MonodromySample best);
  const MonodromySample& best() const noexcept { return best_; }

 private:
  MonodromySample best_;
};

/// One pass of the fixed-step Taylor integrator in t = log z.
Matrix2 monodromy_matrix(const EquationParams& params, const Real& radius, int steps, int order,
                         Direction direction = Direction::negative);

/// Step-doubling until the trace estimate is below `target_err`.
MonodromySample monodromy_trace_ode(const EquationParams& params, const Real& radius,
                                    const Real& target_err, const OdeOptions& options = {});

struct HillResidual {
  double value = 0;      ///< smallest singular value of the normalized system
  int N = 0;
  bool shifted = false;  ///< some row normalizer was near zero
};

inline constexpr int kHillDefaultN = 80;

/// Smallest singular value of the (2N+1)-row truncation of the bilateral
/// recurrence for Floquet coefficients c_{-N..N}.
HillResidual hill_residual(const EquationParams& params, std::complex<double> omega,
                           int N = kHillDefaultN);

/// Residual at N and at 2N.
struct HillCheck {
  HillResidual coarse;
  HillResidual fine;
};

HillCheck hill_residual_checked(const EquationParams& params, std::complex<double> omega,
                                int N = kHillDefaultN);

}  // namespace charexp
