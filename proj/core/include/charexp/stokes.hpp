#pragma once

#include "charexp/coeffs.hpp"
#include "charexp/frame.hpp"
#include "charexp/numeric.hpp"

#include <array>
#include <functional>
#include <optional>
#include <string>
#include <vector>

namespace charexp {

/// Grading of a cell, 2 n1 + n2. Cells on one grading level share the
/// fractional power (2/3) n1 + (1/3) n2 modulo one.
constexpr int grading(int n1, int n2) noexcept { return 2 * n1 + n2; }

/// Number of cells with grading <= lmax.
int cell_count(int lmax);
/// Position of (n1, n2) in grading-major order (grading, then n1 ascending).
int cell_index(int n1, int n2);

struct EGridEntry {
  int n1 = 0;
  int n2 = 0;
  Real value;
  Real error;
};

/// Connection coefficients e(-kappa; n1, n2) for all cells up to a grading
/// level, obtained from the large-m behaviour of b(kappa; m, n1, n2).
struct EGrid {
  Kappa kappa_source = Kappa::plus;  ///< the entries are e(-kappa_source; .)
  int lmax = 0;
  int m_used = 0;
  int K_used = 0;
  std::vector<EGridEntry> entries;  ///< grading-major order

  const EGridEntry& at(int n1, int n2) const;
  bool contains(int n1, int n2) const noexcept {
    return n1 >= 0 && n2 >= 0 && grading(n1, n2) <= lmax;
  }
};

/// H(-kappa; k, l1, l2; q1, q2), the correction coefficient built from the
/// table of the opposite sign. `b_other` must hold b(-kappa; j <= k, l1, l2).
Real h_coeff(const Frame& frame, Kappa kappa, int k, int l1, int l2, int q1, int q2,
             const BTable& b_other);

/// Solves the asymptotic connection formula level by level with fixed m and
/// truncation order K. Holds both b-tables so repeated solves at different
/// (m, K, lmax) reuse them.
class EGridSolver {
 public:
  EGridSolver(const Frame& frame, Kappa kappa, int m_max, int K_max, int lmax_cap);

  Kappa kappa() const noexcept { return kappa_; }
  int lmax_cap() const noexcept { return lmax_cap_; }
  const BTable& table() const noexcept { return b_self_; }
  const BTable& table_other() const noexcept { return b_other_; }

  /// Called after each completed grading level; returning true stops the
  /// solve at that level.
  using LevelCallback = std::function<bool(int level, const std::vector<Real>& values)>;

  /// e(-kappa; n1, n2) for grading <= lmax, in grading-major order.
  std::vector<Real> solve(int m, int K, int lmax, const LevelCallback& stop = {}) const;

  /// Only e(-kappa; 0, 0); cheap enough to drive the choice of m.
  Real solve_origin(int m, int K) const;

 private:
  Frame frame_;
  Kappa kappa_;
  int m_max_;
  int K_max_;
  int lmax_cap_;
  BTable b_self_;
  BTable b_other_;
};

/// e(-kappa; n1, n2) at (m, K) with an error estimate per entry: the larger of
/// the changes under K -> K-1 and m -> m-10.
EGrid e_grid(const Frame& frame, Kappa kappa, int lmax, int m, int K);

/// Finite-m value of the explicit limit formula for e(-kappa; n1, n2).
/// `b_tab` is the table for kappa and must cover (m, n1, n2).
Real e_limit_estimate(const Frame& frame, Kappa kappa, int n1, int n2, int m,
                      const BTable& b_tab);

/// exp(i pi / 3).
Complex eta();

/// S0, S1, S2 for one sign and their per-level contributions.
struct PartialSums {
  Kappa kappa = Kappa::plus;
  std::array<Real, 3> S;
  /// Contribution of each grading level to its sum, including the
  /// (2 s0)^(-j/3) weight it carries into the multipliers.
  std::vector<Real> level_contribution;
  int levels_used = 0;
  bool converged = false;
};

inline constexpr double kDefaultLevelTolerance = 1e-18;

/// Sums the grid levels with grading < `levels`.
PartialSums partial_sums(const Frame& frame, const EGrid& grid, int levels,
                         double level_tolerance = kDefaultLevelTolerance);
PartialSums partial_sums(const Frame& frame, const EGrid& grid);

/// Converged when the last two level contributions are both below
/// `tolerance` times the largest contribution seen.
bool levels_converged(const std::vector<Real>& contributions, const Real& tolerance);

/// sigma_0, sigma_1, sigma_2 for one sign from its partial sums.
std::array<Complex, 3> multipliers_from_sums(const Frame& frame, Kappa kappa,
                                             const std::array<Real, 3>& S);

struct StokesSet {
  std::array<std::array<Real, 3>, 2> S;        ///< [kappa slot][j]
  std::array<std::array<Complex, 3>, 2> sigma;  ///< [kappa slot][n]
  Complex eta;
  std::array<PartialSums, 2> sums;

  static constexpr std::size_t slot(Kappa k) noexcept { return k == Kappa::plus ? 0 : 1; }

  const Real& s(Kappa k, int j) const { return S[slot(k)].at(static_cast<std::size_t>(j)); }
  const Complex& sigma_n(int n, Kappa k) const {
    return sigma[slot(k)].at(static_cast<std::size_t>(n));
  }
  bool converged() const noexcept { return sums[0].converged && sums[1].converged; }
};

/// Multipliers from two populated grids, summed up to grading `lmax`.
StokesSet stokes_multipliers(const Frame& frame, const EGrid& grid_plus, const EGrid& grid_minus,
                             int lmax, double level_tolerance = kDefaultLevelTolerance);

/// Multipliers from explicit partial sums (used for hypothetical inputs).
StokesSet stokes_from_sums(const Frame& frame, const std::array<Real, 3>& S_plus,
                           const std::array<Real, 3>& S_minus);

struct StokesOptions {
  std::optional<int> m;  ///< fixed m; adaptive when empty
  int m_start = 100;
  int m_step = 50;
  int m_max = 400;
  int K = 12;
  std::optional<int> lmax;  ///< fixed grading cap; adaptive when empty
  int lmax_start = 12;  ///< first level at which the stop criterion is checked
  int lmax_cap = 96;
  /// Relative stabilisation target for the e-grid up to grading lmax_start
  /// while increasing m.
  double m_tolerance = 1e-20;
  /// Stop criterion for the level sums.
  double level_tolerance = kDefaultLevelTolerance;
  bool parallel = true;
};

/// The multipliers plus the variants used for error estimation.
struct StokesComputation {
  EGrid grid_plus;  ///< kappa_source = +1, i.e. e(-1; .)
  EGrid grid_minus;
  StokesSet main;
  StokesSet lower_K;    ///< same m, order K-1
  StokesSet lower_m;    ///< m - m_step, order K
  StokesSet truncated;  ///< last level of every partial sum removed
  int lmax_used = 0;
  std::vector<std::string> warnings;
};

StokesComputation compute_stokes(const Frame& frame, const StokesOptions& options);

}  // namespace charexp
