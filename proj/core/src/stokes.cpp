#include "charexp/stokes.hpp"

#include <mpfr.h>

#include <algorithm>
#include <future>
#include <string>
#include <utility>

namespace charexp {

namespace {

constexpr const char* kModule = "stokes";

int level_offset(int l) { return l + (l / 2) * ((l - 1) / 2); }

Real phi(int q1, int q2) { return Real(grading(q1, q2)) / 3; }

std::vector<std::pair<int, int>> cells_up_to(int lmax) {
  std::vector<std::pair<int, int>> cells;
  cells.reserve(static_cast<std::size_t>(cell_count(lmax)));
  for (int l = 0; l <= lmax; ++l) {
    for (int n1 = 0; 2 * n1 <= l; ++n1) cells.emplace_back(n1, l - 2 * n1);
  }
  return cells;
}

/// Per-grading data shared by every source cell on that level.
struct LevelData {
  Real gamma;                     // Gamma(-mu(-kappa) - phi + m)
  std::vector<Real> corrections;  // sum_k r_k H(k, l1, l2), indexed (l1, l2)
};

}  // namespace

int cell_count(int lmax) { return lmax < 0 ? 0 : level_offset(lmax + 1); }

int cell_index(int n1, int n2) { return level_offset(grading(n1, n2)) + n1; }

const EGridEntry& EGrid::at(int n1, int n2) const {
  if (!contains(n1, n2)) {
    throw Error(ErrorKind::incomplete_table, kModule,
                "e(" + std::to_string(n1) + "," + std::to_string(n2) + ") is outside the grid");
  }
  return entries[static_cast<std::size_t>(cell_index(n1, n2))];
}

Real h_coeff(const Frame& frame, Kappa kappa, int k, int l1, int l2, int q1, int q2,
             const BTable& b_other) {
  if (b_other.kappa() != opposite(kappa)) {
    throw Error(ErrorKind::precondition, kModule, "h_coeff needs the table for -kappa");
  }
  const Real alpha = 1 + frame.mu(opposite(kappa)) + phi(q1, q2);
  const Real step = -2 * value(kappa) * frame.s0;
  Real sum(0);
  for (int j = l1 + l2; j <= k; ++j) {
    const Real denom = factorial(k - j) * pochhammer(alpha, j);
    if (denom == 0) {
      throw Error(ErrorKind::degenerate_mu, kModule, "Pochhammer factor in H vanishes");
    }
    sum += pochhammer(frame.mu(kappa), k - j) / denom * pow(step, j) * b_other(j, l1, l2);
  }
  return sum;
}

EGridSolver::EGridSolver(const Frame& frame, Kappa kappa, int m_max, int K_max, int lmax_cap)
    : frame_(frame),
      kappa_(kappa),
      m_max_(m_max),
      K_max_(K_max),
      lmax_cap_(lmax_cap),
      b_self_(b_table(frame, kappa, m_max, lmax_cap / 2, lmax_cap, lmax_cap)),
      b_other_(b_table(frame, opposite(kappa), K_max, K_max, K_max)) {}

std::vector<Real> EGridSolver::solve(int m, int K, int lmax, const LevelCallback& stop) const {
  if (m < 1 || m > m_max_ || K < 0 || K > K_max_ || lmax < 0 || lmax > lmax_cap_) {
    throw Error(ErrorKind::precondition, kModule,
                "solve(m=" + std::to_string(m) + ", K=" + std::to_string(K) +
                    ", lmax=" + std::to_string(lmax) + ") exceeds the prepared tables");
  }
  const int k = value(kappa_);
  const Real& mu_self = frame_.mu(kappa_);
  const Real& mu_other = frame_.mu(opposite(kappa_));
  const std::size_t width = static_cast<std::size_t>(K) + 1;

  // (mu(kappa))_i / i!
  std::vector<Real> c(width);
  c[0] = 1;
  for (int i = 1; i <= K; ++i) {
    c[static_cast<std::size_t>(i)] = c[static_cast<std::size_t>(i - 1)] * (mu_self + i - 1) / i;
  }

  // Everything attached to a source cell depends on it only through its
  // grading, so it is built once per level, on demand.
  const Real step = -2 * k * frame_.s0;
  std::vector<LevelData> levels;
  levels.reserve(static_cast<std::size_t>(lmax) + 1);
  const auto build_level = [&](int level) {
    const Real ph = Real(level) / 3;
    const Real alpha = 1 + mu_other + ph;
    LevelData data;
    const SignedLog lg = log_gamma(-mu_other - ph + m);
    data.gamma = lg.sign < 0 ? Real(-exp(lg.log_abs)) : exp(lg.log_abs);

    // d_j = (-2 kappa s0)^j / (alpha)_j and r_j = (alpha)_j / (alpha - m)_j
    std::vector<Real> d(width), r(width);
    Real poch_a(1), poch_am(1), power(1);
    for (int j = 0; j <= K; ++j) {
      if (poch_a == 0 || poch_am == 0) {
        throw Error(ErrorKind::degenerate_mu, kModule,
                    "Pochhammer factor vanishes at grading " + std::to_string(level));
      }
      d[static_cast<std::size_t>(j)] = power / poch_a;
      r[static_cast<std::size_t>(j)] = poch_a / poch_am;
      poch_a *= alpha + j;
      poch_am *= alpha - m + j;
      power *= step;
    }

    data.corrections.assign(width * width, Real(0));
    for (int l1 = 0; l1 <= K; ++l1) {
      for (int l2 = 0; l1 + l2 <= K; ++l2) {
        Real total(0);
        for (int kk = l1 + l2; kk <= K; ++kk) {
          Real h(0);
          for (int j = l1 + l2; j <= kk; ++j) {
            const Real& bj = b_other_(j, l1, l2);
            if (bj == 0) continue;
            h += c[static_cast<std::size_t>(kk - j)] * d[static_cast<std::size_t>(j)] * bj;
          }
          total += r[static_cast<std::size_t>(kk)] * h;
        }
        data.corrections[static_cast<std::size_t>(l1) * width + static_cast<std::size_t>(l2)] =
            std::move(total);
      }
    }
    levels.push_back(std::move(data));
  };

  // (-2 kappa t10)^j / j! and (-2 kappa t20)^j / j!
  std::vector<Real> t1(static_cast<std::size_t>(lmax) + 1), t2(static_cast<std::size_t>(lmax) + 1);
  t1[0] = 1;
  t2[0] = 1;
  for (int j = 1; j <= lmax; ++j) {
    t1[static_cast<std::size_t>(j)] = t1[static_cast<std::size_t>(j - 1)] * (-2 * k * frame_.t10) / j;
    t2[static_cast<std::size_t>(j)] = t2[static_cast<std::size_t>(j - 1)] * (-2 * k * frame_.t20) / j;
  }

  const SignedLog log_m_fact = log_gamma(Real(1 + m));
  const SignedLog log_mu_shift = log_gamma(1 + mu_self + m);
  Real scale = exp(log_m_fact.log_abs - log_mu_shift.log_abs) * (-pi()) * pow(Real(2 * k) * frame_.s0, m);
  if (log_m_fact.sign * log_mu_shift.sign < 0) scale = -scale;

  const std::size_t total_cells = static_cast<std::size_t>(cell_count(lmax));
  std::vector<Real> values;
  std::vector<Real> weighted(total_cells);  // e(q) G(q)
  values.reserve(total_cells);
  Real sum, w, acc;
  mpfr_ptr sum_p = sum.backend().data();
  mpfr_ptr w_p = w.backend().data();
  mpfr_ptr acc_p = acc.backend().data();

  for (int level = 0; level <= lmax; ++level) {
    build_level(level);
    const LevelData& target = levels.back();
    const Real& bracket = target.corrections[0];
    for (int n1 = 0; 2 * n1 <= level; ++n1) {
      const int n2 = level - 2 * n1;
      mpfr_set_zero(sum_p, 1);
      for (int q1 = 0; q1 <= n1; ++q1) {
        for (int q2 = 0; q2 <= n2; ++q2) {
          if (q1 == n1 && q2 == n2) continue;
          const auto qi = static_cast<std::size_t>(cell_index(q1, q2));
          mpfr_srcptr eg = weighted[qi].backend().data();
          if (mpfr_zero_p(eg)) continue;
          const int d1 = n1 - q1;
          const int d2 = n2 - q2;
          const auto& corr = levels[static_cast<std::size_t>(grading(q1, q2))].corrections;
          mpfr_set_zero(w_p, 1);
          for (int l1 = 0; l1 <= std::min(d1, K); ++l1) {
            mpfr_set_zero(acc_p, 1);
            const std::size_t row = static_cast<std::size_t>(l1) * width;
            for (int l2 = 0; l2 <= d2 && l1 + l2 <= K; ++l2) {
              mpfr_fma(acc_p, corr[row + static_cast<std::size_t>(l2)].backend().data(),
                       t2[static_cast<std::size_t>(d2 - l2)].backend().data(), acc_p, MPFR_RNDN);
            }
            mpfr_fma(w_p, acc_p, t1[static_cast<std::size_t>(d1 - l1)].backend().data(), w_p, MPFR_RNDN);
          }
          mpfr_fma(sum_p, eg, w_p, sum_p, MPFR_RNDN);
        }
      }

      if (abs(bracket) < Real(1e-6)) {
        throw Error(ErrorKind::ill_conditioned, kModule,
                    "correction bracket near zero at (" + std::to_string(n1) + "," +
                        std::to_string(n2) + "), m = " + std::to_string(m));
      }
      Real e = (scale / target.gamma * b_self_(m, n1, n2) - sum / target.gamma) / bracket;
      if (!isfinite(e)) {
        throw Error(ErrorKind::precision_exhausted, kModule,
                    "non-finite e-coefficient at (" + std::to_string(n1) + "," + std::to_string(n2) + ")");
      }
      weighted[values.size()] = e * target.gamma;
      values.push_back(std::move(e));
    }
    if (stop && stop(level, values)) break;
  }
  return values;
}

Real EGridSolver::solve_origin(int m, int K) const { return solve(m, K, 0).front(); }

EGrid e_grid(const Frame& frame, Kappa kappa, int lmax, int m, int K) {
  constexpr int kMStep = 10;
  EGridSolver solver(frame, kappa, m, K, lmax);
  const std::vector<Real> main = solver.solve(m, K, lmax);
  std::vector<Real> lower_k, lower_m;
  if (K >= 1) lower_k = solver.solve(m, K - 1, lmax);
  if (m - kMStep >= 1) lower_m = solver.solve(m - kMStep, K, lmax);

  EGrid grid;
  grid.kappa_source = kappa;
  grid.lmax = lmax;
  grid.m_used = m;
  grid.K_used = K;
  const auto cells = cells_up_to(lmax);
  grid.entries.reserve(cells.size());
  for (std::size_t i = 0; i < cells.size(); ++i) {
    EGridEntry entry;
    entry.n1 = cells[i].first;
    entry.n2 = cells[i].second;
    entry.value = main[i];
    entry.error = 0;
    if (!lower_k.empty()) entry.error = std::max<Real>(entry.error, Real(abs(main[i] - lower_k[i])));
    if (!lower_m.empty()) entry.error = std::max<Real>(entry.error, Real(abs(main[i] - lower_m[i])));
    grid.entries.push_back(std::move(entry));
  }
  return grid;
}

Real e_limit_estimate(const Frame& frame, Kappa kappa, int n1, int n2, int m, const BTable& b_tab) {
  if (b_tab.kappa() != kappa) {
    throw Error(ErrorKind::precondition, kModule, "limit estimate needs the table for kappa");
  }
  const int k = value(kappa);
  SignedLog num = log_gamma(Real(1 + m));
  SignedLog d1 = log_gamma(1 + frame.mu(kappa) + m);
  SignedLog d2 = log_gamma(-frame.mu(opposite(kappa)) - phi(n1, n2) + m);
  Real pref = exp(num.log_abs - d1.log_abs - d2.log_abs);
  if (num.sign * d1.sign * d2.sign < 0) pref = -pref;

  Real sum(0);
  const Real x1 = 2 * k * frame.t10;
  const Real x2 = 2 * k * frame.t20;
  for (int j1 = 0; j1 <= n1; ++j1) {
    for (int j2 = 0; j2 <= n2; ++j2) {
      const Real& b = b_tab(m, j1, j2);
      if (b == 0) continue;
      sum += b * pow(x1, n1 - j1) / factorial(n1 - j1) * pow(x2, n2 - j2) / factorial(n2 - j2);
    }
  }
  return -pi() * pref * pow(Real(2 * k) * frame.s0, m) * sum;
}

Complex eta() { return exp_i_pi(Real(1) / 3); }

bool levels_converged(const std::vector<Real>& contributions, const Real& tolerance) {
  if (contributions.size() < 2) return false;
  Real scale(0);
  for (const auto& c : contributions) scale = std::max<Real>(scale, c);
  if (scale == 0) return true;
  const Real bound = tolerance * scale;
  return contributions[contributions.size() - 1] <= bound &&
         contributions[contributions.size() - 2] <= bound;
}

PartialSums partial_sums(const Frame& frame, const EGrid& grid, int levels, double level_tolerance) {
  PartialSums out;
  out.kappa = grid.kappa_source;
  out.S = {Real(0), Real(0), Real(0)};
  const int k = value(grid.kappa_source);
  const int used = std::min(levels, grid.lmax + 1);
  const Real base = Real(2 * k) * frame.s0;
  const Real frac = 2 * frame.s0;
  for (int l = 0; l < used; ++l) {
    Real level_sum(0);
    for (int n1 = 0; 2 * n1 <= l; ++n1) level_sum += grid.at(n1, l - 2 * n1).value;
    const Real weighted = level_sum * pow(base, -(l / 3));
    out.S[static_cast<std::size_t>(l % 3)] += weighted;
    out.level_contribution.push_back(abs(weighted) * pow(frac, Real(-(l % 3)) / 3));
  }
  out.levels_used = used;
  out.converged = levels_converged(out.level_contribution, Real(level_tolerance));
  return out;
}

PartialSums partial_sums(const Frame& frame, const EGrid& grid) {
  return partial_sums(frame, grid, grid.lmax + 1);
}

std::array<Complex, 3> multipliers_from_sums(const Frame& frame, Kappa kappa,
                                             const std::array<Real, 3>& S) {
  const Complex e = eta();
  const Real c1 = pow(2 * frame.s0, Real(-1) / 3);
  const Real c2 = pow(2 * frame.s0, Real(-2) / 3);
  // sigma_n(+1) carries eta^(2n), eta^(4n); sigma_n(-1) carries eta^(2n+1), eta^(4n+2).
  std::array<Complex, 3> out;
  for (int n = 0; n < 3; ++n) {
    const int p = kappa == Kappa::plus ? 2 * n : 2 * n + 1;
    out[static_cast<std::size_t>(n)] =
        Complex(S[0]) + pow(e, p) * (c1 * S[1]) + pow(e, 2 * p) * (c2 * S[2]);
  }
  return out;
}

namespace {

StokesSet assemble(const Frame& frame, PartialSums plus, PartialSums minus) {
  StokesSet set;
  set.eta = eta();
  set.S[0] = plus.S;
  set.S[1] = minus.S;
  set.sigma[0] = multipliers_from_sums(frame, Kappa::plus, plus.S);
  set.sigma[1] = multipliers_from_sums(frame, Kappa::minus, minus.S);
  set.sums[0] = std::move(plus);
  set.sums[1] = std::move(minus);
  return set;
}

}  // namespace

StokesSet stokes_multipliers(const Frame& frame, const EGrid& grid_plus, const EGrid& grid_minus,
                             int lmax, double level_tolerance) {
  if (grid_plus.kappa_source != Kappa::plus || grid_minus.kappa_source != Kappa::minus) {
    throw Error(ErrorKind::precondition, kModule, "grids passed in the wrong order");
  }
  return assemble(frame, partial_sums(frame, grid_plus, lmax + 1, level_tolerance),
                  partial_sums(frame, grid_minus, lmax + 1, level_tolerance));
}

StokesSet stokes_from_sums(const Frame& frame, const std::array<Real, 3>& S_plus,
                           const std::array<Real, 3>& S_minus) {
  PartialSums plus, minus;
  plus.kappa = Kappa::plus;
  plus.S = S_plus;
  minus.kappa = Kappa::minus;
  minus.S = S_minus;
  return assemble(frame, std::move(plus), std::move(minus));
}

namespace {

struct SideResult {
  EGrid grid;
  EGrid grid_lower_k;
  EGrid grid_lower_m;
  std::vector<std::string> warnings;
};

EGrid make_grid(Kappa kappa, int lmax, int m, int K, const std::vector<Real>& values) {
  EGrid grid;
  grid.kappa_source = kappa;
  grid.lmax = lmax;
  grid.m_used = m;
  grid.K_used = K;
  const auto cells = cells_up_to(lmax);
  for (std::size_t i = 0; i < cells.size(); ++i) {
    grid.entries.push_back({cells[i].first, cells[i].second, values[i], Real(0)});
  }
  return grid;
}

SideResult compute_side(const Frame& frame, Kappa kappa, const StokesOptions& opt) {
  SideResult out;
  const std::string side = kappa == Kappa::plus ? "kappa=+1" : "kappa=-1";
  const int m_cap = opt.m ? *opt.m : opt.m_max;
  const int lmax_cap = opt.lmax ? *opt.lmax : opt.lmax_cap;
  EGridSolver solver(frame, kappa, m_cap, opt.K, lmax_cap);

  int m = m_cap;
  if (!opt.m) {
    // Stabilise the low-grading part of the grid; e(0,0) alone can be exactly
    // m-independent while higher cells are not.
    const Real tol(opt.m_tolerance);
    const int probe = std::min(opt.lmax_start, lmax_cap);
    const auto relative_change = [](const std::vector<Real>& a, const std::vector<Real>& b) {
      Real diff(0), scale(0);
      for (std::size_t i = 0; i < a.size(); ++i) {
        diff = std::max<Real>(diff, Real(abs(a[i] - b[i])));
        scale = std::max<Real>(scale, Real(abs(a[i])));
      }
      return scale == 0 ? diff : Real(diff / scale);
    };
    std::vector<Real> previous = solver.solve(opt.m_start, opt.K, probe);
    bool settled = false;
    for (m = opt.m_start + opt.m_step; m <= opt.m_max; m += opt.m_step) {
      std::vector<Real> current = solver.solve(m, opt.K, probe);
      const bool ok = relative_change(current, previous) <= tol;
      previous = std::move(current);
      if (ok) {
        settled = true;
        break;
      }
    }
    if (!settled) {
      m = opt.m_max;
      out.warnings.push_back(side + ": low-grading e-coefficients did not stabilise to relative " +
                             to_decimal(tol, 3) + " by m = " + std::to_string(opt.m_max));
    }
  }

  EGridSolver::LevelCallback stop;
  if (!opt.lmax) {
    const Real tol(opt.level_tolerance);
    const int k = value(kappa);
    stop = [&, tol, k](int level, const std::vector<Real>& values) {
      if (level < opt.lmax_start) return false;
      // Rebuild the level contributions from the values computed so far.
      std::vector<Real> contributions;
      const Real base = Real(2 * k) * frame.s0;
      for (int l = 0; l <= level; ++l) {
        Real level_sum(0);
        for (int n1 = 0; 2 * n1 <= l; ++n1) {
          level_sum += values[static_cast<std::size_t>(cell_index(n1, l - 2 * n1))];
        }
        contributions.push_back(abs(level_sum * pow(base, -(l / 3))) *
                                pow(2 * frame.s0, Real(-(l % 3)) / 3));
      }
      return levels_converged(contributions, tol);
    };
  }
  std::vector<Real> main = solver.solve(m, opt.K, lmax_cap, stop);
  int lmax = 0;
  while (cell_count(lmax) < static_cast<int>(main.size())) ++lmax;
  out.grid = make_grid(kappa, lmax, m, opt.K, main);

  if (opt.K >= 1) {
    out.grid_lower_k = make_grid(kappa, lmax, m, opt.K - 1, solver.solve(m, opt.K - 1, lmax));
  } else {
    out.grid_lower_k = out.grid;
  }
  const int m_low = m - opt.m_step;
  if (m_low >= 1) {
    out.grid_lower_m = make_grid(kappa, lmax, m_low, opt.K, solver.solve(m_low, opt.K, lmax));
  } else {
    out.grid_lower_m = out.grid;
  }
  for (std::size_t i = 0; i < out.grid.entries.size(); ++i) {
    auto& entry = out.grid.entries[i];
    entry.error = std::max<Real>(Real(abs(entry.value - out.grid_lower_k.entries[i].value)),
                      Real(abs(entry.value - out.grid_lower_m.entries[i].value)));
  }
  return out;
}

}  // namespace

StokesComputation compute_stokes(const Frame& frame, const StokesOptions& options) {
  if (options.K < 0 || options.m_start < 1 || options.m_step < 1 || options.m_max < options.m_start ||
      options.lmax_cap < 0 || (options.m && *options.m < 1) || (options.lmax && *options.lmax < 0)) {
    throw Error(ErrorKind::precondition, kModule, "invalid truncation options");
  }
  SideResult plus, minus;
  if (options.parallel && mpfr_buildopt_tls_p()) {
    auto fut = std::async(std::launch::async, [&] { return compute_side(frame, Kappa::minus, options); });
    plus = compute_side(frame, Kappa::plus, options);
    minus = fut.get();
  } else {
    plus = compute_side(frame, Kappa::plus, options);
    minus = compute_side(frame, Kappa::minus, options);
  }

  StokesComputation out;
  out.lmax_used = std::max(plus.grid.lmax, minus.grid.lmax);
  const double tol = options.level_tolerance;
  out.main = assemble(frame, partial_sums(frame, plus.grid, plus.grid.lmax + 1, tol),
                      partial_sums(frame, minus.grid, minus.grid.lmax + 1, tol));
  out.lower_K = assemble(frame, partial_sums(frame, plus.grid_lower_k, plus.grid.lmax + 1, tol),
                         partial_sums(frame, minus.grid_lower_k, minus.grid.lmax + 1, tol));
  out.lower_m = assemble(frame, partial_sums(frame, plus.grid_lower_m, plus.grid.lmax + 1, tol),
                         partial_sums(frame, minus.grid_lower_m, minus.grid.lmax + 1, tol));
  // Dropping gradings lmax-2..lmax removes the last level of each of S0, S1, S2.
  out.truncated = assemble(frame, partial_sums(frame, plus.grid, std::max(1, plus.grid.lmax - 2), tol),
                           partial_sums(frame, minus.grid, std::max(1, minus.grid.lmax - 2), tol));
  out.grid_plus = std::move(plus.grid);
  out.grid_minus = std::move(minus.grid);

  out.warnings = std::move(plus.warnings);
  out.warnings.insert(out.warnings.end(), minus.warnings.begin(), minus.warnings.end());
  for (const auto& sums : out.main.sums) {
    if (!sums.converged) {
      out.warnings.push_back(std::string(sums.kappa == Kappa::plus ? "kappa=+1" : "kappa=-1") +
                             ": level sums not converged by grading " +
                             std::to_string(sums.levels_used - 1));
    }
  }
  return out;
}

}  // namespace charexp
