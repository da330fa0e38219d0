#include "charexp/coeffs.hpp"

#include <mpfr.h>

#include <algorithm>
#include <ostream>
#include <string>

namespace charexp {

namespace {

constexpr const char* kModule = "coeffs";

}  // namespace

CoeffSeries a_series(const Frame& frame, Kappa kappa, int N) {
  if (N < 0) throw Error(ErrorKind::precondition, kModule, "a_series needs N >= 0");
  const EquationParams& p = frame.params;
  const int k = value(kappa);
  const Real& tau = frame.tau(kappa);
  const Real& L = frame.L();

  CoeffSeries out;
  out.kappa = kappa;
  out.values.reserve(static_cast<std::size_t>(N) + 1);
  out.values.emplace_back(1);
  auto a = [&out](int i) -> Real { return i < 0 ? Real(0) : out.values[static_cast<std::size_t>(i)]; };

  const Real c1 = frame.p1 * frame.p1 - p.b(2);
  for (int n = 1; n <= N; ++n) {
    Real rhs = (-4 * k * frame.p2 * (tau + n - 2) + c1) * a(n - 1);
    rhs += (-2 * k * frame.p1 * (tau + n - Real(5) / 2) - p.b(1)) * a(n - 2);
    rhs += (tau + n - 3 - L) * (tau + n - 3 + L) * a(n - 3);
    for (int m = 1; m <= 6; ++m) {
      if (n - m - 3 >= 0) rhs -= p.d(m) * a(n - m - 3);
    }
    out.values.push_back(rhs / (6 * k * frame.p3 * n));
  }
  return out;
}

BTable::BTable(Kappa kappa, int M, int n1_cap, int n2_cap, int grading_cap)
    : kappa_(kappa), max_m_(M), n1_cap_(n1_cap), n2_cap_(n2_cap), grading_cap_(grading_cap), zero_(0) {
  if (M < 0 || n1_cap < 0 || n2_cap < 0) {
    throw Error(ErrorKind::precondition, kModule, "table caps must be non-negative");
  }
  entries_.resize(static_cast<std::size_t>(M + 1) * static_cast<std::size_t>(n1_cap + 1) *
                  static_cast<std::size_t>(n2_cap + 1));
}

const Real& BTable::operator()(int m, int n1, int n2) const {
  if (m < 0 || n1 < 0 || n2 < 0) return zero_;
  if (!covers(m, n1, n2)) {
    throw Error(ErrorKind::incomplete_table, kModule,
                "b(" + std::to_string(m) + "," + std::to_string(n1) + "," + std::to_string(n2) +
                    ") is outside the table");
  }
  return entries_[index(m, n1, n2)];
}

BTable b_table(const Frame& frame, Kappa kappa, int M, int n1_cap, int n2_cap, int grading_cap) {
  BTable t(kappa, M, n1_cap, n2_cap, grading_cap);
  const EquationParams& p = frame.params;
  const int k = value(kappa);
  const Real& tau = frame.tau(kappa);
  const Real L2 = frame.L() * frame.L();
  const Real t20sq_minus_b2 = frame.t20 * frame.t20 - p.b(2);
  const Real denom_base = 6 * k * frame.s0;

  // The three m-1 coefficients and the divisor depend on the grade only.
  const std::size_t grades = static_cast<std::size_t>(3 * M) + 1;
  std::vector<Real> c0(grades), c1(grades), c2(grades), inv(grades);
  for (std::size_t grade = 1; grade < grades; ++grade) {
    const Real g = Real(static_cast<int>(grade)) + tau;
    c0[grade] = (g - 3) * (g - 3) - L2;
    c1[grade] = -4 * k * frame.t10 * (g - 2) + t20sq_minus_b2;
    c2[grade] = -2 * k * frame.t20 * (g - Real(5) / 2) - p.b(1);
    inv[grade] = 1 / (denom_base * static_cast<int>(grade));
  }
  // D-terms as (coefficient, dm, dn1, dn2); zero coefficients are dropped.
  struct Shift {
    Real minus_d;
    int dm, dn1, dn2;
  };
  std::vector<Shift> shifts;
  const int shape[6][3] = {{2, 1, 0}, {2, 0, 1}, {2, 0, 0}, {3, 1, 0}, {3, 0, 1}, {3, 0, 0}};
  for (int j = 1; j <= 6; ++j) {
    if (p.d(j) != 0) shifts.push_back({-p.d(j), shape[j - 1][0], shape[j - 1][1], shape[j - 1][2]});
  }

  // Out-of-range reads inside the recurrence are zero by convention.
  auto at = [&t](int m, int n1, int n2) -> mpfr_srcptr {
    return (m < 0 || n1 < 0 || n2 < 0) ? t.zero_.backend().data()
                                       : t.entries_[t.index(m, n1, n2)].backend().data();
  };

  for (int m = 0; m <= M; ++m) {
    for (int n1 = 0; n1 <= std::min(n1_cap, m); ++n1) {
      for (int n2 = 0; n2 <= n2_cap && n1 + n2 <= m; ++n2) {
        if (grading_cap >= 0 && 2 * n1 + n2 > grading_cap) break;
        Real& entry = t.entries_[t.index(m, n1, n2)];
        if (m == 0) {
          entry = 1;
          continue;
        }
        const int grade = 3 * m - 2 * n1 - n2;
        if (grade == 0) continue;
        const auto gi = static_cast<std::size_t>(grade);
        mpfr_ptr e = entry.backend().data();
        mpfr_mul(e, c0[gi].backend().data(), at(m - 1, n1, n2), MPFR_RNDN);
        mpfr_fma(e, c1[gi].backend().data(), at(m - 1, n1 - 1, n2), e, MPFR_RNDN);
        mpfr_fma(e, c2[gi].backend().data(), at(m - 1, n1, n2 - 1), e, MPFR_RNDN);
        for (const Shift& s : shifts) {
          mpfr_fma(e, s.minus_d.backend().data(), at(m - s.dm, n1 - s.dn1, n2 - s.dn2), e, MPFR_RNDN);
        }
        mpfr_mul(e, e, inv[gi].backend().data(), MPFR_RNDN);
      }
    }
  }
  return t;
}

Real a_from_b(const BTable& table, int n) {
  if (n < 0) throw Error(ErrorKind::precondition, kModule, "a_from_b needs n >= 0");
  Real sum(0);
  // 3m - n = 2 n1 + n2 <= 2 (n1 + n2) <= 2m bounds m to [n/3, n].
  for (int m = (n + 2) / 3; m <= n; ++m) {
    const int rest = 3 * m - n;
    for (int n1 = 0; 2 * n1 <= rest; ++n1) {
      const int n2 = rest - 2 * n1;
      if (n1 + n2 > m) continue;
      sum += table(m, n1, n2);
    }
  }
  return sum;
}

Real b_closed_form(const Frame& frame, Kappa kappa, int m) {
  if (frame.params.d(3) != 0 || frame.params.d(6) != 0) {
    throw Error(ErrorKind::precondition, kModule, "closed form requires D3 = D6 = 0");
  }
  if (m < 0) throw Error(ErrorKind::precondition, kModule, "closed form needs m >= 0");
  const Real& tau = frame.tau(kappa);
  const Real lo = (tau - frame.L()) / 3;
  const Real hi = (tau + frame.L()) / 3;
  const Real step = 2 * value(kappa) * frame.s0;
  Real r(1);
  for (int i = 0; i < m; ++i) {
    r *= (lo + i) * (hi + i) / (step * (i + 1));
  }
  return r;
}

void write_table(std::ostream& out, const BTable& table) {
  for (int m = 0; m <= table.max_m(); ++m) {
    for (int n1 = 0; n1 <= table.n1_cap() && n1 <= m; ++n1) {
      for (int n2 = 0; n2 <= table.n2_cap() && n1 + n2 <= m; ++n2) {
        if (!table.covers(m, n1, n2)) continue;
        out << m << ' ' << n1 << ' ' << n2 << ' ' << to_decimal(table(m, n1, n2)) << '\n';
      }
    }
  }
}

}  // namespace charexp
