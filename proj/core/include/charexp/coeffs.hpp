#pragma once

#include "charexp/frame.hpp"
#include "charexp/numeric.hpp"

#include <iosfwd>
#include <vector>

namespace charexp {

/// Coefficients a_0..a_N of the formal solution exp(kappa P) z^-tau sum a_n z^-n.
struct CoeffSeries {
  Kappa kappa = Kappa::plus;
  std::vector<Real> values;
};

/// Runs the six-term recurrence for a_n; a_0 = 1 and a_{-8..-1} = 0.
CoeffSeries a_series(const Frame& frame, Kappa kappa, int N);

/// Triangular table b(kappa; m, n1, n2) for m <= M, n1 <= N1cap, n2 <= N2cap
/// and, when `grading_cap` is non-negative, 2 n1 + n2 <= grading_cap.
///
/// Entries vanish outside n1 + n2 <= m. Reads at negative indices return
/// zero; reads beyond the caps throw incomplete_table.
class BTable {
 public:
  BTable(Kappa kappa, int M, int n1_cap, int n2_cap, int grading_cap = -1);

  Kappa kappa() const noexcept { return kappa_; }
  int max_m() const noexcept { return max_m_; }
  int n1_cap() const noexcept { return n1_cap_; }
  int n2_cap() const noexcept { return n2_cap_; }
  int grading_cap() const noexcept { return grading_cap_; }

  bool covers(int m, int n1, int n2) const noexcept {
    return m <= max_m_ && n1 <= n1_cap_ && n2 <= n2_cap_ &&
           (grading_cap_ < 0 || 2 * n1 + n2 <= grading_cap_);
  }

  const Real& operator()(int m, int n1, int n2) const;

 private:
  friend BTable b_table(const Frame&, Kappa, int, int, int, int);

  std::size_t index(int m, int n1, int n2) const noexcept {
    return (static_cast<std::size_t>(m) * static_cast<std::size_t>(n1_cap_ + 1) +
            static_cast<std::size_t>(n1)) *
               static_cast<std::size_t>(n2_cap_ + 1) +
           static_cast<std::size_t>(n2);
  }

  Kappa kappa_;
  int max_m_;
  int n1_cap_;
  int n2_cap_;
  int grading_cap_;
  std::vector<Real> entries_;
  Real zero_;
};

/// Fills the table in increasing m. Entries with 3m - 2 n1 - n2 = 0 other than
/// the origin are integration constants and are set to zero.
BTable b_table(const Frame& frame, Kappa kappa, int M, int n1_cap, int n2_cap,
               int grading_cap = -1);

/// a_n(kappa) as the sum of b(kappa; m, n1, n2) over 3m - 2 n1 - n2 = n,
/// n1 + n2 <= m. Throws incomplete_table if any such index is beyond the caps.
Real a_from_b(const BTable& table, int n);

/// Two-term closed form of b(kappa; m, 0, 0), valid when D3 = D6 = 0:
/// (2 kappa s0)^-m ((tau - L)/3)_m ((tau + L)/3)_m / m!.
Real b_closed_form(const Frame& frame, Kappa kappa, int m);

/// Debug dump, one "m n1 n2 value" line per supported entry.
void write_table(std::ostream& out, const BTable& table);

}  // namespace charexp
