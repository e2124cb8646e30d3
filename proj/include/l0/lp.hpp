#pragma once

// Exact-rational primal simplex for   max c·x  s.t.  A x <= b,  x >= 0
// with b >= 0, so the origin is a feasible starting vertex. The dictionary
// keeps only the nonbasic columns, which matters when there are thousands
// of constraints over a dozen variables.

#include <cstddef>
#include <string>
#include <vector>

#include "l0/error.hpp"
#include "l0/rational.hpp"

namespace l0 {

struct RationalLP {
  std::vector<Rational> objective;               // c, one per variable
  std::vector<std::vector<Rational>> rows;       // A, one row per constraint
  std::vector<Rational> rhs;                     // b >= 0

  std::size_t variables() const { return objective.size(); }
  std::size_t constraints() const { return rows.size(); }

  void validate() const {
    if (rhs.size() != rows.size()) throw InputError("LP: rhs/rows size mismatch");
    for (const auto& r : rows) {
      if (r.size() != objective.size()) throw InputError("LP: row width mismatch");
    }
    for (const auto& b : rhs) {
      if (sgn(b) < 0) throw InputError("LP: right-hand sides must be nonnegative");
    }
  }
};

struct LPSolution {
  Rational value;
  std::vector<Rational> primal;  // x*
  std::vector<Rational> dual;    // y* >= 0 with A^T y >= c and b·y = value
  std::size_t pivots = 0;
};

/// Bland's rule: lowest-index improving variable enters, ties in the ratio
/// test leave by lowest index. Throws VerificationError past the
/// C(m+n, n) vertex bound, which would indicate cycling.
inline LPSolution solve_lp(const RationalLP& lp) {
  lp.validate();
  const std::size_t n = lp.variables();
  const std::size_t m = lp.constraints();

  std::vector<std::vector<Rational>> coef = lp.rows;
  std::vector<Rational> rhs = lp.rhs;
  std::vector<Rational> obj = lp.objective;
  Rational z0 = 0;
  std::vector<std::size_t> basic(m), nonbasic(n);
  for (std::size_t i = 0; i < m; ++i) basic[i] = n + i;
  for (std::size_t j = 0; j < n; ++j) nonbasic[j] = j;

  const Integer cap = binomial(static_cast<unsigned long>(m + n), static_cast<unsigned long>(n));
  std::size_t pivots = 0;

  while (true) {
    std::size_t enter = n;
    for (std::size_t j = 0; j < n; ++j) {
      if (sgn(obj[j]) > 0 && (enter == n || nonbasic[j] < nonbasic[enter])) enter = j;
    }
    if (enter == n) break;

    std::size_t leave = m;
    Rational best;
    for (std::size_t i = 0; i < m; ++i) {
      if (sgn(coef[i][enter]) <= 0) continue;
      Rational ratio = rhs[i] / coef[i][enter];
      if (leave == m || ratio < best || (ratio == best && basic[i] < basic[leave])) {
        leave = i;
        best = ratio;
      }
    }
    if (leave == m) throw VerificationError("LP unbounded along variable " + std::to_string(nonbasic[enter]));

    if (Integer(static_cast<unsigned long>(++pivots)) > cap) {
      throw VerificationError("simplex exceeded the vertex-count bound; cycling suspected");
    }

    // pivot
    const Rational inv = 1 / coef[leave][enter];
    auto& prow = coef[leave];
    rhs[leave] *= inv;
    for (std::size_t j = 0; j < n; ++j) {
      if (j != enter) prow[j] *= inv;
    }
    prow[enter] = inv;
    for (std::size_t i = 0; i < m; ++i) {
      if (i == leave) continue;
      Rational f = coef[i][enter];
      if (sgn(f) == 0) continue;
      auto& row = coef[i];
      rhs[i] -= f * rhs[leave];
      for (std::size_t j = 0; j < n; ++j) {
        if (j != enter && sgn(prow[j]) != 0) row[j] -= f * prow[j];
      }
      row[enter] = -f * inv;
    }
    Rational f = obj[enter];
    z0 += f * rhs[leave];
    for (std::size_t j = 0; j < n; ++j) {
      if (j != enter && sgn(prow[j]) != 0) obj[j] -= f * prow[j];
    }
    obj[enter] = -f * inv;
    std::swap(basic[leave], nonbasic[enter]);
  }

  LPSolution sol;
  sol.value = z0;
  sol.pivots = pivots;
  sol.primal.assign(n, 0);
  sol.dual.assign(m, 0);
  for (std::size_t i = 0; i < m; ++i) {
    if (basic[i] < n) sol.primal[basic[i]] = rhs[i];
  }
  for (std::size_t j = 0; j < n; ++j) {
    if (nonbasic[j] >= n) sol.dual[nonbasic[j] - n] = -obj[j];
  }
  return sol;
}

/// Replays feasibility of both solutions and exact strong duality.
/// Returns an empty string on success, otherwise the first failure.
inline std::string check_lp_certificate(const RationalLP& lp, const LPSolution& sol) {
  const std::size_t n = lp.variables();
  const std::size_t m = lp.constraints();
  if (sol.primal.size() != n || sol.dual.size() != m) return "certificate size mismatch";
  Rational primal_value = 0;
  for (std::size_t j = 0; j < n; ++j) {
    if (sgn(sol.primal[j]) < 0) return "negative primal variable " + std::to_string(j);
    primal_value += lp.objective[j] * sol.primal[j];
  }
  for (std::size_t i = 0; i < m; ++i) {
    Rational lhs = 0;
    for (std::size_t j = 0; j < n; ++j) lhs += lp.rows[i][j] * sol.primal[j];
    if (lhs > lp.rhs[i]) return "primal violates constraint " + std::to_string(i);
    if (sgn(sol.dual[i]) < 0) return "negative dual variable " + std::to_string(i);
  }
  Rational dual_value = 0;
  for (std::size_t i = 0; i < m; ++i) dual_value += lp.rhs[i] * sol.dual[i];
  for (std::size_t j = 0; j < n; ++j) {
    Rational col = 0;
    for (std::size_t i = 0; i < m; ++i) col += lp.rows[i][j] * sol.dual[i];
    if (col < lp.objective[j]) return "dual violates column " + std::to_string(j);
  }
  if (primal_value != sol.value) return "primal value mismatch";
  if (dual_value != sol.value) return "duality gap " + to_string(dual_value - primal_value);
  return {};
}

}  // namespace l0
